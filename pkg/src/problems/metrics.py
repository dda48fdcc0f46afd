#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Métricas das tabelas: Obj, RelDis e erros contra a solução de referência.

Quadratura no tempo das métricas parabólicas:
- ‖ȳ − y_d‖² é a soma Δt Σ_{n=0}^{N−1} nos instantes t_n, com o estado em
  t_0 igual a y₀ e y_d(t_n) amostrado em t_n;
- ‖y_d‖² (denominador de RelDis) é a regra do trapézio em t_0..t_N;
- o controle é constante por passo, ‖ū‖²_{M1,Δt} é exata.

No caso estacionário RelDis é a razão das normas, sem quadrado.
"""

from typing import Tuple

import numpy as np
from scipy.integrate import trapezoid

from core.primal_recovery import PrimalSolution
from parabolic.time_stepping import ParabolicSolver, ProblemSpec
from utils.exceptions import DimensionMismatchError


def _initial_target(spec: ProblemSpec) -> np.ndarray:
    return spec.target[0] if spec.initial_target is None else spec.initial_target


def state_trajectory(spec: ProblemSpec, state: np.ndarray) -> np.ndarray:
    """(N + 1, n): y₀ seguido dos blocos de estado, instantes t_0..t_N"""
    return np.vstack([spec.initial_state[None, :], state])


def target_trajectory(spec: ProblemSpec) -> np.ndarray:
    """(N + 1, n): y_d em t_0..t_N"""
    return np.vstack([_initial_target(spec)[None, :], spec.target])


def metrics(spec: ProblemSpec, solver: ParabolicSolver, solution: PrimalSolution) -> Tuple[float, float]:
    """
    Obj = ½‖ȳ − y_d‖² + γ/2‖ū‖²_{M1,Δt}

    RelDis = ‖ȳ − y_d‖² / ‖y_d‖² (parabólico) ou ‖ȳ − y_d‖ / ‖y_d‖
    (estacionário).

    Returns:
        tuple: (Obj, RelDis)
    """
    if solution.state.shape != spec.shape or solution.control.shape != spec.shape:
        raise DimensionMismatchError(f"Solução com forma {solution.state.shape}, esperado {spec.shape}")

    control_sq = solver.control_inner_product(solution.control, solution.control)
    if spec.stationary:
        misfit = solution.state - spec.target
        misfit_sq = solver.inner_product(misfit, misfit)
        target_sq = solver.inner_product(spec.target, spec.target)
        reldis = np.sqrt(misfit_sq / target_sq) if target_sq > 0 else float("nan")
    else:
        targets = target_trajectory(spec)
        misfit = (state_trajectory(spec, solution.state) - targets)[:-1]
        misfit_sq = solver.inner_product(misfit, misfit)
        target_sq = trapezoid(np.sum(targets * targets * solver.mass, axis=1), dx=spec.grid.dt)
        reldis = misfit_sq / target_sq if target_sq > 0 else float("nan")

    objective = 0.5 * misfit_sq + 0.5 * spec.gamma * control_sq
    return float(objective), float(reldis)


def error_norms(spec: ProblemSpec, solver: ParabolicSolver, solution: PrimalSolution, exact) -> Tuple[float, float]:
    """
    e_u = ‖ū − u*‖ na norma M1-Δt; e_y = ‖ȳ − y*‖ na norma M-Δt, ambos
    com a referência em t_{n+1}. `exact` expõe sample_control/sample_state.
    """
    u_exact = exact.sample_control(spec)
    y_exact = exact.sample_state(spec)
    if u_exact.shape != solution.control.shape or y_exact.shape != solution.state.shape:
        raise DimensionMismatchError("Solução de referência com forma incompatível")
    e_u = solver.control_norm(solution.control - u_exact)
    e_y = solver.norm(solution.state - y_exact)
    return float(e_u), float(e_y)


def observed_order(errors, ratio: float = 2.0) -> np.ndarray:
    """log₂(e_k/e_{k+1}) entre malhas consecutivas"""
    errors = np.asarray(errors, dtype=float)
    return np.log(errors[:-1] / errors[1:]) / np.log(ratio)
