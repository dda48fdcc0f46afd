#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Recuperação primal e superposição.

ū = Pr(p̄/γ) restrito a O e ȳ = y_d − q̄ (alvo original: o deslocamento
pela resposta livre se cancela).
"""

from dataclasses import dataclass

import numpy as np

from core.bounds import project
from parabolic.time_stepping import ParabolicSolver, ProblemSpec


@dataclass
class PrimalSolution:
    control: np.ndarray  # ū (N, n), zero fora de O
    state: np.ndarray  # ȳ (N, n)


def free_response(spec: ProblemSpec, solver: ParabolicSolver) -> np.ndarray:
    """y_free = S(0; y₀, f)"""
    return solver.primal_state_sweep(np.zeros(spec.shape), spec.initial_state, spec.source)


def effective_target(spec: ProblemSpec, solver: ParabolicSolver) -> np.ndarray:
    """y_d − y_free; igual a y_d quando y₀ = 0 e f = 0"""
    if not spec.has_free_response:
        return spec.target.copy()
    return spec.target - free_response(spec, solver)


def recover_primal(spec: ProblemSpec, q_bar: np.ndarray, p_bar: np.ndarray) -> PrimalSolution:
    control = project(p_bar / spec.gamma, spec.bounds) * spec.mesh.interior_control_mask
    return PrimalSolution(control=control, state=spec.target - q_bar)


def primal_objective(spec: ProblemSpec, solver: ParabolicSolver, control: np.ndarray):
    """
    ½‖y − y_d‖²_Δt + γ/2‖u‖²_{M1,Δt} com y = S(u; y₀, f).

    Returns:
        tuple: (valor, estado y)
    """
    state = solver.primal_state_sweep(control, spec.initial_state, spec.source)
    misfit = state - spec.target
    value = 0.5 * solver.inner_product(misfit, misfit) + 0.5 * spec.gamma * solver.control_inner_product(
        control, control
    )
    return float(value), state
