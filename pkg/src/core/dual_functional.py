#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Dual Functional - Objetivo dual totalmente discreto, gradiente e Armijo

Este módulo é responsável por:
1. Avaliar J(q) = Δt Σ 1ᵀM1 θ(p) − ⟨q, y_d⟩_Δt + ½‖q‖²_Δt, p = S*(q)
2. Calcular o gradiente g = z − y_d + q (representante de Riesz em ⟨·,·⟩_Δt)
3. Fazer a busca de Armijo usando p(ρ) = p_q + ρ p_d

A busca resolve uma única equação parabólica por chamada (p_d); todas as
tentativas de passo reaproveitam a combinação afim.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from core.bounds import active_mask, project, theta
from parabolic.time_stepping import ParabolicSolver, ProblemSpec
from utils.exceptions import LineSearchError, SolverError


@dataclass
class ObjectiveCache:
    """Estados duais do ponto base e da direção: p(ρ) = p_q + ρ p_d"""

    base_state: np.ndarray
    direction_state: np.ndarray

    def state(self, step: float) -> np.ndarray:
        return self.base_state + step * self.direction_state


@dataclass
class GradientEvaluation:
    gradient: np.ndarray
    state: np.ndarray  # p = S*(q)
    adjoint: np.ndarray  # z = S(Pr(p/γ))


@dataclass
class LineSearchResult:
    step: float
    objective: float
    state: np.ndarray  # p(q + ρd) pela combinação afim
    backtracks: int
    initial_step: float
    cache: ObjectiveCache


class DualFunctional:
    """
    Objetivo dual de um problema, com alvo efetivo já deslocado pela
    resposta livre (superposição) quando y₀ ≠ 0 ou f ≠ 0.
    """

    def __init__(self, spec: ProblemSpec, solver: ParabolicSolver, target: Optional[np.ndarray] = None):
        self.spec = spec
        self.solver = solver
        self.target = spec.target if target is None else np.asarray(target, dtype=float)
        self.gamma = spec.gamma
        self.bounds = spec.bounds

    @property
    def dt(self) -> float:
        return self.solver.grid.dt

    def state(self, q: np.ndarray) -> np.ndarray:
        return self.solver.dual_state_sweep(q)

    def control(self, p: np.ndarray) -> np.ndarray:
        return project(p / self.gamma, self.bounds)

    def objective(self, q: np.ndarray, p: np.ndarray) -> float:
        """Forma θ: Δt Σ m1·θ(p) − ⟨q, y_d⟩_Δt + ½‖q‖²_Δt"""
        smooth = self.dt * np.sum(self.solver.control_mass * theta(p, self.gamma, self.bounds))
        return float(smooth - self.solver.inner_product(q, self.target) + 0.5 * self.solver.inner_product(q, q))

    def objective_four_term(self, q: np.ndarray, p: np.ndarray) -> float:
        """⟨p, Pr(p/γ)⟩_M1 − γ/2‖Pr(p/γ)‖²_M1 − ⟨q, y_d⟩_Δt + ½‖q‖²_Δt"""
        w = self.control(p)
        pairing = self.solver.control_inner_product(p, w)
        penalty = 0.5 * self.gamma * self.solver.control_inner_product(w, w)
        return float(
            pairing - penalty - self.solver.inner_product(q, self.target) + 0.5 * self.solver.inner_product(q, q)
        )

    def gradient(self, q: np.ndarray, p: Optional[np.ndarray] = None) -> GradientEvaluation:
        """g_n = z_n − y_{d,n} + q_n com z = S(Pr(p/γ)) e p = S*(q)"""
        if p is None:
            p = self.state(q)
        z = self.solver.adjoint_sweep(self.control(p))
        return GradientEvaluation(gradient=z - self.target + q, state=p, adjoint=z)

    def model_step(self, g: np.ndarray, d: np.ndarray, cache: ObjectiveCache) -> float:
        """
        Minimizador do modelo quadrático de J ao longo de d no ponto base:
        ρ* = −⟨g, d⟩ / (Δt Σ χ_𝒜 m1 p_d²/γ + ‖d‖²_Δt). Exato se nenhum nó
        muda de ramo de θ.
        """
        active = active_mask(cache.base_state, self.gamma, self.bounds)
        curvature = self.dt * np.sum(active * self.solver.control_mass * cache.direction_state**2) / self.gamma
        curvature += self.solver.inner_product(d, d)
        if curvature <= 0.0:
            return 1.0
        return float(-self.solver.inner_product(g, d) / curvature)

    def armijo_search(
        self,
        q: np.ndarray,
        g: np.ndarray,
        d: np.ndarray,
        base_state: np.ndarray,
        base_objective: Optional[float] = None,
        c: float = 0.4,
        initial_step: Optional[float] = None,
        max_backtracks: int = 60,
        iteration: Optional[int] = None,
    ) -> LineSearchResult:
        """
        Armijo: J(q + ρd) ≤ J(q) + c ρ ⟨g, d⟩_Δt, partindo de `initial_step`
        (ou do passo do modelo quadrático) e dividindo por 2.

        Exatamente uma varredura dual por chamada (p_d).
        """
        slope = self.solver.inner_product(g, d)
        if not slope < 0.0:
            raise SolverError(f"Direção não é de descida: ⟨g, d⟩ = {slope:.3e}")

        cache = ObjectiveCache(base_state, self.state(d))
        if base_objective is None:
            base_objective = self.objective(q, base_state)

        first = self.model_step(g, d, cache) if initial_step is None else float(initial_step)
        step = first
        for backtracks in range(max_backtracks + 1):
            trial_state = cache.state(step)
            trial_objective = self.objective(q + step * d, trial_state)
            if trial_objective <= base_objective + c * step * slope:
                return LineSearchResult(step, trial_objective, trial_state, backtracks, first, cache)
            step *= 0.5

        raise LineSearchError(max_backtracks, iteration)
