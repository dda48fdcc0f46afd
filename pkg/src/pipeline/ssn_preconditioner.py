#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
SSN Preconditioner - Complemento de Schur Cₖ e sua aproximação fatorada ℂₖ

Este módulo é responsável por:
1. Conjuntos ativos Πₖ (teste de intervalo fechado a ≤ p/γ ≤ b)
2. Aplicar Cₖ = ℳ1Πₖ/γ + 𝒦ℳ⁻¹𝒦ᵀ sem montar matrizes espaço-tempo
3. Aplicar ℂₖ⁻¹ com ℂₖ = (𝒦 + Dₖ)ℳ⁻¹(𝒦 + Dₖ)ᵀ, Dₖ = diag(√(m·m1)·π/√γ)
   por varredura para frente, produto por M e varredura para trás

Com Πₖ fixo durante o PCG e número fixo de V-cycles a partir de zero,
ℂₖ⁻¹ é um operador linear simétrico positivo definido.
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from scipy.sparse.linalg import factorized

from core.bounds import ControlBounds, active_mask
from linalg.sparse_ops import canonical, diagonal_matrix
from parabolic.time_stepping import ParabolicSolver
from utils.exceptions import ConfigurationError, InnerSolveError
from utils.logger_config import setup_logger


@dataclass
class ActiveSets:
    """Πₖ como máscara booleana (N, n): linha i é a diagonal de Π_{𝒜ᵢ}"""

    mask: np.ndarray
    pieces: np.ndarray  # −1 / 0 / +1 por nó (ramo de Pr)

    @classmethod
    def from_dual_state(cls, p: np.ndarray, gamma: float, bounds: ControlBounds) -> "ActiveSets":
        return cls(active_mask(p, gamma, bounds), bounds.pieces(np.asarray(p) / gamma))

    def __eq__(self, other) -> bool:
        return isinstance(other, ActiveSets) and np.array_equal(self.pieces, other.pieces)

    def changes(self, other: "ActiveSets") -> int:
        """Número de nós que mudaram de ramo"""
        return int(np.count_nonzero(self.pieces != other.pieces))

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.mask))

    def as_float(self) -> np.ndarray:
        return self.mask.astype(float)


class SchurComplementOperator:
    """v ↦ Cₖ v = ℳ1 Πₖ v/γ + 𝒦 ℳ⁻¹ 𝒦ᵀ v"""

    def __init__(self, solver: ParabolicSolver, active: ActiveSets, gamma: float):
        self.solver = solver
        self.weights = solver.control_mass * active.as_float() / gamma
        self.applications = 0

    def __call__(self, v: np.ndarray) -> np.ndarray:
        self.applications += 1
        inner = self.solver.apply_Kcal_transpose(v) / self.solver.mass
        return self.weights * v + self.solver.apply_Kcal(inner)


class FactorizedPreconditioner:
    """
    r ↦ ℂₖ⁻¹ r. Blocos (K̂ + D_n) resolvidos por `cycles` V-cycles a partir
    de zero (modo multigrid) ou por fatoração esparsa (exact=True).
    """

    def __init__(
        self,
        solver: ParabolicSolver,
        active: ActiveSets,
        gamma: float,
        cycles: int = 2,
        exact: bool = False,
    ):
        self.logger, _ = setup_logger("ssn_preconditioner", log_to_file=True)
        if cycles < 1:
            raise ConfigurationError(f"Número de V-cycles deve ser ≥ 1, recebeu {cycles}", field="multigrid.precond_cycles")
        if not exact and solver.hierarchy is None:
            raise ConfigurationError("Precondicionador multigrid exige a hierarquia", field="ssn.exact_inner")

        self.solver = solver
        self.cycles = int(cycles)
        self.exact = exact
        self.shifts = np.sqrt(solver.mass * solver.control_mass) * active.as_float() / np.sqrt(gamma)
        self.applications = 0

        cache: Dict[bytes, Callable[[np.ndarray], np.ndarray]] = {}
        self._block_solvers: List[Callable[[np.ndarray], np.ndarray]] = []
        for shift in self.shifts:
            key = shift.tobytes()
            if key not in cache:
                cache[key] = self._block_solver(shift)
            self._block_solvers.append(cache[key])
        self.logger.debug(f"🧩 ℂₖ com {len(cache)} blocos distintos (K̂ + D_n)")

    def _block_solver(self, shift: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
        if self.exact:
            matrix = canonical(self.solver.operators.khat + diagonal_matrix(shift))
            return factorized(matrix.tocsc())
        hierarchy = self.solver.hierarchy.with_shift(shift if np.any(shift) else None)
        return lambda b: hierarchy.vcycle(b, cycles=self.cycles)

    def _solve_block(self, n: int, rhs: np.ndarray) -> np.ndarray:
        x = self._block_solvers[n](rhs)
        if not np.all(np.isfinite(x)):
            raise InnerSolveError(n, "bloco do precondicionador produziu valores não finitos")
        return x

    def __call__(self, r: np.ndarray) -> np.ndarray:
        self.applications += 1
        N = r.shape[0]
        coupling = self.solver.coupling

        # (𝒦 + D) s = r, para frente
        s = np.zeros_like(r)
        previous = np.zeros(r.shape[1])
        for n in range(N):
            s[n] = self._solve_block(n, r[n] + coupling * previous)
            previous = s[n]

        t = self.solver.mass * s

        # (𝒦 + D)ᵀ x = t, para trás
        x = np.zeros_like(r)
        following = np.zeros(r.shape[1])
        for n in range(N - 1, -1, -1):
            x[n] = self._solve_block(n, t[n] + coupling * following)
            following = x[n]
        return x

    def apply_operator(self, v: np.ndarray) -> np.ndarray:
        """ℂₖ v = (𝒦 + D) ℳ⁻¹ (𝒦 + D)ᵀ v (verificação)"""
        inner = (self.solver.apply_Kcal_transpose(v) + self.shifts * v) / self.solver.mass
        return self.solver.apply_Kcal(inner) + self.shifts * inner
