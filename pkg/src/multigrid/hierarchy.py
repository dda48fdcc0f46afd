#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Multigrid Hierarchy - V-cycles geométricos para K̂ + D (D diagonal ≥ 0)

Este módulo é responsável por:
1. Rediscretizar K̂ em cada nível (sem produto de Galerkin)
2. Injetar o shift diagonal nos níveis grossos (nós coincidentes)
3. Aplicar V-cycles com Jacobi amortecido e R = Pᵀ
4. Resolver blocos deslocados até a tolerância, com limite de ciclos

Partindo de x0 = 0, um número fixo de ciclos é um operador linear
simétrico positivo definido (pré e pós-suavização iguais, solve grosso
exato), que é o que o PCG externo exige do precondicionador.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.sparse import csr_matrix

from fem.assembly import SpaceOperators, build_space_operators
from fem.mesh import ControlBox, SpaceMesh, build_mesh
from fem.transfer import prolongation
from linalg.sparse_ops import canonical, diagonal_matrix
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, ConvergenceError, NonFiniteError
from utils.logger_config import setup_logger

MAX_COARSE_UNKNOWNS = 81


@dataclass(frozen=True)
class MultigridSettings:
    coarsest_level: int = 2
    pre_sweeps: int = 2
    post_sweeps: int = 2
    damping: float = 0.8
    max_cycles: int = 30
    precond_cycles: int = 2

    @classmethod
    def from_config(cls) -> "MultigridSettings":
        cfg = config_manager.get_multigrid_config()
        return cls(
            coarsest_level=int(cfg["coarsest_level"]),
            pre_sweeps=int(cfg["pre_sweeps"]),
            post_sweeps=int(cfg["post_sweeps"]),
            damping=float(cfg["damping"]),
            max_cycles=int(cfg["max_cycles"]),
            precond_cycles=int(cfg["precond_cycles"]),
        )


class MultigridHierarchy:
    """
    Hierarquia do nível mais grosso (índice 0) ao mais fino (índice -1).
    """

    def __init__(
        self,
        meshes: List[SpaceMesh],
        operators: List[SpaceOperators],
        prolongations: List[csr_matrix],
        settings: Optional[MultigridSettings] = None,
        shift: Optional[np.ndarray] = None,
    ):
        self.logger, _ = setup_logger("multigrid", log_to_file=True)
        self.meshes = meshes
        self.operators = operators
        self.prolongations = prolongations  # prolongations[l]: nível l → l + 1
        self.settings = settings or MultigridSettings()

        if meshes[0].n_interior > MAX_COARSE_UNKNOWNS:
            raise ConfigurationError(
                f"Nível grosso {meshes[0].level} tem {meshes[0].n_interior} incógnitas "
                f"(máximo {MAX_COARSE_UNKNOWNS})",
                field="multigrid.coarsest_level",
            )

        self._injections = [self._coincident_nodes(meshes[l], meshes[l + 1]) for l in range(len(meshes) - 1)]
        self.shifts = self._restrict_shift(shift)
        self.matrices = [
            canonical(ops.khat + diagonal_matrix(level_shift)) if np.any(level_shift) else ops.khat
            for ops, level_shift in zip(operators, self.shifts)
        ]
        self.diagonals = [matrix.diagonal() for matrix in self.matrices]
        self._coarse_factor = cho_factor(self.matrices[0].toarray())

    @classmethod
    def build(
        cls,
        level: int,
        dt: float,
        nu: float = 1.0,
        a0: float = 0.0,
        stationary: bool = False,
        control_box: Optional[ControlBox] = None,
        settings: Optional[MultigridSettings] = None,
        finest: Optional[SpaceOperators] = None,
    ) -> "MultigridHierarchy":
        """Rediscretiza K̂ em todos os níveis entre o mais grosso e `level`"""
        settings = settings or MultigridSettings.from_config()
        coarsest = max(1, min(settings.coarsest_level, level))
        meshes = [build_mesh(l, control_box) for l in range(coarsest, level + 1)]
        operators = [build_space_operators(mesh, dt, nu, a0, stationary) for mesh in meshes[:-1]]
        operators.append(finest or build_space_operators(meshes[-1], dt, nu, a0, stationary))
        prolongations = [prolongation(meshes[l], meshes[l + 1]) for l in range(len(meshes) - 1)]
        return cls(meshes, operators, prolongations, settings)

    @staticmethod
    def _coincident_nodes(coarse: SpaceMesh, fine: SpaceMesh) -> np.ndarray:
        """Índice interior fino do nó (2I, 2J) de cada nó interior grosso"""
        ij = np.rint(coarse.interior_coordinates * coarse.cells_per_side).astype(np.int64)
        fine_global = (2 * ij[:, 1]) * (fine.cells_per_side + 1) + 2 * ij[:, 0]
        return fine.global_to_interior[fine_global]

    def _restrict_shift(self, shift: Optional[np.ndarray]) -> List[np.ndarray]:
        """
        Injeção nos nós coincidentes da densidade d/m, reescalada pela massa
        grossa: um shift c·M no nível fino vira c·M em todos os níveis.
        """
        n_levels = len(self.meshes)
        if shift is None:
            return [np.zeros(ops.n) for ops in self.operators]
        shift = np.asarray(shift, dtype=float)
        if shift.shape != (self.operators[-1].n,):
            raise ConfigurationError(f"Shift com forma {shift.shape}, esperado ({self.operators[-1].n},)", field="shift")
        if np.any(shift < 0):
            raise ConfigurationError("Shift diagonal deve ser não negativo", field="shift")

        shifts = [None] * n_levels
        shifts[-1] = shift
        for l in range(n_levels - 2, -1, -1):
            fine_mass = self.operators[l + 1].mass_diagonal
            density = shifts[l + 1][self._injections[l]] / fine_mass[self._injections[l]]
            shifts[l] = density * self.operators[l].mass_diagonal
        return shifts

    @property
    def level(self) -> int:
        return self.meshes[-1].level

    @property
    def n(self) -> int:
        return self.operators[-1].n

    @property
    def matrix(self) -> csr_matrix:
        """Operador do nível fino (K̂ + D)"""
        return self.matrices[-1]

    def with_shift(self, shift: Optional[np.ndarray]) -> "MultigridHierarchy":
        """Mesma hierarquia para K̂ + diag(shift)"""
        return MultigridHierarchy(self.meshes, self.operators, self.prolongations, self.settings, shift)

    def _cycle(self, index: int, b: np.ndarray) -> np.ndarray:
        """Um V-cycle a partir de x = 0 no nível `index`"""
        if index == 0:
            return cho_solve(self._coarse_factor, b)

        A = self.matrices[index]
        scaled_inverse = self.settings.damping / self.diagonals[index]
        x = np.zeros_like(b)
        for _ in range(self.settings.pre_sweeps):
            x += scaled_inverse * (b - A @ x)

        P = self.prolongations[index - 1]
        x += P @ self._cycle(index - 1, P.T @ (b - A @ x))

        for _ in range(self.settings.post_sweeps):
            x += scaled_inverse * (b - A @ x)
        return x

    def vcycle(self, b: np.ndarray, x0: Optional[np.ndarray] = None, cycles: int = 1) -> np.ndarray:
        """`cycles` ≥ 1 V-cycles a partir de x0 (linear em b quando x0 = 0)"""
        if int(cycles) != cycles or cycles < 1:
            raise ConfigurationError(f"cycles deve ser inteiro ≥ 1, recebeu {cycles}", field="cycles")
        b = np.asarray(b, dtype=float)
        top = len(self.matrices) - 1
        if x0 is None:
            x = self._cycle(top, b)
            cycles -= 1
        else:
            x = np.array(x0, dtype=float)
        for _ in range(cycles):
            x += self._cycle(top, b - self.matrix @ x)
        if not np.all(np.isfinite(x)):
            raise NonFiniteError("V-cycle produziu valores não finitos")
        return x

    def relative_residual(self, x: np.ndarray, b: np.ndarray) -> float:
        b_norm = np.linalg.norm(b)
        residual = np.linalg.norm(b - self.matrix @ x)
        return residual / b_norm if b_norm > 0 else residual

    def solve(
        self,
        b: np.ndarray,
        tol: float,
        x0: Optional[np.ndarray] = None,
        max_cycles: Optional[int] = None,
    ) -> np.ndarray:
        """
        V-cycles até ‖b − Ax‖/‖b‖ ≤ tol.

        Raises:
            ConvergenceError: limite de ciclos atingido acima da tolerância
        """
        b = np.asarray(b, dtype=float)
        b_norm = np.linalg.norm(b)
        if b_norm == 0.0:
            return np.zeros_like(b)

        max_cycles = max_cycles or self.settings.max_cycles
        x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
        r = b - self.matrix @ x
        residual = np.linalg.norm(r) / b_norm
        if residual <= tol:
            return x

        top = len(self.matrices) - 1
        for _ in range(max_cycles):
            x += self._cycle(top, r)
            if not np.all(np.isfinite(x)):
                raise NonFiniteError("V-cycle produziu valores não finitos")
            r = b - self.matrix @ x
            residual = np.linalg.norm(r) / b_norm
            if residual <= tol:
                return x

        self.logger.debug(f"🐞 Multigrid: {max_cycles} ciclos, resíduo relativo {residual:.3e} > {tol:.1e}")
        raise ConvergenceError(f"Multigrid não atingiu tol = {tol:.1e}", max_cycles, residual)

    def solve_shifted_block(
        self, shift: Optional[np.ndarray], b: np.ndarray, tol: float, x0: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """Resolve (K̂ + diag(shift)) x = b por V-cycles iterados"""
        return self.with_shift(shift).solve(b, tol, x0)
