#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Time Stepping - Varreduras backward-Euler e operadores bloco espaço-tempo

Este módulo é responsável por:
1. Grade temporal e especificação do problema de controle
2. Varredura dual (S*, para trás no tempo)
3. Varredura adjunta (para frente, fonte M1·w)
4. Varredura primal (para frente, com y₀ e fonte f)
5. Operadores 𝒦, 𝒦ᵀ e a matriz espaço-tempo montada

Uma função no tempo é um ndarray (N, n): linha n é o bloco do passo n.
Blocos de estado (y_d, q, z, y, f) ficam em t_{n+1}. u_n é o controle do
passo implícito t_n → t_{n+1} e também é amostrado em t_{n+1}.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix, eye, kron
from scipy.sparse.linalg import factorized

from core.bounds import ControlBounds
from fem.assembly import SpaceOperators, build_space_operators
from fem.mesh import SpaceMesh
from linalg.sparse_ops import canonical, diagonal_matrix
from multigrid.hierarchy import MultigridHierarchy, MultigridSettings
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, ConvergenceError, DimensionMismatchError, InnerSolveError
from utils.logger_config import setup_logger


@dataclass(frozen=True)
class TimeGrid:
    T: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ConfigurationError(f"N deve ser inteiro ≥ 1, recebeu {self.N}", field="N")
        if self.T <= 0:
            raise ConfigurationError(f"Horizonte T deve ser positivo, recebeu {self.T}", field="T")

    @property
    def dt(self) -> float:
        return self.T / self.N

    @property
    def state_times(self) -> np.ndarray:
        """t_{n+1}, n = 0..N−1"""
        return self.dt * np.arange(1, self.N + 1)


@dataclass
class ProblemSpec:
    """
    Problema de controle ótimo com restrição de caixa.

    target/source são funções no tempo (N, n) sobre os nós interiores,
    initial_state é (n,). initial_target é y_d(·, 0), (n,), usado só nas
    métricas (None repete o primeiro bloco de target). stationary=True é o caso elíptico (N = 1,
    T = Δt = 1, K̂ = νK + a₀M).
    """

    name: str
    gamma: float
    nu: float
    a0: float
    bounds: ControlBounds
    grid: TimeGrid
    mesh: SpaceMesh
    target: np.ndarray
    initial_state: Optional[np.ndarray] = None
    source: Optional[np.ndarray] = None
    stationary: bool = False
    initial_target: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise ConfigurationError(f"γ deve ser positivo, recebeu {self.gamma}", field="gamma")
        if not self.nu > 0:
            raise ConfigurationError(f"ν deve ser positivo, recebeu {self.nu}", field="nu")
        if self.a0 < 0:
            raise ConfigurationError(f"a₀ deve ser não negativo, recebeu {self.a0}", field="a0")
        if self.stationary and self.grid.N != 1:
            raise ConfigurationError("Problema estacionário exige N = 1", field="N")

        shape = (self.grid.N, self.mesh.n_interior)
        self.target = np.asarray(self.target, dtype=float)
        if self.target.shape != shape:
            raise DimensionMismatchError(f"Alvo y_d com forma {self.target.shape}, esperado {shape}")
        if self.initial_state is None:
            self.initial_state = np.zeros(shape[1])
        self.initial_state = np.asarray(self.initial_state, dtype=float)
        if self.initial_state.shape != (shape[1],):
            raise DimensionMismatchError(f"y₀ com forma {self.initial_state.shape}, esperado ({shape[1]},)")
        if self.source is not None:
            self.source = np.asarray(self.source, dtype=float)
            if self.source.shape != shape:
                raise DimensionMismatchError(f"Fonte f com forma {self.source.shape}, esperado {shape}")
        if self.initial_target is not None:
            self.initial_target = np.asarray(self.initial_target, dtype=float)
            if self.initial_target.shape != (shape[1],):
                raise DimensionMismatchError(f"y_d(0) com forma {self.initial_target.shape}, esperado ({shape[1]},)")

    @property
    def level(self) -> int:
        return self.mesh.level

    @property
    def shape(self):
        return (self.grid.N, self.mesh.n_interior)

    @property
    def has_free_response(self) -> bool:
        """y₀ ≠ 0 ou f ≠ 0 (superposição necessária)"""
        return bool(np.any(self.initial_state)) or (self.source is not None and bool(np.any(self.source)))


class ParabolicSolver:
    """
    Varreduras no tempo para um conjunto fixo de operadores espaciais.

    Cada solve elíptico usa a hierarquia multigrid de K̂ (tolerância
    `inner_tol`, warm start no bloco vizinho) ou, em malhas pequenas,
    uma fatoração esparsa direta (`inner_solver="direct"`).
    """

    def __init__(
        self,
        operators: SpaceOperators,
        grid: TimeGrid,
        hierarchy: Optional[MultigridHierarchy] = None,
        inner_tol: Optional[float] = None,
        inner_solver: Optional[str] = None,
    ):
        self.logger, _ = setup_logger("parabolic", log_to_file=True)
        cfg = config_manager.get_parabolic_config()

        self.operators = operators
        self.grid = grid
        self.hierarchy = hierarchy
        self.inner_tol = float(inner_tol if inner_tol is not None else cfg["inner_tol"])
        self.inner_solver = inner_solver or cfg["inner_solver"]
        if self.inner_solver not in ("multigrid", "direct"):
            raise ConfigurationError(f"Solver interno desconhecido: {self.inner_solver}", field="parabolic.inner_solver")
        if self.inner_solver == "multigrid" and hierarchy is None:
            raise ConfigurationError("Modo multigrid exige uma hierarquia", field="parabolic.inner_solver")

        self._direct = factorized(operators.khat.tocsc()) if self.inner_solver == "direct" else None
        self.coupling = operators.coupling_diagonal  # diagonal de M/Δt
        self.sweep_counts = {"dual": 0, "adjoint": 0, "primal": 0}

    @classmethod
    def from_spec(
        cls,
        spec: ProblemSpec,
        settings: Optional[MultigridSettings] = None,
        inner_tol: Optional[float] = None,
        inner_solver: Optional[str] = None,
    ) -> "ParabolicSolver":
        operators = build_space_operators(spec.mesh, spec.grid.dt, spec.nu, spec.a0, spec.stationary)
        mode = inner_solver or config_manager.get_parabolic_config()["inner_solver"]
        hierarchy = None
        if mode == "multigrid":
            hierarchy = MultigridHierarchy.build(
                spec.level,
                spec.grid.dt,
                spec.nu,
                spec.a0,
                spec.stationary,
                spec.mesh.control_box,
                settings,
                finest=operators,
            )
        return cls(operators, spec.grid, hierarchy, inner_tol, mode)

    @property
    def shape(self):
        return (self.grid.N, self.operators.n)

    @property
    def mass(self) -> np.ndarray:
        return self.operators.mass_diagonal

    @property
    def control_mass(self) -> np.ndarray:
        return self.operators.control_mass_diagonal

    def _check(self, values: np.ndarray, name: str) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        if values.shape != self.shape:
            raise DimensionMismatchError(f"{name} com forma {values.shape}, esperado {self.shape}")
        return values

    def _solve(self, rhs: np.ndarray, step: int, x0: Optional[np.ndarray]) -> np.ndarray:
        if self._direct is not None:
            x = self._direct(rhs)
        else:
            try:
                x = self.hierarchy.solve(rhs, self.inner_tol, x0)
            except ConvergenceError as exc:
                raise InnerSolveError(step, f"multigrid parou com resíduo {exc.residual:.3e} > {self.inner_tol:.1e}") from exc
        if not np.all(np.isfinite(x)):
            raise InnerSolveError(step, "solve elíptico produziu valores não finitos")
        return x

    # ------------------------------------------------------------------
    # Varreduras
    # ------------------------------------------------------------------

    def dual_state_sweep(self, q: np.ndarray) -> np.ndarray:
        """K̂ p_n = M q_n + (M/Δt) p_{n+1}, n = N−1..0, p_N = 0"""
        q = self._check(q, "q")
        self.sweep_counts["dual"] += 1
        p = np.zeros_like(q)
        following = np.zeros(self.operators.n)
        for n in range(self.grid.N - 1, -1, -1):
            rhs = self.mass * q[n] + self.coupling * following
            p[n] = self._solve(rhs, n, following)
            following = p[n]
        return p

    def adjoint_sweep(self, w: np.ndarray) -> np.ndarray:
        """K̂ z_n = M1 w_n + (M/Δt) z_{n−1}, z_{−1} = 0"""
        w = self._check(w, "w")
        self.sweep_counts["adjoint"] += 1
        return self._forward(self.control_mass * w, np.zeros(self.operators.n))

    def primal_state_sweep(
        self, u: np.ndarray, y0: Optional[np.ndarray] = None, f: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """K̂ y_n = M1 u_n + M f_n + (M/Δt) y_{n−1}, y_{−1} = y₀"""
        u = self._check(u, "u")
        self.sweep_counts["primal"] += 1
        rhs = self.control_mass * u
        if f is not None:
            rhs = rhs + self.mass * self._check(f, "f")
        initial = np.zeros(self.operators.n) if y0 is None else np.asarray(y0, dtype=float)
        return self._forward(rhs, initial)

    def _forward(self, sources: np.ndarray, initial: np.ndarray) -> np.ndarray:
        values = np.zeros_like(sources)
        previous = initial
        for n in range(self.grid.N):
            rhs = sources[n] + self.coupling * previous
            values[n] = self._solve(rhs, n, previous)
            previous = values[n]
        return values

    # ------------------------------------------------------------------
    # Operadores bloco
    # ------------------------------------------------------------------

    def apply_Kcal(self, v: np.ndarray) -> np.ndarray:
        """(𝒦v)_n = K̂ v_n − (M/Δt) v_{n−1}"""
        v = self._check(v, "v")
        result = np.asarray(self.operators.khat @ v.T).T
        result[1:] -= self.coupling * v[:-1]
        return result

    def apply_Kcal_transpose(self, v: np.ndarray) -> np.ndarray:
        """(𝒦ᵀv)_n = K̂ v_n − (M/Δt) v_{n+1}"""
        v = self._check(v, "v")
        result = np.asarray(self.operators.khat.T @ v.T).T
        result[:-1] -= self.coupling * v[1:]
        return result

    def assemble_space_time_matrix(self) -> csr_matrix:
        """𝒦 = I ⊗ K̂ − E₁ ⊗ M/Δt (E₁: subdiagonal), ordenação bloco n maior"""
        N = self.grid.N
        return canonical(
            kron(eye(N, format="csr"), self.operators.khat)
            - kron(eye(N, k=-1, format="csr"), diagonal_matrix(self.coupling))
        )

    # ------------------------------------------------------------------
    # Produtos internos ⟨·,·⟩_Δt
    # ------------------------------------------------------------------

    def inner_product(self, v: np.ndarray, w: np.ndarray) -> float:
        """⟨v, w⟩_Δt = Δt Σ_n v_nᵀ M w_n"""
        return float(self.grid.dt * np.sum(v * w * self.mass))

    def norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(max(self.inner_product(v, v), 0.0)))

    def control_inner_product(self, v: np.ndarray, w: np.ndarray) -> float:
        """Δt Σ_n v_nᵀ M1 w_n"""
        return float(self.grid.dt * np.sum(v * w * self.control_mass))

    def control_norm(self, v: np.ndarray) -> float:
        return float(np.sqrt(max(self.control_inner_product(v, v), 0.0)))

    def total_sweeps(self) -> int:
        return sum(self.sweep_counts.values())
