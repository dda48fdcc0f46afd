#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Benchmarks - Os três problemas de teste

1. Exemplo 1: solução manufaturada, O = Ω, 𝒞 = [−0.5, 0.5], y₀ = φ ≠ 0
2. Exemplo 2: O = (0, 0.25)², a₀ = 1, 𝒞 = [−300, 300], y_d = eᵗ sin sin
3. Exemplo 3: controle elíptico, 𝒞 = [−0.3, 1], solução u* = r

Campos exatos são amostrados nos nós (interpolação), não projetados.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from core.bounds import ControlBounds
from fem.assembly import build_space_operators
from fem.mesh import ControlBox, build_mesh
from linalg.pcg import pcg_solve
from parabolic.time_stepping import ProblemSpec, TimeGrid
from utils.exceptions import ConfigurationError, ConvergenceError

PI = np.pi


def _sin_product(points: np.ndarray, frequency: float = 1.0) -> np.ndarray:
    return np.sin(frequency * PI * points[:, 0]) * np.sin(frequency * PI * points[:, 1])


def _sample(function, points: np.ndarray, times: np.ndarray) -> np.ndarray:
    return np.stack([function(points, t) for t in times])


@dataclass(frozen=True)
class ManufacturedSolution:
    """
    y* = (1−t) sin πx₁ sin πx₂, p* = γ(1−t) sin 2πx₁ sin 2πx₂,
    u* = clamp(−p*/γ, a, b), f = −u* + ∂ₜy* − Δy*, y_d = y* + ∂ₜp* + Δp*.
    """

    gamma: float
    bounds: ControlBounds

    def state(self, points: np.ndarray, t: float) -> np.ndarray:
        return (1.0 - t) * _sin_product(points)

    def dual(self, points: np.ndarray, t: float) -> np.ndarray:
        return self.gamma * (1.0 - t) * _sin_product(points, 2.0)

    def control(self, points: np.ndarray, t: float) -> np.ndarray:
        return np.clip(-self.dual(points, t) / self.gamma, self.bounds.a, self.bounds.b)

    def state_time_derivative(self, points: np.ndarray, t: float) -> np.ndarray:
        return -_sin_product(points)

    def state_laplacian(self, points: np.ndarray, t: float) -> np.ndarray:
        return -2.0 * PI**2 * self.state(points, t)

    def source(self, points: np.ndarray, t: float) -> np.ndarray:
        return (
            -self.control(points, t)
            + self.state_time_derivative(points, t)
            - self.state_laplacian(points, t)
        )

    def target(self, points: np.ndarray, t: float) -> np.ndarray:
        dual_dt = -self.gamma * _sin_product(points, 2.0)
        dual_laplacian = -8.0 * PI**2 * self.dual(points, t)
        return self.state(points, t) + dual_dt + dual_laplacian

    def initial(self, points: np.ndarray) -> np.ndarray:
        return _sin_product(points)

    def sample_control(self, spec: ProblemSpec) -> np.ndarray:
        """u*(t_{n+1}) nos nós interiores: u_n age no passo t_n → t_{n+1}"""
        return _sample(self.control, spec.mesh.interior_coordinates, spec.grid.state_times)

    def sample_state(self, spec: ProblemSpec) -> np.ndarray:
        """y*(t_{n+1}) nos nós interiores"""
        return _sample(self.state, spec.mesh.interior_coordinates, spec.grid.state_times)


def _default_steps(level: int, N: Optional[int]) -> int:
    return 2**level if N is None else int(N)


def build_example1(gamma: float, level: int, N: Optional[int] = None) -> Tuple[ProblemSpec, ManufacturedSolution]:
    """Exemplo 1: ν = 1, a₀ = 0, T = 1, O = Ω, 𝒞 = [−0.5, 0.5]"""
    if not gamma > 0:
        raise ConfigurationError(f"γ deve ser positivo, recebeu {gamma}", field="gamma")
    bounds = ControlBounds(-0.5, 0.5)
    exact = ManufacturedSolution(gamma, bounds)
    mesh = build_mesh(level)
    grid = TimeGrid(1.0, _default_steps(level, N))
    points = mesh.interior_coordinates

    spec = ProblemSpec(
        name="example1",
        gamma=gamma,
        nu=1.0,
        a0=0.0,
        bounds=bounds,
        grid=grid,
        mesh=mesh,
        target=_sample(exact.target, points, grid.state_times),
        initial_target=exact.target(points, 0.0),
        initial_state=exact.initial(points),
        source=_sample(exact.source, points, grid.state_times),
    )
    return spec, exact


@dataclass(frozen=True)
class Example2Data:
    """y_d = eᵗ sin πx₁ sin πx₂ e y₀ = sin πx₁ sin πx₂"""

    def target(self, points: np.ndarray, t: float) -> np.ndarray:
        return np.exp(t) * _sin_product(points)

    def initial(self, points: np.ndarray) -> np.ndarray:
        return _sin_product(points)


EXAMPLE2_CONTROL_BOX = ControlBox(0.0, 0.25, 0.0, 0.25)


def build_example2(gamma: float, level: int, N: Optional[int] = None) -> ProblemSpec:
    """Exemplo 2: O = (0, 0.25)², ν = 1, a₀ = 1, f = 0, 𝒞 = [−300, 300]"""
    if not gamma > 0:
        raise ConfigurationError(f"γ deve ser positivo, recebeu {gamma}", field="gamma")
    data = Example2Data()
    mesh = build_mesh(level, EXAMPLE2_CONTROL_BOX)
    grid = TimeGrid(1.0, _default_steps(level, N))
    points = mesh.interior_coordinates

    return ProblemSpec(
        name="example2",
        gamma=gamma,
        nu=1.0,
        a0=1.0,
        bounds=ControlBounds(-300.0, 300.0),
        grid=grid,
        mesh=mesh,
        target=_sample(data.target, points, grid.state_times),
        initial_target=data.target(points, 0.0),
        initial_state=data.initial(points),
    )


@dataclass
class EllipticSpec:
    """
    Exemplo 3: y_d = 4π²γ sin πx₁ sin πx₂ + y_r com K y_r = M r (discreto)
    e r = min{1, max{−0.3, 2 sin πx₁ sin πx₂}}; u* = r.
    """

    gamma: float
    bounds: ControlBounds
    reference_control: np.ndarray  # r nodal (n,)
    reference_state: np.ndarray  # y_r discreto (n,)
    problem: ProblemSpec

    def sample_control(self, spec: Optional[ProblemSpec] = None) -> np.ndarray:
        return self.reference_control[None, :]

    def sample_state(self, spec: Optional[ProblemSpec] = None) -> np.ndarray:
        return self.reference_state[None, :]


def build_example3(gamma: float = 1e-4, level: int = 4) -> EllipticSpec:
    """Controle elíptico: N = 1, T = Δt = 1, K̂ = K, O = Ω"""
    if not gamma > 0:
        raise ConfigurationError(f"γ deve ser positivo, recebeu {gamma}", field="gamma")
    bounds = ControlBounds(-0.3, 1.0)
    mesh = build_mesh(level)
    operators = build_space_operators(mesh, dt=1.0, nu=1.0, a0=0.0, stationary=True)
    points = mesh.interior_coordinates

    r = np.clip(2.0 * _sin_product(points), bounds.a, bounds.b)
    solve = pcg_solve(operators.stiffness, operators.mass_diagonal * r, tol=1e-13, max_iter=20 * mesh.n_interior)
    if not solve.converged:
        raise ConvergenceError("Solve de Poisson para y_r não convergiu", solve.iterations, solve.residual)
    y_r = solve.x

    target = 4.0 * PI**2 * gamma * _sin_product(points) + y_r
    problem = ProblemSpec(
        name="example3",
        gamma=gamma,
        nu=1.0,
        a0=0.0,
        bounds=bounds,
        grid=TimeGrid(1.0, 1),
        mesh=mesh,
        target=target[None, :],
        stationary=True,
    )
    return EllipticSpec(gamma, bounds, r, y_r, problem)


TIME_FACTORS = {
    "one": lambda t: 1.0,
    "exp": np.exp,
    "linear": lambda t: 1.0 - t,
}


def _custom_field(value, name: str):
    """
    Campo de problema custom: número (constante) ou
    {amplitude, frequency, time_factor} → A·g(t)·sin kπx₁ sin kπx₂.
    """
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return lambda points, t: np.full(points.shape[0], float(value))
    if isinstance(value, dict):
        unknown = set(value) - {"amplitude", "frequency", "time_factor"}
        if unknown:
            raise ConfigurationError(f"chaves desconhecidas {sorted(unknown)}", field=f"custom.{name}")
        amplitude = float(value.get("amplitude", 1.0))
        frequency = float(value.get("frequency", 1.0))
        factor = TIME_FACTORS.get(value.get("time_factor", "one"))
        if factor is None:
            raise ConfigurationError(f"time_factor deve ser um de {sorted(TIME_FACTORS)}", field=f"custom.{name}")
        return lambda points, t: amplitude * factor(t) * _sin_product(points, frequency)
    raise ConfigurationError(f"valor inválido: {value!r}", field=f"custom.{name}")


def build_custom(gamma: float, level: int, N: Optional[int], custom: dict) -> ProblemSpec:
    """Problema descrito no arquivo de run (seção `custom`)"""
    bounds = custom.get("bounds", [-1.0, 1.0])
    if not isinstance(bounds, (list, tuple)) or len(bounds) != 2:
        raise ConfigurationError("bounds deve ser [a, b]", field="custom.bounds")
    box = custom.get("control_box")
    if box is not None and (not isinstance(box, (list, tuple)) or len(box) != 4):
        raise ConfigurationError("control_box deve ser [x_min, x_max, y_min, y_max]", field="custom.control_box")

    mesh = build_mesh(level, ControlBox(*map(float, box)) if box is not None else None)
    grid = TimeGrid(float(custom.get("T", 1.0)), _default_steps(level, N))
    points = mesh.interior_coordinates

    target_field = _custom_field(custom.get("target", 0.0), "target")
    target = _sample(target_field, points, grid.state_times)
    initial = _custom_field(custom.get("initial_state", 0.0), "initial_state")(points, 0.0)
    source = None
    if "source" in custom:
        source = _sample(_custom_field(custom["source"], "source"), points, grid.state_times)

    return ProblemSpec(
        name="custom",
        gamma=gamma,
        nu=float(custom.get("nu", 1.0)),
        a0=float(custom.get("a0", 0.0)),
        bounds=ControlBounds(float(bounds[0]), float(bounds[1])),
        grid=grid,
        mesh=mesh,
        target=target,
        initial_state=initial,
        initial_target=target_field(points, 0.0),
        source=source,
    )


def build_problem(name: str, gamma: float, level: int, N: Optional[int] = None, custom: Optional[dict] = None):
    """
    Fábrica usada pela CLI.

    Returns:
        tuple: (ProblemSpec, solução de referência ou None)
    """
    if name == "example1":
        return build_example1(gamma, level, N)
    if name == "example2":
        return build_example2(gamma, level, N), None
    if name == "example3":
        elliptic = build_example3(gamma, level)
        return elliptic.problem, elliptic
    if name == "custom":
        return build_custom(gamma, level, N, custom or {}), None
    raise ConfigurationError(f"Problema desconhecido: {name}", field="problem")
