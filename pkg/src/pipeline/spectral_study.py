#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Spectral Study - Autovalores de ℂₖ⁻¹Cₖ em tamanhos densos

Este módulo é responsável por:
1. Montar densamente Cₖ = ℳ1Π/γ + 𝒦ℳ⁻¹𝒦ᵀ e ℂₖ = (𝒦 + D)ℳ⁻¹(𝒦 + D)ᵀ
2. Calcular o espectro de ℂₖ⁻¹Cₖ pelo pencil fatorado
3. Calcular ζ = ‖√γ(√γI + ℳ^{1/2}𝒦⁻¹ℳ1^{1/2}Π)⁻¹‖₂ e a cota ζ² + (1+ζ)²
4. Verificar λ_min ≥ 1/2, λ_max ≤ cota e 2Cₖ − ℂₖ ⪰ 0

Com A = 𝒦ℳ^{-1/2}, B = diag(√m1·π/√γ) e W = A + B:
Cₖ = AAᵀ + BBᵀ, ℂₖ = WWᵀ e os autovalores são os de ZZᵀ, Z = W⁻¹[A B].
"""

import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, List, Optional

import numpy as np
import pandas as pd

sys.path.insert(0, str(Path(__file__).parent.parent))

from fem.assembly import build_space_operators
from fem.mesh import ControlBox, build_mesh
from linalg.dense_eig import factored_pencil_eigenvalues
from parabolic.time_stepping import ParabolicSolver, ProblemSpec, TimeGrid
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError
from utils.logger_config import setup_logger

PATTERNS = ("none", "full", "random", "checker")
LOWER_SLACK = 1e-10
UPPER_SLACK = 1e-8
PSD_SLACK = 1e-10

SPECTRUM_COLUMNS = [
    "gamma",
    "pattern",
    "lambda_min",
    "lambda_max",
    "zeta",
    "bound",
    "min_eig_2c_minus_p",
    "passed",
]


@dataclass
class SpectrumRow:
    gamma: float
    pattern: str
    lambda_min: float
    lambda_max: float
    zeta: float
    bound: float
    min_eig_2c_minus_p: float
    passed: bool


def active_pattern(name: str, shape, seed: int = 7) -> np.ndarray:
    """Máscara Π (N, n) para um padrão nomeado"""
    N, n = shape
    if name == "none":
        return np.zeros(shape, dtype=bool)
    if name == "full":
        return np.ones(shape, dtype=bool)
    if name == "random":
        return np.random.default_rng(seed).random(shape) < 0.5
    if name == "checker":
        return (np.add.outer(np.arange(N), np.arange(n)) % 2) == 0
    raise ConfigurationError(f"Padrão de conjunto ativo desconhecido: {name}", field="spectrum.patterns")


class SpectralStudy:
    """
    Estudo espectral do precondicionador para uma malha e grade fixas.
    """

    def __init__(
        self,
        level: int = 2,
        N: int = 4,
        nu: float = 1.0,
        a0: float = 0.0,
        control_box: Optional[ControlBox] = None,
        T: float = 1.0,
    ):
        self.logger, _ = setup_logger("spectral_study", log_to_file=True)
        cfg = config_manager.get_spectrum_config()
        if level > int(cfg["max_level"]) or N > int(cfg["max_steps"]):
            raise ConfigurationError(
                f"Estudo denso limitado a nível ≤ {cfg['max_level']} e N ≤ {cfg['max_steps']} "
                f"(pedido: nível {level}, N = {N})",
                field="spectrum",
            )
        self.level = level
        self.N = N
        self.seed = int(cfg["seed"])

        mesh = build_mesh(level, control_box)
        grid = TimeGrid(T, N)
        operators = build_space_operators(mesh, grid.dt, nu, a0)
        self.solver = ParabolicSolver(operators, grid, inner_tol=1e-12, inner_solver="direct")
        self.Kcal = self.solver.assemble_space_time_matrix().toarray()
        self.mass = np.tile(operators.mass_diagonal, N)
        self.control_mass = np.tile(operators.control_mass_diagonal, N)
        self.A = self.Kcal / np.sqrt(self.mass)[None, :]

    @classmethod
    def from_spec(cls, spec: ProblemSpec) -> "SpectralStudy":
        return cls(spec.level, spec.grid.N, spec.nu, spec.a0, spec.mesh.control_box, spec.grid.T)

    def dense_operators(self, pi: np.ndarray, gamma: float):
        """
        Returns:
            tuple: (Cₖ, ℂₖ) densos para a máscara Π (N, n)
        """
        pi = np.asarray(pi, dtype=float).reshape(-1)
        shift = np.sqrt(self.mass * self.control_mass) * pi / np.sqrt(gamma)
        schur = np.diag(self.control_mass * pi / gamma) + (self.Kcal / self.mass[None, :]) @ self.Kcal.T
        shifted = self.Kcal + np.diag(shift)
        approximation = (shifted / self.mass[None, :]) @ shifted.T
        return schur, approximation

    def zeta(self, pi: np.ndarray, gamma: float) -> float:
        B = np.diag(np.sqrt(self.control_mass) * np.asarray(pi, dtype=float).reshape(-1) / np.sqrt(gamma))
        X = np.linalg.solve(self.A + B, self.A)
        return float(np.linalg.norm(X, 2))

    def evaluate(self, pi: np.ndarray, gamma: float, pattern: str = "custom") -> SpectrumRow:
        pi_flat = np.asarray(pi, dtype=float).reshape(-1)
        B = np.diag(np.sqrt(self.control_mass) * pi_flat / np.sqrt(gamma))
        W = self.A + B
        eigenvalues = factored_pencil_eigenvalues(np.hstack([self.A, B]), W)

        zeta = self.zeta(pi, gamma)
        bound = zeta**2 + (1.0 + zeta) ** 2

        schur, approximation = self.dense_operators(pi, gamma)
        gap = 2.0 * schur - approximation
        gap = 0.5 * (gap + gap.T)
        scale = np.linalg.norm(approximation, 2)
        min_gap = float(np.linalg.eigvalsh(gap)[0] / scale)

        lambda_min, lambda_max = float(eigenvalues[0]), float(eigenvalues[-1])
        passed = lambda_min >= 0.5 - LOWER_SLACK and lambda_max <= bound + UPPER_SLACK and min_gap >= -PSD_SLACK
        return SpectrumRow(gamma, pattern, lambda_min, lambda_max, zeta, bound, min_gap, bool(passed))

    def run(self, gammas: Iterable[float], patterns: Iterable[str] = ("none", "full", "random")) -> pd.DataFrame:
        rows: List[SpectrumRow] = []
        for pattern in patterns:
            pi = active_pattern(pattern, (self.N, self.solver.operators.n), self.seed)
            for gamma in gammas:
                gamma = float(gamma)
                if not gamma > 0:
                    raise ConfigurationError(f"γ deve ser positivo, recebeu {gamma}", field="gamma")
                row = self.evaluate(pi, gamma, pattern)
                status = "✅" if row.passed else "❌"
                self.logger.analysis(
                    f"{status} γ = {gamma:.0e}, Π = {pattern}: λ ∈ [{row.lambda_min:.4f}, {row.lambda_max:.4f}], "
                    f"cota {row.bound:.4f}"
                )
                rows.append(row)
        return pd.DataFrame([asdict(row) for row in rows], columns=SPECTRUM_COLUMNS)


def spectral_study(
    spec: Optional[ProblemSpec] = None,
    level: int = 2,
    N: int = 4,
    gammas: Optional[Iterable[float]] = None,
    patterns: Optional[Iterable[str]] = None,
) -> pd.DataFrame:
    """Tabela (γ, padrão, λ_min, λ_max, ζ, cota, min eig(2C − ℂ), passou)"""
    cfg = config_manager.get_spectrum_config()
    study = SpectralStudy.from_spec(spec) if spec is not None else SpectralStudy(level, N)
    return study.run(gammas if gammas is not None else cfg["gammas"], patterns or cfg["patterns"])


def main():
    table = spectral_study()
    print(table.to_string(index=False))


if __name__ == "__main__":
    main()
