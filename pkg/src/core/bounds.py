#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Restrições de caixa: projeção Pr_𝒞 e a função θ.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from utils.exceptions import ConfigurationError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class ControlBounds:
    """Intervalo admissível [a, b] com a ≤ 0 ≤ b"""

    a: float
    b: float

    def __post_init__(self):
        if not self.a <= 0.0:
            raise ConfigurationError(f"Limite inferior deve ser ≤ 0, recebeu {self.a}", field="bounds.a")
        if not self.b >= 0.0:
            raise ConfigurationError(f"Limite superior deve ser ≥ 0, recebeu {self.b}", field="bounds.b")

    def project(self, values: ArrayLike) -> ArrayLike:
        return project(values, self)

    def pieces(self, values: np.ndarray) -> np.ndarray:
        """−1 abaixo de a, 0 em [a, b], +1 acima de b"""
        values = np.asarray(values)
        return np.where(values < self.a, -1, np.where(values > self.b, 1, 0))


def project(values: ArrayLike, bounds: ControlBounds) -> ArrayLike:
    """Pr_𝒞: clamp componente a componente em [a, b]"""
    return np.clip(values, bounds.a, bounds.b)


def theta(x: ArrayLike, gamma: float, bounds: ControlBounds) -> ArrayLike:
    """
    θ(x) = x²/2γ se a ≤ x/γ ≤ b; a·x − γa²/2 abaixo; b·x − γb²/2 acima.

    θ é C¹ com θ′(x) = clamp(x/γ, a, b) e θ ≥ 0.
    """
    x = np.asarray(x, dtype=float)
    scaled = x / gamma
    inside = x * x / (2.0 * gamma)
    below = bounds.a * x - 0.5 * gamma * bounds.a**2
    above = bounds.b * x - 0.5 * gamma * bounds.b**2
    result = np.where(scaled < bounds.a, below, np.where(scaled > bounds.b, above, inside))
    return result if result.ndim else float(result)


def theta_derivative(x: ArrayLike, gamma: float, bounds: ControlBounds) -> ArrayLike:
    return project(np.asarray(x, dtype=float) / gamma, bounds)


def active_mask(p: np.ndarray, gamma: float, bounds: ControlBounds) -> np.ndarray:
    """𝒜 = {a ≤ p/γ ≤ b} (intervalo fechado): derivada 1/γ da projeção"""
    scaled = np.asarray(p) / gamma
    return (scaled >= bounds.a) & (scaled <= bounds.b)
