#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Resultado comum de um solve dual (FRCG ou SSN) e sua linha de relatório.
"""

import math
from dataclasses import dataclass, field
from typing import Dict

import numpy as np
import pandas as pd

from core.primal_recovery import PrimalSolution

REPORT_COLUMNS = [
    "mesh",
    "algorithm",
    "iter",
    "mean_cg",
    "max_cg",
    "wall_time_s",
    "obj",
    "reldis",
    "err_u",
    "err_y",
]


def mesh_label(level: int) -> str:
    return f"2^-{level}"


@dataclass
class SolveReport:
    algorithm: str
    problem: str
    level: int
    gamma: float
    iterations: int
    converged: bool
    wall_time_s: float
    q: np.ndarray
    p: np.ndarray
    solution: PrimalSolution
    dual_objective: float
    primal_objective: float
    obj: float
    reldis: float
    history: pd.DataFrame = field(default_factory=pd.DataFrame)
    sweeps: Dict[str, int] = field(default_factory=dict)
    err_u: float = math.nan
    err_y: float = math.nan
    mean_cg: float = math.nan
    max_cg: float = math.nan

    @property
    def control(self) -> np.ndarray:
        return self.solution.control

    @property
    def state(self) -> np.ndarray:
        return self.solution.state

    @property
    def duality_gap(self) -> float:
        """P(ū) + J(q̄): zero no ótimo discreto"""
        return self.primal_objective + self.dual_objective

    def as_row(self) -> Dict[str, object]:
        """Linha na ordem fixa das colunas de relatório"""
        values = [
            mesh_label(self.level),
            self.algorithm,
            self.iterations,
            self.mean_cg,
            self.max_cg,
            self.wall_time_s,
            self.obj,
            self.reldis,
            self.err_u,
            self.err_y,
        ]
        return dict(zip(REPORT_COLUMNS, values))
