#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Valores publicados das tabelas 1–7 (referência, não recomputados).

Linhas "inexact_admm" e "ssn" são baselines externos; `table --baseline`
só os imprime ao lado dos resultados do repositório.
"""

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np
import pandas as pd

NAN = np.nan

REFERENCE_COLUMNS = [
    "table",
    "mesh_level",
    "algorithm",
    "iter",
    "mean_cg",
    "max_cg",
    "krylov_total",
    "obj",
    "reldis",
    "err_u",
    "err_y",
]


@dataclass(frozen=True)
class TableDefinition:
    table: int
    problem: str
    gamma: float
    solver: str
    levels: Tuple[int, ...]
    kind: str  # "convergence" ou "errors"
    caption: str


TABLES: Dict[int, TableDefinition] = {
    1: TableDefinition(1, "example1", 1e-3, "frcg", (4, 5, 6, 7, 8), "convergence", "Exemplo 1, Dual+FRCG, γ = 1e-3"),
    2: TableDefinition(2, "example1", 1e-3, "frcg", (5, 6, 7, 8), "errors", "Exemplo 1, erros Dual+FRCG, γ = 1e-3"),
    3: TableDefinition(3, "example1", 1e-5, "ssn", (4, 5, 6, 7, 8), "convergence", "Exemplo 1, Dual+SSN, γ = 1e-5"),
    4: TableDefinition(4, "example1", 1e-5, "ssn", (5, 6, 7, 8), "errors", "Exemplo 1, erros Dual+SSN, γ = 1e-5"),
    5: TableDefinition(5, "example2", 1e-3, "frcg", (4, 5, 6, 7, 8), "convergence", "Exemplo 2, Dual+FRCG, γ = 1e-3"),
    6: TableDefinition(6, "example2", 1e-6, "ssn", (4, 5, 6, 7, 8), "convergence", "Exemplo 2, Dual+SSN, γ = 1e-6"),
    7: TableDefinition(7, "example3", 1e-4, "ssn", (4, 5, 6, 7, 8), "errors", "Exemplo 3 (elíptico), Dual+SSN, γ = 1e-4"),
}


def _row(table, level, algorithm, iterations=NAN, mean_cg=NAN, max_cg=NAN, krylov=NAN, obj=NAN, reldis=NAN, e_u=NAN, e_y=NAN):
    return dict(
        zip(REFERENCE_COLUMNS, [table, level, algorithm, iterations, mean_cg, max_cg, krylov, obj, reldis, e_u, e_y])
    )


_ROWS = [
    # Tabela 1
    _row(1, 4, "dual_frcg", 9, obj=3.28e-4, reldis=6.42e-3),
    _row(1, 5, "dual_frcg", 8, obj=3.15e-4, reldis=6.43e-3),
    _row(1, 6, "dual_frcg", 7, obj=3.08e-4, reldis=6.43e-3),
    _row(1, 7, "dual_frcg", 9, obj=3.05e-4, reldis=6.43e-3),
    _row(1, 8, "dual_frcg", 6, obj=3.04e-4, reldis=6.43e-3),
    _row(1, 4, "inexact_admm", 26, obj=3.02e-4, reldis=6.43e-3),
    _row(1, 5, "inexact_admm", 26, obj=3.02e-4, reldis=6.43e-3),
    _row(1, 6, "inexact_admm", 26, obj=3.01e-4, reldis=6.43e-3),
    _row(1, 7, "inexact_admm", 26, obj=3.01e-4, reldis=6.43e-3),
    _row(1, 8, "inexact_admm", 26, obj=3.01e-4, reldis=6.43e-3),
    # Tabela 2
    _row(2, 5, "dual_frcg", e_u=3.27e-3, e_y=7.93e-5),
    _row(2, 6, "dual_frcg", e_u=9.78e-4, e_y=1.98e-5),
    _row(2, 7, "dual_frcg", e_u=4.31e-4, e_y=5.25e-6),
    _row(2, 8, "dual_frcg", e_u=1.42e-4, e_y=1.34e-6),
    _row(2, 5, "inexact_admm", e_u=3.27e-3, e_y=7.80e-5),
    _row(2, 6, "inexact_admm", e_u=8.25e-4, e_y=1.95e-5),
    _row(2, 7, "inexact_admm", e_u=2.09e-4, e_y=4.97e-6),
    _row(2, 8, "inexact_admm", e_u=8.35e-5, e_y=1.31e-6),
    # Tabela 3
    _row(3, 4, "dual_ssn", 4, 11.5, 13, obj=3.43e-7, reldis=6.68e-7),
    _row(3, 5, "dual_ssn", 4, 12.5, 14, obj=3.41e-7, reldis=6.47e-7),
    _row(3, 6, "dual_ssn", 4, 13.25, 15, obj=3.41e-7, reldis=6.47e-7),
    _row(3, 7, "dual_ssn", 4, 13.25, 15, obj=3.41e-7, reldis=6.47e-7),
    _row(3, 8, "dual_ssn", 4, 14.25, 17, obj=3.41e-7, reldis=6.47e-7),
    _row(3, 4, "inexact_admm", 25),
    _row(3, 5, "inexact_admm", 22),
    _row(3, 6, "inexact_admm", 21),
    _row(3, 7, "inexact_admm", 20),
    _row(3, 8, "inexact_admm", 17),
    # Tabela 4
    _row(4, 5, "dual_ssn", e_u=5.39e-3, e_y=8.45e-6),
    _row(4, 6, "dual_ssn", e_u=1.37e-3, e_y=2.15e-6),
    _row(4, 7, "dual_ssn", e_u=3.43e-4, e_y=5.43e-7),
    _row(4, 8, "dual_ssn", e_u=8.57e-5, e_y=1.36e-7),
    # Tabela 5
    _row(5, 4, "dual_frcg", 3, obj=3.45e-1, reldis=8.94e-1),
    _row(5, 5, "dual_frcg", 3, obj=3.64e-1, reldis=9.2e-1),
    _row(5, 6, "dual_frcg", 3, obj=3.73e-1, reldis=9.32e-1),
    _row(5, 7, "dual_frcg", 3, obj=3.78e-1, reldis=9.38e-1),
    _row(5, 8, "dual_frcg", 3, obj=3.81e-1, reldis=9.41e-1),
    # Tabela 6
    _row(6, 4, "dual_ssn", 6, 14.67, 17, obj=2.66e-1, reldis=6.62e-1),
    _row(6, 5, "dual_ssn", 6, 17.67, 21, obj=2.78e-1, reldis=6.92e-1),
    _row(6, 6, "dual_ssn", 7, 19.14, 23, obj=2.85e-1, reldis=7.1e-1),
    _row(6, 7, "dual_ssn", 8, 19.75, 25, obj=2.89e-1, reldis=7.2e-1),
    _row(6, 8, "dual_ssn", 7, 21.14, 27, obj=2.91e-1, reldis=7.25e-1),
    # Tabela 7
    _row(7, 4, "dual_ssn", 5, krylov=43, reldis=5.16e-2, e_u=3.37e-4),
    _row(7, 5, "dual_ssn", 5, krylov=47, reldis=5.18e-2, e_u=8.15e-5),
    _row(7, 6, "dual_ssn", 6, krylov=60, reldis=5.19e-2, e_u=2.05e-5),
    _row(7, 7, "dual_ssn", 6, krylov=60, reldis=5.19e-2, e_u=5.11e-6),
    _row(7, 8, "dual_ssn", 6, krylov=62, reldis=5.19e-2, e_u=1.27e-6),
    _row(7, 4, "ssn", e_u=3.44e-4),
    _row(7, 5, "ssn", e_u=8.15e-5),
    _row(7, 6, "ssn", e_u=2.2e-5),
    _row(7, 7, "ssn", e_u=8.03e-6),
    _row(7, 8, "ssn", e_u=2.37e-6),
]


def reference_table(table: int) -> pd.DataFrame:
    """Linhas publicadas de uma tabela (vazio se a tabela não existe)"""
    frame = pd.DataFrame(_ROWS, columns=REFERENCE_COLUMNS)
    return frame[frame["table"] == table].reset_index(drop=True)


def reference_value(table: int, level: int, column: str, algorithm: str = None) -> float:
    frame = reference_table(table)
    frame = frame[frame["mesh_level"] == level]
    if algorithm is not None:
        frame = frame[frame["algorithm"] == algorithm]
    else:
        frame = frame[frame["algorithm"].str.startswith("dual_")]
    return float(frame[column].iloc[0]) if len(frame) else NAN


def compare_with_reference(report: pd.DataFrame, table: int) -> pd.DataFrame:
    """
    Desvio relativo (valor − publicado)/publicado por linha e métrica.

    `report` segue as colunas do relatório (mesh "2^-k", iter, obj, ...).
    """
    rows = []
    for _, row in report.iterrows():
        level = int(str(row["mesh"]).split("-")[-1])
        for column in ("iter", "mean_cg", "max_cg", "obj", "reldis", "err_u", "err_y"):
            published = reference_value(table, level, column)
            if column not in row or np.isnan(published) or not np.isfinite(float(row[column])):
                continue
            value = float(row[column])
            rows.append(
                {
                    "mesh": row["mesh"],
                    "metric": column,
                    "value": value,
                    "published": published,
                    "relative_deviation": (value - published) / published,
                }
            )
    return pd.DataFrame(rows, columns=["mesh", "metric", "value", "published", "relative_deviation"])
