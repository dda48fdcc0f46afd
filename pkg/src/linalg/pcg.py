#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Gradiente conjugado precondicionado.

Os operadores são callables (ou matrizes) agindo sobre arrays de qualquer
forma; produtos internos usam o array achatado, então funções no tempo
(N, n) passam direto sem reshape.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.sparse import spmatrix

from utils.exceptions import PcgBreakdownError
from utils.logger_config import setup_logger

BREAKDOWN_CURVATURE = 1e-300

Operator = Union[Callable[[np.ndarray], np.ndarray], spmatrix, np.ndarray]


@dataclass
class PcgResult:
    x: np.ndarray
    iterations: int
    converged: bool
    residual: float  # ‖b − Ax‖ / ‖b‖ pela recorrência


def _as_callable(operator: Optional[Operator]) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    if operator is None or callable(operator):
        return operator
    return lambda v: np.asarray(operator @ v)


def pcg_solve(
    A: Operator,
    b: np.ndarray,
    precond: Optional[Operator] = None,
    tol: float = 1e-6,
    max_iter: int = 500,
    x0: Optional[np.ndarray] = None,
) -> PcgResult:
    """
    Resolve Ax = b com A e precond SPD (como operadores).

    Para em ‖r‖/‖b‖ ≤ tol; no limite de iterações devolve o último iterado
    com converged=False e um warning. Curvatura ≤ 1e-300 levanta
    PcgBreakdownError com o índice da iteração.
    """
    apply_A = _as_callable(A)
    apply_P = _as_callable(precond)

    b = np.asarray(b, dtype=float)
    b_norm = np.linalg.norm(b)
    if b_norm == 0.0:
        return PcgResult(np.zeros_like(b), 0, True, 0.0)

    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    r = b - apply_A(x) if x0 is not None else b.copy()
    relative = np.linalg.norm(r) / b_norm
    if relative <= tol:
        return PcgResult(x, 0, True, relative)

    z = apply_P(r) if apply_P is not None else r.copy()
    d = z.copy()
    rz = np.vdot(r, z)

    for iteration in range(1, max_iter + 1):
        Ad = apply_A(d)
        curvature = np.vdot(d, Ad)
        if curvature <= BREAKDOWN_CURVATURE:
            raise PcgBreakdownError(iteration, float(curvature))

        alpha = rz / curvature
        x += alpha * d
        r -= alpha * Ad

        relative = np.linalg.norm(r) / b_norm
        if relative <= tol:
            return PcgResult(x, iteration, True, float(relative))

        z = apply_P(r) if apply_P is not None else r.copy()
        rz_new = np.vdot(r, z)
        d = z + (rz_new / rz) * d
        rz = rz_new

    logger, _ = setup_logger("pcg", log_to_file=False)
    logger.warning(f"⚠️ PCG atingiu {max_iter} iterações (resíduo relativo {relative:.3e})")
    return PcgResult(x, max_iter, False, float(relative))
