#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Autovalores densos de pencils pequenos (testes e estudo espectral).
"""

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh, eigvalsh, solve

from utils.exceptions import DimensionMismatchError, EigenSolverError

MAX_DENSE_DIMENSION = 2000
RESIDUAL_TOL = 1e-8


def _check_pencil(A: np.ndarray, B: np.ndarray) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise DimensionMismatchError(f"Pencil com formas inválidas: {A.shape} e {B.shape}")
    if A.shape[0] > MAX_DENSE_DIMENSION:
        raise DimensionMismatchError(
            f"Dimensão {A.shape[0]} acima do limite denso ({MAX_DENSE_DIMENSION})"
        )


def pencil_residuals(A: np.ndarray, B: np.ndarray, values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """‖Av − λBv‖ / ‖v‖ por coluna v de `vectors`"""
    residuals = np.linalg.norm(A @ vectors - (B @ vectors) * values, axis=0)
    return residuals / np.maximum(np.linalg.norm(vectors, axis=0), np.finfo(float).tiny)


def dense_eig_general(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """
    Todos os autovalores generalizados de B⁻¹A, B SPD.

    A simétrica: redução por Cholesky de B a um problema simétrico (eigh).
    Caso contrário: iteração QR (LAPACK) sobre B⁻¹A formada explicitamente.
    Cada par é verificado com ‖Av − λBv‖ ≤ 1e-8‖v‖ (cota absoluta; pencils
    com ‖A‖ ou ‖B‖ muito acima de 1e6 podem não passar).

    Returns:
        autovalores ordenados (reais no caso simétrico)
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    _check_pencil(A, B)

    try:
        factor = cho_factor(B)
    except LinAlgError as exc:
        raise EigenSolverError(f"B não é SPD: {exc}") from exc

    try:
        if np.array_equal(A, A.T):
            values, vectors = eigh(A, B)
        else:
            values, vectors = np.linalg.eig(cho_solve(factor, A))
            order = np.argsort(values.real)
            values, vectors = values[order], vectors[:, order]
    except LinAlgError as exc:
        raise EigenSolverError(f"Iteração de autovalores não convergiu: {exc}") from exc

    residuals = pencil_residuals(A, B, values, vectors)
    max_residual = float(np.max(residuals)) if residuals.size else 0.0
    if max_residual > RESIDUAL_TOL:
        raise EigenSolverError("Autovalores não passaram no teste de resíduo", max_residual)

    return values


def factored_pencil_eigenvalues(G: np.ndarray, W: np.ndarray) -> np.ndarray:
    """
    Autovalores de (WWᵀ)⁻¹(GGᵀ) sem formar os produtos.

    São os autovalores de ZZᵀ com Z = W⁻¹G, o que preserva a precisão
    quando WWᵀ é muito mal condicionada (γ pequeno).
    """
    G = np.asarray(G, dtype=float)
    W = np.asarray(W, dtype=float)
    if W.shape[0] != W.shape[1] or G.shape[0] != W.shape[0]:
        raise DimensionMismatchError(f"Fatores incompatíveis: G {G.shape}, W {W.shape}")
    try:
        Z = solve(W, G)
        return eigvalsh(Z @ Z.T)
    except LinAlgError as exc:
        raise EigenSolverError(f"Fator W singular: {exc}") from exc
