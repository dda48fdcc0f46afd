#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes do núcleo de álgebra linear: montagem esparsa, PCG e autovalores densos
"""

import numpy as np
import pytest
from scipy.linalg import eigh

from linalg.dense_eig import dense_eig_general, factored_pencil_eigenvalues, pencil_residuals
from linalg.pcg import pcg_solve
from linalg.sparse_ops import TripletBuilder, check_finite, diagonal_matrix, is_symmetric, spmv
from utils.exceptions import DimensionMismatchError, EigenSolverError, NonFiniteError, PcgBreakdownError


def _spd(rng, n):
    A = rng.standard_normal((n, n))
    return A @ A.T + n * np.eye(n)


def test_triplets_sum_duplicates_and_sort():
    """Pares repetidos somam; colunas ficam ordenadas; zeros explícitos somem"""
    builder = TripletBuilder(3, 3)
    builder.add([0, 0, 2, 1], [2, 0, 1, 1], [1.0, 2.0, 3.0, 0.0])
    builder.add([0], [2], [4.0])
    matrix = builder.to_csr()

    assert matrix[0, 2] == 5.0
    assert matrix[0, 0] == 2.0
    assert matrix.nnz == 3
    assert matrix.has_sorted_indices


def test_triplets_reject_inconsistent_lengths():
    with pytest.raises(DimensionMismatchError):
        TripletBuilder(2, 2).add([0, 1], [0], [1.0, 2.0])


def test_spmv_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        spmv(diagonal_matrix([1.0, 2.0]), np.ones(3))


def test_check_finite_and_symmetry():
    assert is_symmetric(diagonal_matrix([1.0, 2.0]))
    with pytest.raises(NonFiniteError):
        check_finite(np.array([1.0, np.nan]))


def test_pcg_matches_dense_solve(rng):
    A = _spd(rng, 30)
    b = rng.standard_normal(30)
    result = pcg_solve(A, b, tol=1e-12, max_iter=200)

    assert result.converged
    assert np.allclose(result.x, np.linalg.solve(A, b), rtol=1e-9, atol=1e-12)


def test_pcg_with_exact_preconditioner_takes_one_iteration(rng):
    A = _spd(rng, 12)
    inverse = np.linalg.inv(A)
    result = pcg_solve(A, rng.standard_normal(12), precond=lambda r: inverse @ r, tol=1e-10)
    assert result.iterations == 1


def test_pcg_on_time_function_shape(rng):
    """Arrays (N, n) passam direto, sem reshape"""
    diagonal = rng.uniform(1.0, 2.0, size=(3, 4))
    b = rng.standard_normal((3, 4))
    result = pcg_solve(lambda v: diagonal * v, b, tol=1e-12)
    assert result.x.shape == (3, 4)
    assert np.allclose(result.x, b / diagonal)


def test_pcg_zero_rhs():
    result = pcg_solve(np.eye(3), np.zeros(3))
    assert result.iterations == 0 and result.converged
    assert not np.any(result.x)


def test_pcg_breakdown_on_negative_curvature():
    with pytest.raises(PcgBreakdownError) as info:
        pcg_solve(-np.eye(2), np.ones(2))
    assert info.value.iteration == 1


def test_pcg_reports_non_convergence(rng):
    A = _spd(rng, 40)
    result = pcg_solve(A, rng.standard_normal(40), tol=1e-14, max_iter=2)
    assert not result.converged
    assert result.iterations == 2


def test_dense_eig_symmetric_pencil(rng):
    A = rng.standard_normal((8, 8))
    A = A + A.T
    B = _spd(rng, 8)
    assert np.allclose(dense_eig_general(A, B), eigh(A, B, eigvals_only=True))


def test_dense_eig_rejects_indefinite_B():
    with pytest.raises(EigenSolverError):
        dense_eig_general(np.eye(2), -np.eye(2))


def test_factored_pencil_matches_explicit_pencil(rng):
    G = rng.standard_normal((6, 10))
    W = rng.standard_normal((6, 6)) + 4 * np.eye(6)
    explicit = eigh(G @ G.T, W @ W.T, eigvals_only=True)
    assert np.allclose(factored_pencil_eigenvalues(G, W), explicit, rtol=1e-8)


def _textbook_cg(A, b, iterations):
    """CG sem precondicionador, x⁰ = 0, iterados x¹..x^k"""
    x = np.zeros_like(b)
    r = b.copy()
    d = r.copy()
    iterates = []
    for _ in range(iterations):
        Ad = A @ d
        alpha = (r @ r) / (d @ Ad)
        x = x + alpha * d
        r_new = r - alpha * Ad
        d = r_new + ((r_new @ r_new) / (r @ r)) * d
        r = r_new
        iterates.append(x.copy())
    return iterates


def test_pcg_identity_on_identity_matrix():
    b = np.array([1.0, -2.0, 3.0])
    result = pcg_solve(np.eye(3), b, tol=1e-12)
    assert result.iterations == 1
    assert np.allclose(result.x, b)


def test_pcg_two_by_two():
    result = pcg_solve(np.array([[2.0, 1.0], [1.0, 2.0]]), np.ones(2), tol=1e-12)
    assert result.converged
    assert np.allclose(result.x, [1.0 / 3.0, 1.0 / 3.0], atol=1e-12)


@pytest.mark.parametrize("n", [2, 5, 9, 16])
def test_pcg_finite_termination(n):
    """Em aritmética quase exata o CG termina em ≤ n passos (+2 de folga)"""
    rng = np.random.default_rng(100 + n)
    A = _spd(rng, n)
    result = pcg_solve(A, rng.standard_normal(n), tol=1e-12, max_iter=10 * n)
    assert result.converged
    assert result.iterations <= n + 2


def test_pcg_identity_preconditioner_follows_plain_cg(rng):
    A = _spd(rng, 10)
    b = rng.standard_normal(10)
    reference = _textbook_cg(A, b, 6)

    for k in range(1, 7):
        plain = pcg_solve(A, b, tol=1e-300, max_iter=k)
        identity = pcg_solve(A, b, precond=lambda r: r, tol=1e-300, max_iter=k)
        assert plain.iterations == identity.iterations == k
        assert np.allclose(identity.x, plain.x, rtol=1e-13, atol=1e-15)
        assert np.allclose(plain.x, reference[k - 1], rtol=1e-10, atol=1e-13)


def test_dense_eig_equal_pencil_gives_ones(rng):
    B = _spd(rng, 5)
    assert np.allclose(dense_eig_general(B, B), np.ones(5))


def test_dense_eig_diagonal_and_nonsymmetric():
    assert np.allclose(dense_eig_general(np.diag([1.0, 2.0]), np.eye(2)), [1.0, 2.0])
    values = dense_eig_general(np.array([[1.0, 1.0], [0.0, 2.0]]), np.eye(2))
    assert np.allclose(np.sort(values.real), [1.0, 2.0])


def test_dense_eig_extremes_match_power_iteration(rng):
    A = _spd(rng, 6)
    B = _spd(rng, 6)
    values = dense_eig_general(A, B)

    # potência em B⁻¹A e potência inversa (A⁻¹B), quociente de Rayleigh do pencil
    top = rng.standard_normal(6)
    bottom = top.copy()
    for _ in range(2000):
        top = np.linalg.solve(B, A @ top)
        top /= np.linalg.norm(top)
        bottom = np.linalg.solve(A, B @ bottom)
        bottom /= np.linalg.norm(bottom)
    assert np.isclose(values[-1], (top @ A @ top) / (top @ B @ top), rtol=1e-6)
    assert np.isclose(values[0], (bottom @ A @ bottom) / (bottom @ B @ bottom), rtol=1e-6)


def test_pencil_residuals_are_absolute():
    """‖Av − λBv‖/‖v‖: não depende da escala de v, cresce com a escala de A"""
    A = np.diag([1.0, 2.0])
    v = np.array([[1.0], [0.0]])
    assert pencil_residuals(A, np.eye(2), np.array([1.0]), v)[0] == 0.0
    assert np.isclose(pencil_residuals(A, np.eye(2), np.array([1.5]), v)[0], 0.5)
    assert np.isclose(pencil_residuals(A, np.eye(2), np.array([1.5]), 10.0 * v)[0], 0.5)
    assert np.isclose(pencil_residuals(1e3 * A, 1e3 * np.eye(2), np.array([1.5]), v)[0], 500.0)
