#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Sparse Ops - Montagem e produtos de matrizes esparsas

Toda montagem passa por triplas (linha, coluna, valor) somadas em CSR
canônico: sem pares duplicados e colunas ordenadas dentro de cada linha.
"""

from typing import List

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix, diags, spmatrix

from utils.exceptions import DimensionMismatchError, NonFiniteError


class TripletBuilder:
    """Acumula contribuições elementares e gera uma matriz CSR canônica"""

    def __init__(self, n_rows: int, n_cols: int):
        self.shape = (int(n_rows), int(n_cols))
        self._rows: List[np.ndarray] = []
        self._cols: List[np.ndarray] = []
        self._vals: List[np.ndarray] = []

    def add(self, rows, cols, values) -> None:
        rows = np.asarray(rows, dtype=np.int64).ravel()
        cols = np.asarray(cols, dtype=np.int64).ravel()
        values = np.asarray(values, dtype=float).ravel()
        if not (rows.size == cols.size == values.size):
            raise DimensionMismatchError(
                f"Triplas com tamanhos diferentes: {rows.size}, {cols.size}, {values.size}"
            )
        self._rows.append(rows)
        self._cols.append(cols)
        self._vals.append(values)

    def to_csr(self) -> csr_matrix:
        if self._rows:
            rows = np.concatenate(self._rows)
            cols = np.concatenate(self._cols)
            vals = np.concatenate(self._vals)
        else:
            rows = cols = np.zeros(0, dtype=np.int64)
            vals = np.zeros(0)
        # coo -> csr soma duplicatas
        matrix = coo_matrix((vals, (rows, cols)), shape=self.shape).tocsr()
        return canonical(matrix)


def canonical(matrix: spmatrix) -> csr_matrix:
    matrix = csr_matrix(matrix)
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    matrix.sort_indices()
    return matrix


def diagonal_matrix(values) -> csr_matrix:
    return csr_matrix(diags(np.asarray(values, dtype=float), 0, format="csr"))


def is_symmetric(matrix: spmatrix) -> bool:
    """Simetria exata das entradas armazenadas"""
    difference = csr_matrix(matrix - matrix.T)
    difference.eliminate_zeros()
    return difference.nnz == 0


def check_finite(values: np.ndarray, name: str = "vetor") -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NonFiniteError(f"Valores não finitos em {name}")
    return values


def spmv(matrix: spmatrix, x: np.ndarray) -> np.ndarray:
    """Produto matriz-vetor com verificação de dimensão"""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or matrix.shape[1] != x.shape[0]:
        raise DimensionMismatchError(
            f"spmv: matriz {matrix.shape} incompatível com vetor {x.shape}"
        )
    return np.asarray(matrix @ x)


def restrict(matrix: spmatrix, rows: np.ndarray, cols: np.ndarray) -> csr_matrix:
    """Submatriz (eliminação de Dirichlet por remoção de linhas/colunas)"""
    return canonical(csr_matrix(matrix)[rows][:, cols])
