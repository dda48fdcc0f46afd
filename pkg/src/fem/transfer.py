#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transferência entre níveis (interpolação P1 sobre nós interiores).
"""

import numpy as np
from scipy.sparse import csr_matrix

from fem.mesh import SpaceMesh
from linalg.sparse_ops import TripletBuilder
from utils.exceptions import ConfigurationError


def prolongation(coarse: SpaceMesh, fine: SpaceMesh) -> csr_matrix:
    """
    Interpolação linear dos nós interiores grossos para os finos.

    - fino coincidente com nó grosso: peso 1
    - ponto médio de aresta grossa: 1/2 de cada extremidade
      (horizontal, vertical ou a diagonal das células)
    - extremidades de Dirichlet não contribuem
    """
    if fine.level != coarse.level + 1:
        raise ConfigurationError(
            f"Prolongação exige níveis consecutivos (grosso {coarse.level}, fino {fine.level})",
            field="level",
        )

    n_fine = fine.cells_per_side
    builder = TripletBuilder(fine.n_interior, coarse.n_interior)

    fine_ij = np.rint(fine.interior_coordinates * n_fine).astype(np.int64)
    fi, fj = fine_ij[:, 0], fine_ij[:, 1]
    rows = np.arange(fine.n_interior)

    # pais (I, J) em coordenadas grossas; (I−1)/2 e (I+1)/2 para índices ímpares
    parents = []
    even_i, even_j = fi % 2 == 0, fj % 2 == 0
    both_even = even_i & even_j
    parents.append((rows[both_even], fi[both_even] // 2, fj[both_even] // 2, 1.0))

    odd_i_only = ~even_i & even_j
    for shift in (-1, 1):
        parents.append(
            (rows[odd_i_only], (fi[odd_i_only] + shift) // 2, fj[odd_i_only] // 2, 0.5)
        )

    odd_j_only = even_i & ~even_j
    for shift in (-1, 1):
        parents.append(
            (rows[odd_j_only], fi[odd_j_only] // 2, (fj[odd_j_only] + shift) // 2, 0.5)
        )

    # ambos ímpares: ponto médio da diagonal inferior-esquerda → superior-direita
    both_odd = ~even_i & ~even_j
    for shift in (-1, 1):
        parents.append(
            (rows[both_odd], (fi[both_odd] + shift) // 2, (fj[both_odd] + shift) // 2, 0.5)
        )

    for fine_rows, ci, cj, weight in parents:
        coarse_global = cj * (coarse.cells_per_side + 1) + ci
        coarse_interior = coarse.global_to_interior[coarse_global]
        keep = coarse_interior >= 0
        builder.add(fine_rows[keep], coarse_interior[keep], np.full(keep.sum(), weight))

    return builder.to_csr()
