#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes da malha, montagem P1 e prolongação
"""

import numpy as np
import pytest

from fem.assembly import assemble_lumped_mass, assemble_stiffness, build_space_operators, lumped_mass_diagonal
from fem.mesh import ControlBox, build_mesh, write_mesh_dump
from fem.transfer import prolongation
from utils.exceptions import ConfigurationError


@pytest.mark.parametrize("level", [1, 2, 4])
def test_mesh_counts(level):
    mesh = build_mesh(level)
    n = 2**level
    assert mesh.n_nodes == (n + 1) ** 2
    assert mesh.n_interior == (n - 1) ** 2
    assert len(mesh.triangles) == 2 * n * n
    assert np.all(mesh.signed_areas() > 0)


def test_mesh_rejects_level_zero():
    with pytest.raises(ConfigurationError):
        build_mesh(0)


def test_control_box_validation():
    with pytest.raises(ConfigurationError):
        ControlBox(0.5, 0.2, 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        ControlBox(0.0, 1.5, 0.0, 1.0)


def test_stiffness_is_five_point_stencil():
    """Nó interior central: 4 na diagonal e −1 nos quatro vizinhos"""
    mesh = build_mesh(3)
    stiffness = assemble_stiffness(mesh)
    center = mesh.global_to_interior[mesh.node_index(4, 4)]
    row = stiffness.getrow(center)

    assert row.nnz == 5
    assert row[0, center] == pytest.approx(4.0)
    for i, j in [(3, 4), (5, 4), (4, 3), (4, 5)]:
        assert row[0, mesh.global_to_interior[mesh.node_index(i, j)]] == pytest.approx(-1.0)


def test_full_stiffness_annihilates_constants():
    mesh = build_mesh(3)
    stiffness = assemble_stiffness(mesh, interior_only=False)
    assert np.allclose(stiffness @ np.ones(mesh.n_nodes), 0.0, atol=1e-12)


def test_lumped_mass_integrates_area():
    mesh = build_mesh(3)
    assert lumped_mass_diagonal(mesh, interior_only=False).sum() == pytest.approx(1.0)
    interior = lumped_mass_diagonal(mesh)
    assert np.allclose(interior, mesh.h**2)


def test_control_mass_on_subdomain():
    """Caixa (0, 0.25)²: só a célula do canto entra no nível 2"""
    mesh = build_mesh(2, ControlBox(0.0, 0.25, 0.0, 0.25))
    assert lumped_mass_diagonal(mesh, True, interior_only=False).sum() == pytest.approx(0.0625)

    control = lumped_mass_diagonal(mesh, restrict_to_control=True)
    corner = mesh.global_to_interior[mesh.node_index(1, 1)]
    assert control[corner] == pytest.approx(2 * (0.5 * 0.25**2) / 3)
    assert np.count_nonzero(control) == 1


def test_control_mask_membership():
    mesh = build_mesh(3, ControlBox(0.0, 0.25, 0.0, 0.25))
    inside = mesh.interior_coordinates[mesh.interior_control_mask]
    assert np.all(inside <= 0.25 + 1e-12)
    assert inside.shape[0] == 4


def test_khat_composition():
    mesh = build_mesh(2)
    ops = build_space_operators(mesh, dt=0.25, nu=2.0, a0=1.0)
    expected = 2.0 * ops.stiffness.toarray() + np.diag((4.0 + 1.0) * ops.mass_diagonal)
    assert np.allclose(ops.khat.toarray(), expected)
    assert np.allclose(ops.coupling_diagonal, ops.mass_diagonal / 0.25)


def test_stationary_operators_drop_time_term():
    mesh = build_mesh(2)
    ops = build_space_operators(mesh, dt=1.0, stationary=True)
    assert np.allclose(ops.khat.toarray(), ops.stiffness.toarray())
    assert not np.any(ops.coupling_diagonal)


@pytest.mark.parametrize("field, kwargs", [("dt", {"dt": 0.0}), ("nu", {"dt": 1.0, "nu": 0.0}), ("a0", {"dt": 1.0, "a0": -1.0})])
def test_space_operator_validation(field, kwargs):
    with pytest.raises(ConfigurationError) as info:
        build_space_operators(build_mesh(2), **kwargs)
    assert info.value.field == field


def test_prolongation_weights():
    coarse, fine = build_mesh(2), build_mesh(3)
    P = prolongation(coarse, fine)
    assert P.shape == (fine.n_interior, coarse.n_interior)

    # nó coincidente (0.5, 0.5) recebe peso 1 do nó grosso central
    fine_row = fine.global_to_interior[fine.node_index(4, 4)]
    coarse_col = coarse.global_to_interior[coarse.node_index(2, 2)]
    assert P[fine_row, coarse_col] == pytest.approx(1.0)
    assert P.getrow(fine_row).nnz == 1

    # ponto médio da diagonal da célula: metade de cada extremidade
    midpoint = fine.global_to_interior[fine.node_index(3, 3)]
    assert P.getrow(midpoint).sum() == pytest.approx(1.0)


def test_prolongation_requires_consecutive_levels():
    with pytest.raises(ConfigurationError):
        prolongation(build_mesh(2), build_mesh(4))


@pytest.mark.parametrize("level", [2, 3])
def test_stiffness_is_nested(level):
    """Pᵀ K_fino P reproduz a rigidez grossa (malhas aninhadas)"""
    coarse, fine = build_mesh(level), build_mesh(level + 1)
    P = prolongation(coarse, fine)
    galerkin = (P.T @ assemble_stiffness(fine) @ P).toarray()
    assert np.allclose(galerkin, assemble_stiffness(coarse).toarray(), atol=1e-12)


def test_mesh_dump(tmp_path):
    mesh = build_mesh(1, ControlBox(0.0, 0.5, 0.0, 0.5))
    lines = write_mesh_dump(mesh, tmp_path / "mesh.txt").read_text(encoding="utf-8").splitlines()

    assert lines[0] == "# level 1 nodes 9 triangles 8"
    assert lines[10] == "# triangles"
    assert len(lines) == 1 + 9 + 1 + 8
    center = lines[1 + 4].split()
    assert center[:3] == ["4", "0.5", "0.5"]
    assert center[3:] == ["0", "1"]
    assert lines[1 + 8].split()[3:] == ["1", "0"]


def test_lumped_mass_matrix_is_diagonal():
    mesh = build_mesh(3, ControlBox(0.0, 0.5, 0.0, 1.0))
    matrix = assemble_lumped_mass(mesh, restrict_to_control=True)
    assert matrix.shape == (mesh.n_interior, mesh.n_interior)
    assert np.array_equal(matrix.toarray(), np.diag(matrix.diagonal()))
    assert np.allclose(matrix.diagonal(), lumped_mass_diagonal(mesh, True, True))


@pytest.mark.parametrize("level", [1, 2, 3])
def test_stiffness_is_positive_definite(level):
    """λ_min(K) = 8 sin²(πh/2) > 0"""
    h = 2.0**-level
    values = np.linalg.eigvalsh(assemble_stiffness(build_mesh(level)).toarray())
    assert values[0] > 0
    assert values[0] == pytest.approx(8.0 * np.sin(np.pi * h / 2) ** 2, rel=1e-10)
