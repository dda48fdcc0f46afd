#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Montagem P1: rigidez, massa condensada (lumped) em Ω e em O, e o operador
de passo de tempo K̂ = M/Δt + νK + a₀M, todos restritos aos nós interiores.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix

from fem.mesh import SpaceMesh
from linalg.sparse_ops import TripletBuilder, canonical, diagonal_matrix, restrict
from utils.exceptions import ConfigurationError


def _local_stiffness(mesh: SpaceMesh) -> np.ndarray:
    """Matrizes 3×3 de ∫∇φ_i·∇φ_j por triângulo, vetorizado"""
    p = mesh.coordinates[mesh.triangles]  # (n_t, 3, 2)
    # b_i = y_{i+1} − y_{i+2}, c_i = x_{i+2} − x_{i+1}
    b = np.roll(p[:, :, 1], -1, axis=1) - np.roll(p[:, :, 1], -2, axis=1)
    c = np.roll(p[:, :, 0], -2, axis=1) - np.roll(p[:, :, 0], -1, axis=1)
    area = mesh.signed_areas()
    return (b[:, :, None] * b[:, None, :] + c[:, :, None] * c[:, None, :]) / (4.0 * area[:, None, None])


def assemble_stiffness(mesh: SpaceMesh, interior_only: bool = True) -> csr_matrix:
    """
    Matriz de rigidez k_ij = ∫∇φ_i·∇φ_j.

    Na malha uniforme a linha de um nó interior vira o estêncil de 5 pontos
    (4 na diagonal, −1 nos vizinhos); os acoplamentos diagonais são nulos.
    """
    local = _local_stiffness(mesh)
    builder = TripletBuilder(mesh.n_nodes, mesh.n_nodes)
    rows = np.repeat(mesh.triangles, 3, axis=1)
    cols = np.tile(mesh.triangles, (1, 3))
    builder.add(rows, cols, local.reshape(len(mesh.triangles), 9))
    stiffness = builder.to_csr()
    if interior_only:
        return restrict(stiffness, mesh.interior_nodes, mesh.interior_nodes)
    return stiffness


def lumped_mass_diagonal(
    mesh: SpaceMesh, restrict_to_control: bool = False, interior_only: bool = True
) -> np.ndarray:
    """
    m_ii = Σ_j ∫φ_iφ_j = Σ área/3 sobre os triângulos que contêm i.

    Com restrict_to_control só contam os triângulos cujo baricentro está na
    caixa fechada de controle.
    """
    weights = np.abs(mesh.signed_areas()) / 3.0
    if restrict_to_control:
        weights = np.where(mesh.control_box.contains(mesh.barycenters()), weights, 0.0)
    diagonal = np.zeros(mesh.n_nodes)
    np.add.at(diagonal, mesh.triangles, weights[:, None])
    if interior_only:
        return diagonal[mesh.interior_nodes]
    return diagonal


def assemble_lumped_mass(
    mesh: SpaceMesh, restrict_to_control: bool = False, interior_only: bool = True
) -> csr_matrix:
    return diagonal_matrix(lumped_mass_diagonal(mesh, restrict_to_control, interior_only))


@dataclass(frozen=True)
class SpaceOperators:
    """Operadores espaciais de um nível, já restritos aos nós interiores"""

    mass: csr_matrix
    control_mass: csr_matrix
    stiffness: csr_matrix
    khat: csr_matrix
    mass_diagonal: np.ndarray
    control_mass_diagonal: np.ndarray
    dt: float
    nu: float
    a0: float
    stationary: bool = False

    @property
    def n(self) -> int:
        return self.mass_diagonal.size

    @property
    def coupling_diagonal(self) -> np.ndarray:
        """Diagonal de M/Δt (zero no caso estacionário)"""
        if self.stationary:
            return np.zeros_like(self.mass_diagonal)
        return self.mass_diagonal / self.dt


def build_space_operators(
    mesh: SpaceMesh, dt: float, nu: float = 1.0, a0: float = 0.0, stationary: bool = False
) -> SpaceOperators:
    """
    Monta M, M1, K e K̂ = M/Δt + νK + a₀M (sem M/Δt quando stationary).
    """
    if dt <= 0:
        raise ConfigurationError(f"Δt deve ser positivo, recebeu {dt}", field="dt")
    if nu <= 0:
        raise ConfigurationError(f"ν deve ser positivo, recebeu {nu}", field="nu")
    if a0 < 0:
        raise ConfigurationError(f"a₀ deve ser não negativo, recebeu {a0}", field="a0")

    stiffness = assemble_stiffness(mesh)
    mass_diagonal = lumped_mass_diagonal(mesh)
    control_mass_diagonal = lumped_mass_diagonal(mesh, restrict_to_control=True)

    time_term = 0.0 if stationary else 1.0 / dt
    khat = canonical(nu * stiffness + diagonal_matrix((time_term + a0) * mass_diagonal))

    return SpaceOperators(
        mass=diagonal_matrix(mass_diagonal),
        control_mass=diagonal_matrix(control_mass_diagonal),
        stiffness=stiffness,
        khat=khat,
        mass_diagonal=mass_diagonal,
        control_mass_diagonal=control_mass_diagonal,
        dt=float(dt),
        nu=float(nu),
        a0=float(a0),
        stationary=bool(stationary),
    )
