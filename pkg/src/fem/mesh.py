#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Space Mesh - Triangulação uniforme P1 do quadrado unitário

Este módulo é responsável por:
1. Gerar nós e triângulos do nível ℓ (h = 2^-ℓ)
2. Marcar nós de Dirichlet e numerar os nós interiores
3. Marcar a região de controle O (caixa fechada)
4. Exportar a malha em texto para depuração
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from utils.exceptions import ConfigurationError

GEOMETRY_TOL = 1e-12


@dataclass(frozen=True)
class ControlBox:
    """Caixa alinhada aos eixos [x_min, x_max] × [y_min, y_max] ⊆ [0, 1]²"""

    x_min: float = 0.0
    x_max: float = 1.0
    y_min: float = 0.0
    y_max: float = 1.0

    def __post_init__(self):
        for name in ("x_min", "x_max", "y_min", "y_max"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigurationError(f"Caixa de controle fora de [0, 1]: {value}", field=name)
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ConfigurationError(f"Caixa de controle vazia: {self}", field="control_region")

    @classmethod
    def whole_domain(cls) -> "ControlBox":
        return cls()

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Pertinência à caixa fechada, ponto a ponto"""
        points = np.atleast_2d(points)
        x, y = points[:, 0], points[:, 1]
        return (
            (x >= self.x_min - GEOMETRY_TOL)
            & (x <= self.x_max + GEOMETRY_TOL)
            & (y >= self.y_min - GEOMETRY_TOL)
            & (y <= self.y_max + GEOMETRY_TOL)
        )


@dataclass(frozen=True)
class SpaceMesh:
    level: int
    coordinates: np.ndarray  # (n_nodes, 2)
    triangles: np.ndarray  # (n_triangles, 3), sentido anti-horário
    boundary_mask: np.ndarray
    interior_nodes: np.ndarray  # índice global de cada nó interior
    global_to_interior: np.ndarray  # -1 nos nós de Dirichlet
    control_box: ControlBox = field(default_factory=ControlBox)
    control_mask: Optional[np.ndarray] = None

    @property
    def cells_per_side(self) -> int:
        return 2**self.level

    @property
    def h(self) -> float:
        return 1.0 / self.cells_per_side

    @property
    def n_nodes(self) -> int:
        return self.coordinates.shape[0]

    @property
    def n_interior(self) -> int:
        return self.interior_nodes.size

    @property
    def interior_coordinates(self) -> np.ndarray:
        return self.coordinates[self.interior_nodes]

    @property
    def interior_control_mask(self) -> np.ndarray:
        return self.control_mask[self.interior_nodes]

    def node_index(self, i: int, j: int) -> int:
        """Índice global do nó (x, y) = (i h, j h)"""
        return j * (self.cells_per_side + 1) + i

    def signed_areas(self) -> np.ndarray:
        p = self.coordinates[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def barycenters(self) -> np.ndarray:
        return self.coordinates[self.triangles].mean(axis=1)


def build_mesh(level: int, control_box: Optional[ControlBox] = None) -> SpaceMesh:
    """
    Malha uniforme do nível `level`; toda célula é cortada na diagonal
    inferior-esquerda → superior-direita.

    Args:
        level: nível de refinamento (≥ 1)
        control_box: região de controle O (None = domínio todo)
    """
    if int(level) != level or level < 1:
        raise ConfigurationError(f"Nível {level} não tem nós interiores (mínimo 1)", field="level")
    level = int(level)
    control_box = control_box or ControlBox.whole_domain()

    n = 2**level
    h = 1.0 / n
    jj, ii = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    coordinates = np.column_stack([ii.ravel() * h, jj.ravel() * h])

    cj, ci = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    a = (cj * (n + 1) + ci).ravel()
    b = a + 1
    c = a + n + 2
    d = a + n + 1
    triangles = np.empty((2 * n * n, 3), dtype=np.int64)
    triangles[0::2] = np.column_stack([a, b, c])
    triangles[1::2] = np.column_stack([a, c, d])

    on_edge_i = (ii.ravel() == 0) | (ii.ravel() == n)
    on_edge_j = (jj.ravel() == 0) | (jj.ravel() == n)
    boundary_mask = on_edge_i | on_edge_j
    interior_nodes = np.flatnonzero(~boundary_mask)
    global_to_interior = np.full(coordinates.shape[0], -1, dtype=np.int64)
    global_to_interior[interior_nodes] = np.arange(interior_nodes.size)

    return SpaceMesh(
        level=level,
        coordinates=coordinates,
        triangles=triangles,
        boundary_mask=boundary_mask,
        interior_nodes=interior_nodes,
        global_to_interior=global_to_interior,
        control_box=control_box,
        control_mask=control_box.contains(coordinates),
    )


def write_mesh_dump(mesh: SpaceMesh, path: Union[str, Path]) -> Path:
    """Uma linha por nó: índice x1 x2 fronteira controle; depois os triângulos"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(f"# level {mesh.level} nodes {mesh.n_nodes} triangles {len(mesh.triangles)}\n")
        for index, (x1, x2) in enumerate(mesh.coordinates):
            f.write(
                f"{index} {x1:.12g} {x2:.12g} "
                f"{int(mesh.boundary_mask[index])} {int(mesh.control_mask[index])}\n"
            )
        f.write("# triangles\n")
        for tri in mesh.triangles:
            f.write(f"{tri[0]} {tri[1]} {tri[2]}\n")
    return path
