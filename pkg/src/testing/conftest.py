#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fixtures compartilhadas dos testes
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Adicionar src ao path para imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from parabolic.time_stepping import ParabolicSolver
from problems.benchmarks import build_example1


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def small_example1():
    """Exemplo 1, γ = 1e-2, nível 2, N = 4"""
    spec, exact = build_example1(1e-2, 2, 4)
    return spec, exact


@pytest.fixture
def direct_solver(small_example1):
    spec, _ = small_example1
    return ParabolicSolver.from_spec(spec, inner_solver="direct")


@pytest.fixture
def dense_space_time():
    """Função que devolve (𝒦, diag ℳ, diag ℳ1) densos para oráculos"""

    def build(solver: ParabolicSolver):
        N = solver.grid.N
        return (
            solver.assemble_space_time_matrix().toarray(),
            np.tile(solver.mass, N),
            np.tile(solver.control_mass, N),
        )

    return build
