#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes do estudo espectral de ℂₖ⁻¹Cₖ
"""

import numpy as np
import pytest

from pipeline.spectral_study import SPECTRUM_COLUMNS, SpectralStudy, active_pattern, spectral_study
from pipeline.ssn_preconditioner import ActiveSets, FactorizedPreconditioner
from utils.exceptions import ConfigurationError


@pytest.fixture(scope="module")
def study():
    return SpectralStudy(level=2, N=4)


def test_default_sweep_respects_bounds():
    table = spectral_study(level=2, N=4, gammas=[1e-1, 1e-4, 1e-8], patterns=["none", "full", "random", "checker"])
    assert list(table.columns) == SPECTRUM_COLUMNS
    assert len(table) == 12
    assert table["passed"].all()
    assert (table["lambda_min"] >= 0.5 - 1e-10).all()
    assert (table["lambda_max"] <= table["bound"] + 1e-8).all()


def test_empty_active_set_gives_unit_spectrum(study):
    row = study.evaluate(active_pattern("none", (4, 9)), 1e-3, "none")
    assert row.lambda_min == pytest.approx(1.0)
    assert row.lambda_max == pytest.approx(1.0)
    assert row.zeta == pytest.approx(1.0)
    assert row.bound == pytest.approx(5.0)


def test_zeta_matches_definition(study):
    """ζ = ‖√γ(√γI + ℳ^{1/2}𝒦⁻¹ℳ1^{1/2}Π)⁻¹‖₂"""
    gamma = 1e-3
    pi = active_pattern("random", (4, 9), seed=3).reshape(-1).astype(float)
    size = pi.size
    inner = np.diag(np.sqrt(study.mass)) @ np.linalg.inv(study.Kcal) @ np.diag(np.sqrt(study.control_mass) * pi)
    expected = np.linalg.norm(np.sqrt(gamma) * np.linalg.inv(np.sqrt(gamma) * np.eye(size) + inner), 2)
    assert study.zeta(pi, gamma) == pytest.approx(expected, rel=1e-8)


def test_factored_preconditioner_matches_dense_operator(study, rng):
    gamma = 1e-2
    mask = active_pattern("checker", (4, 9))
    _, approximation = study.dense_operators(mask, gamma)

    active = ActiveSets(mask, np.zeros(mask.shape, dtype=int))
    preconditioner = FactorizedPreconditioner(study.solver, active, gamma, exact=True)
    v = rng.standard_normal((4, 9))
    assert np.allclose(preconditioner.apply_operator(v).reshape(-1), approximation @ v.reshape(-1))


def test_oversized_study_is_refused():
    with pytest.raises(ConfigurationError):
        SpectralStudy(level=3, N=4)
    with pytest.raises(ConfigurationError):
        SpectralStudy(level=2, N=8)


def test_unknown_pattern_is_refused():
    with pytest.raises(ConfigurationError):
        active_pattern("stripes", (2, 2))
