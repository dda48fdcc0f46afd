#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes do Dual+FRCG
"""

import numpy as np
import pytest

from parabolic.time_stepping import ParabolicSolver
from pipeline.frcg_solver import FrcgConfig, FrcgSolver
from problems.benchmarks import build_custom, build_example2, build_example3
from utils.exceptions import ConfigurationError

UNCONSTRAINED = {"bounds": [-1e6, 1e6], "target": {"amplitude": 1.0, "time_factor": "exp"}}


@pytest.mark.parametrize(
    "kwargs",
    [
        {"c": 0.0},
        {"c": 1.0},
        {"tol": 0.0},
        {"max_iter": -1},
        {"restart_period": 0},
        {"initial_step": "golden"},
        {"min_step": 0.0},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigurationError):
        FrcgConfig(**kwargs)


def test_config_overrides_ignore_none():
    config = FrcgConfig.from_config(tol=None, c=0.3)
    assert config.c == 0.3
    assert config.tol == pytest.approx(1e-4)


def test_zero_problem_needs_no_iteration():
    spec = build_custom(1e-3, 2, 4, {})
    solver = ParabolicSolver.from_spec(spec, inner_solver="direct")
    report = FrcgSolver(FrcgConfig()).solve(spec, parabolic=solver)

    assert report.iterations == 0 and report.converged
    assert not np.any(report.control)
    assert report.reldis != report.reldis  # y_d = 0: RelDis indefinido


def _unconstrained_hessian(solver, dense_space_time, gamma):
    """I + 𝒦⁻¹ℳ1𝒦⁻ᵀℳ/γ e os pesos Δt·diag ℳ do produto interno"""
    Kcal, mass, control_mass = dense_space_time(solver)
    Kinv = np.linalg.inv(Kcal)
    hessian = np.eye(Kcal.shape[0]) + Kinv @ np.diag(control_mass) @ Kinv.T @ np.diag(mass) / gamma
    return hessian, solver.grid.dt * mass


def test_unconstrained_problem_matches_dense_solution(dense_space_time):
    """Sem restrições ativas: (I + 𝒦⁻¹ℳ1𝒦⁻ᵀℳ/γ) q = y_d"""
    gamma = 1e-2
    spec = build_custom(gamma, 2, 2, UNCONSTRAINED)
    solver = ParabolicSolver.from_spec(spec, inner_solver="direct")
    hessian, _ = _unconstrained_hessian(solver, dense_space_time, gamma)
    expected = np.linalg.solve(hessian, spec.target.reshape(-1))

    config = FrcgConfig(tol=1e-10, initial_step="model", max_iter=200)
    report = FrcgSolver(config).solve(spec, parabolic=solver)

    assert report.converged
    assert np.allclose(report.q.reshape(-1), expected, rtol=1e-6, atol=1e-10)
    assert abs(report.duality_gap) <= 1e-8 * (1.0 + abs(report.primal_objective))


def test_objective_decreases_monotonically(small_example1, direct_solver):
    spec, _ = small_example1
    report = FrcgSolver(FrcgConfig(tol=1e-6)).solve(spec, parabolic=direct_solver)

    objectives = np.array(report.objectives)
    assert np.all(np.diff(objectives) <= 1e-14 * np.abs(objectives[:-1]).max())
    assert report.converged
    assert len(report.history) == report.iterations + 1
    assert list(report.history.columns[:3]) == ["iteration", "objective", "gradient_norm"]


def test_each_iteration_costs_one_dual_and_one_adjoint_sweep(small_example1, direct_solver):
    spec, _ = small_example1
    report = FrcgSolver(FrcgConfig(tol=1e-5)).solve(spec, parabolic=direct_solver)

    # superposição: uma varredura primal para y_free e outra para P(ū)
    assert report.sweeps["dual"] == report.iterations
    assert report.sweeps["adjoint"] == report.iterations + 1
    assert report.sweeps["primal"] == 2


def test_max_iter_returns_unconverged_report(small_example1, direct_solver):
    spec, _ = small_example1
    report = FrcgSolver(FrcgConfig(tol=1e-12, max_iter=2)).solve(spec, parabolic=direct_solver)
    assert report.iterations == 2
    assert not report.converged


def test_periodic_restart_is_counted(small_example1, direct_solver):
    spec, _ = small_example1
    report = FrcgSolver(FrcgConfig(tol=1e-12, max_iter=6, restart_period=2)).solve(spec, parabolic=direct_solver)
    assert report.restarts >= 3


def test_duality_gap_closes(small_example1, direct_solver):
    spec, _ = small_example1
    report = FrcgSolver(FrcgConfig(tol=1e-8, initial_step="model")).solve(spec, parabolic=direct_solver)
    assert report.converged
    assert abs(report.duality_gap) <= 1e-3 * (1.0 + abs(report.primal_objective))
    assert report.as_row()["mesh"] == "2^-2"


def test_fletcher_reeves_matches_linear_cg_on_quadratic(dense_space_time):
    """J quadrática + passo exato: FR reproduz o CG linear no produto ⟨·,·⟩_Δt"""
    gamma = 1e-2
    spec = build_custom(gamma, 2, 2, UNCONSTRAINED)
    solver = ParabolicSolver.from_spec(spec, inner_solver="direct")
    hessian, weights = _unconstrained_hessian(solver, dense_space_time, gamma)
    b = spec.target.reshape(-1)

    def inner(v, w):
        return float(np.sum(weights * v * w))

    def objective(x):
        return 0.5 * inner(x, hessian @ x) - inner(x, b)

    config = FrcgConfig(tol=1e-6, initial_step="model", max_iter=100)
    report = FrcgSolver(config).solve(spec, parabolic=solver)
    assert report.restarts == 0

    x, r = np.zeros_like(b), b.copy()
    d = r.copy()
    expected = [objective(x)]
    for _ in range(report.iterations):
        Hd = hessian @ d
        alpha = inner(r, r) / inner(d, Hd)
        x = x + alpha * d
        r_new = r - alpha * Hd
        d = r_new + (inner(r_new, r_new) / inner(r, r)) * d
        r = r_new
        expected.append(objective(x))

    assert np.allclose(report.objectives, expected, rtol=1e-8, atol=1e-14)
    assert np.allclose(report.q.reshape(-1), x, rtol=1e-6, atol=1e-10)


@pytest.mark.parametrize("problem", ["example2", "example3"])
def test_duality_gap_closes_on_other_examples(problem):
    spec = build_example2(1e-3, 3) if problem == "example2" else build_example3(1e-4, 3).problem
    solver = ParabolicSolver.from_spec(spec, inner_solver="direct")
    report = FrcgSolver(FrcgConfig(tol=1e-4)).solve(spec, parabolic=solver)

    assert report.converged
    assert abs(report.duality_gap) <= 1e-3 * (1.0 + abs(report.primal_objective))
