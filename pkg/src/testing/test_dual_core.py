#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Testes de θ, do objetivo dual, do gradiente e da busca de Armijo
"""

import numpy as np
import pytest

from core.bounds import ControlBounds, active_mask, project, theta, theta_derivative
from core.dual_functional import DualFunctional
from core.primal_recovery import effective_target, free_response, primal_objective, recover_primal
from parabolic.time_stepping import ParabolicSolver
from problems.benchmarks import build_custom
from testing.verification_suite import VerificationSuite, gradient_problems, max_gradient_error
from utils.config_manager import config_manager
from utils.exceptions import ConfigurationError, SolverError

BOUNDS = ControlBounds(-0.5, 0.5)
GAMMA = 1e-2


def test_bounds_validation():
    with pytest.raises(ConfigurationError):
        ControlBounds(0.1, 1.0)
    with pytest.raises(ConfigurationError):
        ControlBounds(-1.0, -0.1)


def test_projection_and_pieces():
    values = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    assert np.allclose(project(values, BOUNDS), [-0.5, -0.5, 0.0, 0.5, 0.5])
    assert np.array_equal(BOUNDS.pieces(values), [-1, 0, 0, 0, 1])


def test_theta_values():
    assert theta(0.0, GAMMA, BOUNDS) == 0.0
    assert theta(0.002, GAMMA, BOUNDS) == pytest.approx(0.002**2 / (2 * GAMMA))
    assert theta(1.0, GAMMA, BOUNDS) == pytest.approx(0.5 - 0.5 * GAMMA * 0.25)
    assert theta(-1.0, GAMMA, BOUNDS) == pytest.approx(0.5 - 0.5 * GAMMA * 0.25)


@pytest.mark.parametrize("kink", [GAMMA * BOUNDS.a, GAMMA * BOUNDS.b])
def test_theta_is_continuous_at_kinks(kink):
    eps = 1e-12
    # |θ′| ≤ max(|a|, |b|) perto da dobra
    jump = abs(theta(kink - eps, GAMMA, BOUNDS) - theta(kink + eps, GAMMA, BOUNDS))
    assert jump <= 2 * eps * max(1.0, abs(BOUNDS.a), abs(BOUNDS.b))


def test_theta_derivative_matches_finite_differences(rng):
    x = rng.uniform(-0.02, 0.02, 50)
    eps = 1e-8
    fd = (theta(x + eps, GAMMA, BOUNDS) - theta(x - eps, GAMMA, BOUNDS)) / (2 * eps)
    assert np.allclose(fd, theta_derivative(x, GAMMA, BOUNDS), atol=1e-6)
    assert np.all(theta(x, GAMMA, BOUNDS) >= 0.0)


def test_active_mask_is_closed_interval():
    p = GAMMA * np.array([-0.6, -0.5, 0.0, 0.5, 0.6])
    assert np.array_equal(active_mask(p, GAMMA, BOUNDS), [False, True, True, True, False])


def test_objective_forms_agree(small_example1, direct_solver, rng):
    spec, _ = small_example1
    functional = DualFunctional(spec, direct_solver)
    q = rng.standard_normal(spec.shape)
    p = functional.state(q)
    assert functional.objective(q, p) == pytest.approx(functional.objective_four_term(q, p), rel=1e-12)


@pytest.mark.parametrize("name", ["example1", "example2", "example3"])
def test_gradient_matches_finite_differences(name):
    """50 pares (q, d) com semente fixa, nível 3"""
    spec = gradient_problems(3)[name]
    rng = np.random.default_rng(config_manager.get_verification_config()["seed"])
    assert max_gradient_error(spec, rng, pairs=50) <= 1e-6


def test_verification_gradient_check_uses_seed():
    first = VerificationSuite(2, 4, seed=11).check_gradient()
    second = VerificationSuite(2, 4, seed=11).check_gradient()
    assert first.passed
    assert first.threshold == 1e-6
    assert first.value == second.value


def test_armijo_uses_one_dual_sweep(small_example1, direct_solver):
    spec, _ = small_example1
    functional = DualFunctional(spec, direct_solver)
    q = np.zeros(spec.shape)
    evaluation = functional.gradient(q)
    d = -evaluation.gradient

    before = direct_solver.sweep_counts["dual"]
    result = functional.armijo_search(q, evaluation.gradient, d, evaluation.state, initial_step=8.0)

    assert direct_solver.sweep_counts["dual"] == before + 1
    base = functional.objective(q, evaluation.state)
    assert result.objective <= base + 0.4 * result.step * direct_solver.inner_product(evaluation.gradient, d)
    assert result.initial_step == 8.0
    assert result.step == 8.0 * 0.5**result.backtracks


def test_affine_cache_matches_fresh_sweep(small_example1, direct_solver, rng):
    spec, _ = small_example1
    functional = DualFunctional(spec, direct_solver)
    q = rng.standard_normal(spec.shape)
    evaluation = functional.gradient(q)
    d = -evaluation.gradient
    result = functional.armijo_search(q, evaluation.gradient, d, evaluation.state)

    fresh = functional.state(q + 0.3 * d)
    assert np.allclose(result.cache.state(0.3), fresh, rtol=1e-10, atol=1e-14)


def test_ascent_direction_is_rejected(small_example1, direct_solver):
    spec, _ = small_example1
    functional = DualFunctional(spec, direct_solver)
    q = np.zeros(spec.shape)
    evaluation = functional.gradient(q)
    with pytest.raises(SolverError):
        functional.armijo_search(q, evaluation.gradient, evaluation.gradient, evaluation.state)


def test_model_step_is_exact_without_constraints(rng):
    """Sem nós saturados J é quadrática e o passo do modelo zera ⟨∇J, d⟩"""
    custom = {"bounds": [-1e6, 1e6], "target": {"amplitude": 1.0, "time_factor": "exp"}}
    spec = build_custom(1e-2, 2, 4, custom)
    solver = ParabolicSolver.from_spec(spec, inner_solver="direct")
    functional = DualFunctional(spec, solver)

    q = rng.standard_normal(spec.shape)
    evaluation = functional.gradient(q)
    d = -evaluation.gradient
    result = functional.armijo_search(q, evaluation.gradient, d, evaluation.state)

    assert result.backtracks == 0
    new_gradient = functional.gradient(q + result.step * d).gradient
    assert abs(solver.inner_product(new_gradient, d)) <= 1e-8 * solver.inner_product(d, d)


def test_free_response_shifts_target(small_example1, direct_solver):
    spec, _ = small_example1
    assert spec.has_free_response
    shifted = effective_target(spec, direct_solver)
    assert np.allclose(spec.target - shifted, free_response(spec, direct_solver))


def test_primal_recovery_and_objective(small_example1, direct_solver, rng):
    spec, _ = small_example1
    q = rng.standard_normal(spec.shape)
    p = GAMMA * rng.standard_normal(spec.shape)
    solution = recover_primal(spec, q, p)

    assert np.allclose(solution.state, spec.target - q)
    assert np.all(solution.control <= BOUNDS.b) and np.all(solution.control >= BOUNDS.a)

    value, state = primal_objective(spec, direct_solver, solution.control)
    misfit = state - spec.target
    expected = 0.5 * direct_solver.inner_product(misfit, misfit) + 0.5 * GAMMA * direct_solver.control_inner_product(
        solution.control, solution.control
    )
    assert value == pytest.approx(expected)


def test_projection_variational_inequality(rng):
    """⟨x − Pr(x), v − Pr(x)⟩_M ≤ 0 para todo v admissível"""
    weights = rng.uniform(0.1, 2.0, 40)
    for _ in range(20):
        x = rng.uniform(-3.0, 3.0, 40)
        v = rng.uniform(BOUNDS.a, BOUNDS.b, 40)
        projected = project(x, BOUNDS)
        assert np.sum(weights * (x - projected) * (v - projected)) <= 1e-14
        # componente a componente também
        assert np.all((x - projected) * (v - projected) <= 1e-15)


def test_dual_objective_is_bounded_below(small_example1, direct_solver, rng):
    """θ ≥ 0 ⇒ J(q) ≥ ½‖q − y_d‖² − ½‖y_d‖² ≥ −½‖y_d‖²_Δt"""
    spec, _ = small_example1
    functional = DualFunctional(spec, direct_solver)
    floor = -0.5 * direct_solver.inner_product(functional.target, functional.target)
    for scale in np.geomspace(1e-3, 1e2, 100):
        q = scale * rng.standard_normal(spec.shape)
        assert functional.objective(q, functional.state(q)) >= floor - 1e-12 * abs(floor)
