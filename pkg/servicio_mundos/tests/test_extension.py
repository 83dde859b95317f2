import itertools
import time

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.optimize import minimize

from app.core.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NonConvergenceError,
)
from app.models.extension_models import EnvelopeProblem, EnvelopeResult
from app.models.hilbert_models import HermitianOperator
from app.services import extension, hilbert, observables, states, worlds


def pure_problem(dim, world_seed, target_seed, n=0, **knobs):
    world = worlds.random_world(dim, world_seed)
    target = hilbert.random_hermitian(dim, target_seed)
    return EnvelopeProblem(state=states.vector_state(world, n), target=target, **knobs)


def grid_envelopes(weights, A, radius, step):
    """Brute-force upper/lower envelopes of a dim-2 problem in the standard world."""
    grid = np.arange(-radius, radius + step / 2, step)
    b = abs(A[0, 1])
    upper, lower = np.inf, -np.inf
    for lam0 in grid:
        # closed-form 2x2 spectral norm of diag(lam0, grid) - A
        a = lam0 - A[0, 0].real
        d = grid - A[1, 1].real
        norm = np.abs((a + d) / 2) + np.sqrt(((a - d) / 2) ** 2 + b**2)
        linear = weights[0] * lam0 + weights[1] * grid
        upper = min(upper, float(np.min(linear + norm)))
        lower = max(lower, float(np.max(linear - norm)))
    return upper, lower


def polished_upper(p, radius, starts=3):
    """Best bounded Nelder-Mead value of the exact upper objective over a grid of starts."""
    grid = np.linspace(-radius, radius, starts)
    best = np.inf
    for start in itertools.product(grid, repeat=p.dim):
        res = minimize(
            lambda lam: extension.objective_upper(p, lam),
            np.array(start),
            method="Nelder-Mead",
            bounds=[(-radius, radius)] * p.dim,
            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 20000},
        )
        best = min(best, float(res.fun))
    return best


def test_objective_upper_examples(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x)
    assert extension.objective_upper(p, [0.0, 0.0]) == pytest.approx(1.0)
    t = 10.0
    assert extension.objective_upper(p, [-t, t]) == pytest.approx(-t + np.sqrt(t**2 + 1))


def test_objective_upper_vanishing_norm_term(standard2):
    target = observables.materialize(observables.diagonal_observable(standard2, [2.0, -1.0]))
    p = EnvelopeProblem(state=states.diagonal_state(standard2, [0.3, 0.7]), target=target)
    assert extension.objective_upper(p, [2.0, -1.0]) == pytest.approx(0.3 * 2.0 - 0.7)


def test_objectives_reject_wrong_length(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x)
    with pytest.raises(DimensionMismatchError):
        extension.objective_upper(p, [0.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        extension.objective_lower(p, [0.0])


def test_problem_validation(standard2):
    state = states.vector_state(standard2, 0)
    with pytest.raises(DimensionMismatchError):
        EnvelopeProblem(state=state, target=hilbert.random_hermitian(3, 0))
    with pytest.raises(ValidationError):
        EnvelopeProblem(state=state, target=hilbert.random_hermitian(2, 0), box_radius=0)
    with pytest.raises(ValidationError):
        EnvelopeProblem(state=state, target=hilbert.random_hermitian(2, 0), tol=-1e-6)


def test_pure_state_sigma_x_pinches_to_zero(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x, box_radius=1e3)
    result = extension.solve_envelopes(p)
    assert result.converged
    assert result.upper == pytest.approx(0.0, abs=2e-2)
    assert result.lower == pytest.approx(0.0, abs=2e-2)
    assert -2 * p.tol <= result.gap <= 2e-2
    assert extension.unique_extension_value(p, result=result) == pytest.approx(0.0, abs=2e-2)


def test_mixed_state_keeps_an_honest_gap(standard2, sigma_x):
    p = EnvelopeProblem(state=states.uniform_state(standard2), target=sigma_x)
    result = extension.solve_envelopes(p)
    assert result.upper == pytest.approx(1.0, abs=1e-3)
    assert result.lower == pytest.approx(-1.0, abs=1e-3)
    assert result.gap == pytest.approx(2.0, abs=2e-3)
    assert extension.unique_extension_value(p, result=result) is None


def test_target_diagonal_in_the_state_world(rng):
    W = worlds.random_world(4, 21)
    eigenvalues = rng.normal(size=4)
    target = observables.materialize(observables.diagonal_observable(W, eigenvalues))
    state = states.diagonal_state(W, rng.dirichlet(np.ones(4)))
    p = EnvelopeProblem(state=state, target=target)

    expected = float(state.weights @ eigenvalues)
    result = extension.solve_envelopes(p)
    assert result.upper == pytest.approx(expected, abs=1e-6)
    assert result.lower == pytest.approx(expected, abs=1e-6)
    assert result.gap <= 2 * p.tol
    assert extension.truncation_bias(p) == pytest.approx(0.0, abs=1e-12)
    assert extension.unique_extension_value(p, result=result) == pytest.approx(expected, abs=1e-6)


def test_pure_states_have_a_unique_extension(rng):
    start = time.perf_counter()
    for _ in range(50):
        dim = int(rng.integers(2, 7))
        n = int(rng.integers(0, dim))
        p = pure_problem(
            dim, int(rng.integers(0, 2**31)), int(rng.integers(0, 2**31)), n, box_radius=1e3
        )
        oracle = extension.sandwich_value(p, n)
        result = extension.solve_envelopes(p)

        assert result.lower - p.tol <= oracle <= result.upper + p.tol
        assert result.upper == pytest.approx(oracle, abs=2e-2)
        assert result.lower == pytest.approx(oracle, abs=2e-2)
        assert result.gap <= 2e-2
        assert result.gap >= -2 * p.tol
    assert time.perf_counter() - start < 10.0


@pytest.mark.parametrize(
    "weights, target_seed",
    [([1.0, 0.0], 3), ([0.0, 1.0], 4), ([0.3, 0.7], 5), ([0.5, 0.5], 6)],
)
def test_matches_dense_grid_search(standard2, weights, target_seed):
    target = hilbert.random_hermitian(2, target_seed)
    p = EnvelopeProblem(
        state=states.diagonal_state(standard2, weights), target=target, box_radius=2.0
    )
    result = extension.solve_envelopes(p)
    grid_upper, grid_lower = grid_envelopes(np.array(weights), target.entries, 2.0, 1e-3)
    assert result.upper == pytest.approx(grid_upper, abs=5e-3)
    assert result.lower == pytest.approx(grid_lower, abs=5e-3)


@pytest.mark.parametrize("pure", [True, False])
def test_envelopes_tighten_as_the_box_grows(pure):
    W = worlds.random_world(3, 31)
    state = states.vector_state(W, 1) if pure else states.diagonal_state(W, [0.2, 0.3, 0.5])
    target = hilbert.random_hermitian(3, 32)

    uppers, lowers = [], []
    for radius in (1.0, 10.0, 100.0, 1000.0):
        result = extension.solve_envelopes(
            EnvelopeProblem(state=state, target=target, box_radius=radius)
        )
        uppers.append(result.upper)
        lowers.append(result.lower)

    slack = 1e-4
    assert all(b <= a + slack for a, b in zip(uppers, uppers[1:], strict=False))
    assert all(b >= a - slack for a, b in zip(lowers, lowers[1:], strict=False))


def test_sandwich_bound_holds_for_every_radius():
    for radius in (0.5, 1.0, 5.0):
        p = pure_problem(4, 41, 42, n=2, box_radius=radius)
        result = extension.solve_envelopes(p)
        oracle = extension.sandwich_value(p, 2)
        assert result.lower - p.tol <= oracle <= result.upper + p.tol


def test_upper_objective_is_convex(rng):
    p = pure_problem(5, 51, 52, n=0)
    for _ in range(100):
        lam1, lam2 = rng.uniform(-5, 5, size=(2, 5))
        mid = extension.objective_upper(p, (lam1 + lam2) / 2)
        mean = (extension.objective_upper(p, lam1) + extension.objective_upper(p, lam2)) / 2
        assert mid <= mean + 1e-9


def test_weak_duality(rng):
    W = worlds.random_world(4, 61)
    p = EnvelopeProblem(
        state=states.diagonal_state(W, [0.1, 0.2, 0.3, 0.4]),
        target=hilbert.random_hermitian(4, 62),
    )
    for _ in range(100):
        lam, mu = rng.uniform(-10, 10, size=(2, 4))
        assert extension.objective_lower(p, mu) <= extension.objective_upper(p, lam) + 1e-12


def test_exhausted_budget_is_reported_not_hidden():
    p = pure_problem(3, 71, 72, max_iter=1)
    result = extension.solve_envelopes(p)
    assert not result.converged
    assert result.upper >= result.lower

    with pytest.raises(NonConvergenceError) as excinfo:
        extension.require_converged(result)
    assert excinfo.value.result is result


def test_reported_values_respect_the_a_priori_bound():
    p = pure_problem(5, 81, 82, n=3)
    result = extension.solve_envelopes(p)
    bound = hilbert.operator_norm(p.target) + p.tol
    assert abs(result.upper) <= bound
    assert abs(result.lower) <= bound


def test_explicit_gap_tolerance_overrides_the_default(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x, box_radius=10.0)
    result = extension.solve_envelopes(p)
    assert extension.unique_extension_value(p, gap_tol=0.0, result=result) is None
    assert extension.unique_extension_value(p, gap_tol=1.0, result=result) is not None


def test_sandwich_value_checks_the_index(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x)
    assert extension.sandwich_value(p, 1) == 0.0
    with pytest.raises(IndexOutOfRangeError):
        extension.sandwich_value(p, 2)


def test_default_gap_tolerance_includes_truncation_bias(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x, box_radius=100.0)
    assert extension.truncation_bias(p) == pytest.approx(4 / 100.0)
    assert extension.default_gap_tol(p) == pytest.approx(10 * p.tol + 0.04)


def test_target_may_be_any_hermitian_matrix(standard2):
    target = HermitianOperator(entries=[[1.0, 2 - 1j], [2 + 1j, -3.0]])
    p = EnvelopeProblem(state=states.vector_state(standard2, 1), target=target)
    result = extension.solve_envelopes(p)
    assert result.lower - p.tol <= -3.0 <= result.upper + p.tol


@pytest.mark.parametrize("target_seed", [1, 7])
@pytest.mark.parametrize("weights", [[1.0, 0.0], [0.3, 0.7]])
def test_converged_values_sit_within_tol_of_a_polished_minimum(standard2, weights, target_seed):
    target = hilbert.random_hermitian(2, target_seed)
    p = EnvelopeProblem(
        state=states.diagonal_state(standard2, weights), target=target, box_radius=2.0
    )
    result = extension.solve_envelopes(p)
    reference = polished_upper(p, 2.0)

    # the certificate is a true lower bound on the box minimum
    assert result.upper_error is not None
    assert result.upper - result.upper_error <= reference + 1e-12
    if result.converged:
        assert result.upper_error <= p.tol
        assert result.upper <= reference + p.tol

    mirrored = EnvelopeProblem(
        state=p.state, target=HermitianOperator(entries=-target.entries), box_radius=2.0
    )
    neg_reference = polished_upper(mirrored, 2.0)
    assert -result.lower - result.lower_error <= neg_reference + 1e-12
    if result.converged:
        assert -result.lower <= neg_reference + p.tol


def test_certified_errors_close_on_the_pinching_example(standard2, sigma_x):
    p = EnvelopeProblem(state=states.vector_state(standard2, 0), target=sigma_x, box_radius=1e3)
    result = extension.solve_envelopes(p)
    assert 0.0 <= result.upper_error <= p.tol
    assert 0.0 <= result.lower_error <= p.tol
    # inf over the box is -R + sqrt(R^2 + 1), reached at (-R, R)
    assert result.upper == pytest.approx(-1e3 + np.sqrt(1e6 + 1), abs=p.tol)


def test_result_orders_its_envelopes():
    args = {"arg_upper": [0.0, 0.0], "arg_lower": [0.0, 0.0], "iterations": 3, "converged": True}
    assert EnvelopeResult(upper=1.0, lower=-1.0, gap=2.0, **args).gap == 2.0
    with pytest.raises(ValidationError):
        EnvelopeResult(upper=1.0, lower=-1.0, gap=1.5, **args)
    with pytest.raises(ValidationError):
        EnvelopeResult(upper=-1.0, lower=1.0, gap=-2.0, **args)
    with pytest.raises(ValidationError):
        EnvelopeResult(upper=1.0, lower=-1.0, gap=2.0, upper_error=-1.0, **args)
    with pytest.raises(DimensionMismatchError):
        EnvelopeResult(upper=1.0, lower=-1.0, gap=2.0, **{**args, "arg_lower": [0.0]})
