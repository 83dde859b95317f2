"""
Upper and lower envelopes of all extensions of a diagonal state.

    upper = inf_lambda  omega(diag lambda) + || sum lambda_n |e_n><e_n| - O' ||
    lower = sup_lambda  omega(diag lambda) - || sum lambda_n |e_n><e_n| - O' ||

over lambda in [-R, R]^dim. Both are convex problems in lambda. The norm term
is replaced by the log-sum-exp smoothing

    mu * log sum_i (exp(w_i / mu) + exp(-w_i / mu)),   w = eig(diag lambda - A),

which overestimates ||.|| by at most mu * log(2 dim), and minimized with
L-BFGS-B under a decreasing mu schedule. Reported values are always the exact
objectives at the returned arguments, so upper >= lower holds for every run.

Convergence is certified, not inferred from the optimizer status. For any
Hermitian Z with trace norm at most 1, ||X|| >= tr(Z X), so

    inf_box objective >= -tr(Z A) - R * sum_k |omega_k + Z_kk|.

The softmax-weighted eigenprojector at each stage supplies Z. A value is
reported as converged only when it lies within tol of such a bound.
"""

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp, softmax

from ..core.config import settings
from ..core.exceptions import DimensionMismatchError, IndexOutOfRangeError, NonConvergenceError
from ..core.logger import get_logger
from ..models.extension_models import EnvelopeProblem, EnvelopeResult
from . import hilbert, states
from .observables import in_world_coordinates

logger = get_logger("extension")

MU_DECAY = 10.0
# smoothing stages below tol / log(2 dim), tried while the certificate is still open
EXTRA_STAGES = 3
STAGE_MAX_ITER = 2000


def _local_target(p: EnvelopeProblem) -> np.ndarray:
    """O' written in the state's world, Hermitian-symmetrized."""
    A = in_world_coordinates(p.target, p.state.world)
    return (A + A.conj().T) / 2


def _exact(weights: np.ndarray, A: np.ndarray, lam: np.ndarray) -> float:
    return float(weights @ lam + hilbert.operator_norm(np.diag(lam) - A))


def objective_upper(p: EnvelopeProblem, lam) -> float:
    """omega(diag lambda) + ||diag lambda - O'||, convex in lambda."""
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (p.dim,):
        raise DimensionMismatchError(f"lambda has shape {lam.shape}, expected ({p.dim},)")
    return _exact(p.state.weights, _local_target(p), lam)


def objective_lower(p: EnvelopeProblem, mu) -> float:
    """omega(diag mu) - ||diag mu - O'||, concave in mu."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (p.dim,):
        raise DimensionMismatchError(f"mu has shape {mu.shape}, expected ({p.dim},)")
    A = _local_target(p)
    return float(p.state.weights @ mu - hilbert.operator_norm(np.diag(mu) - A))


def _smoothed(lam: np.ndarray, weights: np.ndarray, A: np.ndarray, mu: float):
    """Smoothed objective and its gradient."""
    w, V = np.linalg.eigh(np.diag(lam) - A)
    z = np.concatenate([w, -w]) / mu
    value = float(weights @ lam + mu * logsumexp(z))
    s = softmax(z)
    n = w.shape[0]
    # d w_i / d lambda_k = |V_ki|^2
    grad = weights + (np.abs(V) ** 2) @ (s[:n] - s[n:])
    return value, grad


def _dual_bound(weights: np.ndarray, A: np.ndarray, R: float, Z: np.ndarray) -> float:
    """
    Lower bound on the box infimum from a Hermitian Z of trace norm at most 1.

    ||X|| >= tr(Z X), so the objective dominates the affine function
    lambda -> (weights + diag Z) . lambda - tr(Z A), minimized exactly over the box.
    """
    slope = weights + np.real(np.diag(Z))
    return float(-np.real(np.trace(Z @ A)) - R * np.sum(np.abs(slope)))


def _certificate(lam: np.ndarray, weights: np.ndarray, A: np.ndarray, R: float, mu: float):
    """Best dual bound read off the smoothed gradient at lam."""
    w, V = np.linalg.eigh(np.diag(lam) - A)
    s = softmax(np.concatenate([w, -w]) / mu)
    n = w.shape[0]
    Z = (V * (s[:n] - s[n:])) @ V.conj().T
    bound = _dual_bound(weights, A, R, Z)

    # cancel the slope on coordinates the box does not hold in place
    slope = weights + np.real(np.diag(Z))
    loose = lam * slope > -R * np.abs(slope)
    corrected = Z - np.diag(np.where(loose, slope, 0.0))
    corrected /= max(1.0, float(np.sum(np.abs(np.linalg.eigvalsh(corrected)))))
    return max(bound, _dual_bound(weights, A, R, corrected))


def _minimize_upper(weights: np.ndarray, A: np.ndarray, R: float, tol: float, budget: int):
    """
    Minimizes the exact upper objective over the box.

    Stages stop as soon as the best value is within tol of a certified lower
    bound. Returns (argument, value, certified error or None, iterations).
    """
    dim = A.shape[0]
    bounds = [(-R, R)] * dim
    start = np.clip(np.real(np.diag(A)), -R, R)

    candidates = [np.zeros(dim), start]
    best = min(candidates, key=lambda lam: _exact(weights, A, lam))
    best_value = _exact(weights, A, best)
    floor = -np.inf

    mu = max(hilbert.operator_norm(A), 1.0)
    mu_floor = tol / np.log(2 * dim) / MU_DECAY**EXTRA_STAGES
    x = start
    iterations = 0

    while iterations < budget:
        res = minimize(
            _smoothed,
            x,
            args=(weights, A, mu),
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={
                "maxiter": min(budget - iterations, STAGE_MAX_ITER),
                "ftol": 0.0,
                "gtol": 1e-11,
                "maxcor": 20,
            },
        )
        iterations += int(res.nit)
        x = np.clip(res.x, -R, R)
        value = _exact(weights, A, x)
        if value < best_value:
            best, best_value = x, value
        floor = max(floor, _certificate(x, weights, A, R, mu))
        logger.debug(
            f"stage mu={mu:.2e}: value={value:.12f} bound={floor:.12f} "
            f"nit={res.nit} status={res.status}"
        )

        if best_value - floor <= tol or mu <= mu_floor:
            break
        mu = max(mu / MU_DECAY, mu_floor)

    error = max(best_value - floor, 0.0) if np.isfinite(floor) else None
    return best, best_value, error, iterations


def solve_envelopes(p: EnvelopeProblem) -> EnvelopeResult:
    """
    Box-constrained upper and lower envelopes.

    The lower envelope is minus the upper envelope of -O' (substitute mu = -lambda).
    converged means both values are certified within tol of their box optima.
    A result with converged=False is returned, not raised, when the budget runs out.
    """
    weights = np.asarray(p.state.weights, dtype=float)
    A = _local_target(p)
    half_budget = max(p.max_iter // 2, 1)

    arg_up, upper, err_up, it_up = _minimize_upper(
        weights, A, p.box_radius, p.tol, half_budget
    )
    arg_neg, neg_lower, err_lo, it_lo = _minimize_upper(
        weights, -A, p.box_radius, p.tol, half_budget
    )

    result = EnvelopeResult(
        upper=upper,
        lower=-neg_lower,
        gap=upper + neg_lower,
        arg_upper=arg_up,
        arg_lower=-arg_neg,
        iterations=it_up + it_lo,
        converged=all(err is not None and err <= p.tol for err in (err_up, err_lo)),
        upper_error=err_up,
        lower_error=err_lo,
    )

    if result.converged:
        logger.info(
            f"Envelopes dim={p.dim} R={p.box_radius}: upper={result.upper:.9f} "
            f"lower={result.lower:.9f} gap={result.gap:.3e} iterations={result.iterations}"
        )
    else:
        logger.warning(
            f"Envelope solver stopped after {result.iterations} iterations without "
            f"certifying tol={p.tol}; returning best-so-far"
        )
    return result


def require_converged(result: EnvelopeResult) -> EnvelopeResult:
    if not result.converged:
        raise NonConvergenceError(
            "envelope solver did not converge within its budget",
            result=result,
            details={"iterations": result.iterations},
        )
    return result


def truncation_bias(p: EnvelopeProblem) -> float:
    """
    A-priori bound on the gap caused by the box: 4 ||O'_offdiag||^2 / R.

    Zero when O' is diagonal in the state's world.
    """
    A = _local_target(p)
    off_diagonal = A - np.diag(np.diag(A))
    return 4.0 * hilbert.operator_norm(off_diagonal) ** 2 / p.box_radius


def default_gap_tol(p: EnvelopeProblem) -> float:
    return settings.GAP_TOL_FACTOR * p.tol + truncation_bias(p)


def unique_extension_value(
    p: EnvelopeProblem, gap_tol: float | None = None, result: EnvelopeResult | None = None
) -> float | None:
    """
    (upper + lower) / 2 when the envelopes pinch to within gap_tol, else None.
    """
    result = result or solve_envelopes(p)
    gap_tol = default_gap_tol(p) if gap_tol is None else gap_tol
    if result.gap <= gap_tol:
        return (result.upper + result.lower) / 2
    logger.debug(f"no unique extension: gap {result.gap:.3e} > {gap_tol:.3e}")
    return None


def sandwich_value(p: EnvelopeProblem, n: int) -> float:
    """<e_n|O'|e_n> for the n-th vector of the state's world; the pure-state oracle."""
    if not 0 <= n < p.dim:
        raise IndexOutOfRangeError(f"index {n} outside [0, {p.dim})")
    return states.sandwich(p.state.world.ket(n), p.target)
