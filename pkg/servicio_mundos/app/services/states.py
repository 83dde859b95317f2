"""States on the diagonal algebra of a world and Born-rule statistics across worlds."""

from collections.abc import Sequence

import numpy as np

from ..core.config import settings
from ..core.exceptions import (
    DimensionMismatchError,
    IndexOutOfRangeError,
    NotNormalizedError,
    WorldMismatchError,
)
from ..core.logger import get_logger
from ..models.hilbert_models import Ket, Operator
from ..models.observable_models import DiagonalObservable
from ..models.state_models import DiagonalState, TransitionMatrix
from ..models.world_models import World
from .observables import same_world

logger = get_logger("states")


def diagonal_state(world: World, weights: Sequence[float]) -> DiagonalState:
    return DiagonalState(world=world, weights=list(weights))


def uniform_state(world: World) -> DiagonalState:
    return DiagonalState(world=world, weights=np.full(world.dim, 1.0 / world.dim))


def vector_state(W: World, n: int) -> DiagonalState:
    """omega_n: point mass at basis index n."""
    if not 0 <= n < W.dim:
        raise IndexOutOfRangeError(f"index {n} outside [0, {W.dim})", details={"index": n})
    weights = np.zeros(W.dim)
    weights[n] = 1.0
    return DiagonalState(world=W, weights=weights)


def is_pure(s: DiagonalState) -> bool:
    """Exactly one weight equal to one."""
    eps = settings.EPS
    return bool(np.sum(np.abs(s.weights - 1.0) <= eps) == 1 and np.sum(s.weights > eps) == 1)


def expectation_same_world(s: DiagonalState, obs: DiagonalObservable) -> float:
    """sum_n p_n lambda_n; only defined when the observable lives in the state's world."""
    if not same_world(s.world, obs.world):
        raise WorldMismatchError("observable is not relative to the state's world")
    return float(np.dot(s.weights, obs.eigenvalues))


def transition_matrix(W: World, W2: World) -> TransitionMatrix:
    """T_nk = |<e_n|e'_k>|^2."""
    if W.dim != W2.dim:
        raise DimensionMismatchError(f"cannot relate worlds of dim {W.dim} and {W2.dim}")
    overlaps = W.vectors.conj() @ W2.vectors.T
    return TransitionMatrix(rows=np.abs(overlaps) ** 2)


def born_expectation(s: DiagonalState, obs: DiagonalObservable) -> float:
    """sum_n p_n sum_k T_nk lambda_k with T = transition_matrix(s.world, obs.world)."""
    if s.dim != obs.dim:
        raise DimensionMismatchError(f"state dim {s.dim} != observable dim {obs.dim}")
    if same_world(s.world, obs.world):
        return expectation_same_world(s, obs)
    T = transition_matrix(s.world, obs.world).rows
    return float(s.weights @ T @ obs.eigenvalues)


def outcome_distribution(s: DiagonalState, W2: World) -> list[float]:
    """q = p^T T: probability of each basis index of W2."""
    if s.dim != W2.dim:
        raise DimensionMismatchError(f"state dim {s.dim} != world dim {W2.dim}")
    if same_world(s.world, W2):
        return s.weights.tolist()
    q = s.weights @ transition_matrix(s.world, W2).rows
    return q.tolist()


def markov_update(s: DiagonalState, W2: World) -> DiagonalState:
    """
    The observer's information after the system is brought to W2.

    This is the only state-changing operation: there is no projection.
    """
    q = np.clip(np.asarray(outcome_distribution(s, W2)), 0.0, None)
    logger.debug(f"Markov update to a world of dim {W2.dim}")
    return DiagonalState(world=W2, weights=q / q.sum())


def markov_chain(s: DiagonalState, chain: Sequence[World]) -> list[DiagonalState]:
    """Successive markov_update through `chain`; returns every intermediate state."""
    states = []
    current = s
    for W in chain:
        current = markov_update(current, W)
        states.append(current)
    return states


def sandwich(ket: Ket, M: Operator) -> float:
    """<v|M|v> for a unit vector v, the direct vector-state value."""
    if ket.dim != M.dim:
        raise DimensionMismatchError(f"ket dim {ket.dim} != operator dim {M.dim}")
    if abs(ket.norm() - 1.0) > settings.EPS:
        raise NotNormalizedError(f"ket has norm {ket.norm()}, expected 1")
    v = ket.amplitudes
    return float(np.real(np.vdot(v, M.entries @ v)))
