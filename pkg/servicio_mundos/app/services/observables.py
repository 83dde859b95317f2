"""Observables relative to a world."""

from collections.abc import Sequence

import numpy as np

from ..core.config import settings
from ..core.exceptions import DimensionMismatchError, WorldMismatchError
from ..core.logger import get_logger
from ..models.hilbert_models import HermitianOperator, Operator
from ..models.observable_models import DiagonalObservable
from ..models.world_models import ProductWorld, World
from . import hilbert

logger = get_logger("observables")


def same_world(W: World, W2: World, eps: float | None = None) -> bool:
    """Identity, or numerically identical basis vectors (no phase freedom)."""
    if W is W2:
        return True
    if W.dim != W2.dim:
        return False
    eps = settings.EPS if eps is None else eps
    return bool(np.max(np.abs(W.vectors - W2.vectors)) <= eps)


def diagonal_observable(world: World, eigenvalues: Sequence[float]) -> DiagonalObservable:
    return DiagonalObservable(world=world, eigenvalues=list(eigenvalues))


def materialize(obs: DiagonalObservable) -> HermitianOperator:
    """sum_n lambda_n |e_n><e_n| as a matrix in the standard basis."""
    E = obs.world.columns
    M = (E * obs.eigenvalues) @ E.conj().T
    # symmetrize away rounding so the Hermitian check is exact
    return HermitianOperator(entries=(M + M.conj().T) / 2)


def in_world_coordinates(M: Operator, W: World) -> np.ndarray:
    """Matrix elements <e_j|M|e_k>."""
    if M.dim != W.dim:
        raise DimensionMismatchError(f"operator dim {M.dim} != world dim {W.dim}")
    return W.vectors.conj() @ M.entries @ W.columns


def is_diagonal_in(M: Operator, W: World, tol: float | None = None) -> list[float] | None:
    """
    Eigenvalues <e_n|M|e_n> when every off-diagonal element in W is within tol,
    otherwise None.
    """
    M = hilbert.as_hermitian(M)
    tol = settings.DIAGONAL_TOL if tol is None else tol
    local = in_world_coordinates(M, W)
    off_diagonal = local - np.diag(np.diag(local))
    leak = float(np.max(np.abs(off_diagonal))) if W.dim > 1 else 0.0
    if leak > tol:
        logger.debug(f"operator not diagonal in world (max off-diagonal {leak:.3e})")
        return None
    return np.real(np.diag(local)).tolist()


def observable_from_operator(
    M: Operator, W: World, tol: float | None = None
) -> DiagonalObservable:
    eigenvalues = is_diagonal_in(M, W, tol)
    if eigenvalues is None:
        raise WorldMismatchError("operator is not an observable relative to this world")
    return DiagonalObservable(world=W, eigenvalues=eigenvalues)


def tensor_observable(
    oa: DiagonalObservable, ob: DiagonalObservable, pw: ProductWorld
) -> DiagonalObservable:
    """O_A (x) O_B in the combined world, eigenvalues lambda^A_n * lambda^B_k."""
    if not same_world(oa.world, pw.worldA):
        raise WorldMismatchError("first factor is not relative to the product's world A")
    if not same_world(ob.world, pw.worldB):
        raise WorldMismatchError("second factor is not relative to the product's world B")
    eigenvalues = np.outer(oa.eigenvalues, ob.eigenvalues).ravel()
    return DiagonalObservable(world=pw.combined, eigenvalues=eigenvalues)


def commutator_norm(o1: DiagonalObservable, o2: DiagonalObservable) -> float:
    return hilbert.operator_norm(hilbert.commutator(materialize(o1), materialize(o2)))
