"""World mechanics: validation, identification up to phases, evolution, products."""

import itertools
from collections.abc import Sequence

import numpy as np

from ..core.config import settings
from ..core.exceptions import (
    DegenerateSpectrumError,
    DimensionMismatchError,
    IncompleteBasisError,
    NotNormalizedError,
)
from ..core.logger import get_logger
from ..models.hilbert_models import HermitianOperator, Ket, UnitaryOperator
from ..models.world_models import EvolutionGenerator, ProductWorld, World
from . import hilbert

logger = get_logger("worlds")


def validate_world(basis: Sequence[Ket]) -> World:
    """
    Builds a World from an ordered list of kets.

    Raises DimensionMismatchError for kets of unequal dimension,
    IncompleteBasisError for fewer kets than the dimension and
    NotOrthonormalError (with the max Gram deviation) otherwise.
    """
    if not basis:
        raise IncompleteBasisError("empty basis")
    dims = {k.dim for k in basis}
    if len(dims) != 1:
        raise DimensionMismatchError(f"basis kets have mixed dimensions {sorted(dims)}")
    return World(vectors=np.stack([k.amplitudes for k in basis]))


def standard_world(dim: int) -> World:
    return World(vectors=np.eye(dim, dtype=complex))


def fourier_world(dim: int) -> World:
    """Discrete Fourier basis; for dim 2 this is the Hadamard basis."""
    n = np.arange(dim)
    vectors = np.exp(2j * np.pi * np.outer(n, n) / dim) / np.sqrt(dim)
    return World(vectors=vectors)


def random_world(dim: int, seed: int) -> World:
    """Seeded complex Gaussian rows, orthonormalized by Gram-Schmidt."""
    if dim < 2:
        raise DimensionMismatchError(f"random_world needs dim >= 2, got {dim}")
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return World(vectors=hilbert.gram_schmidt(raw))


def named_world(name: str, dim: int) -> World:
    """'standard' | 'fourier' | 'hadamard' | 'random:<seed>'."""
    key, _, arg = name.strip().partition(":")
    key = key.lower()
    if key == "standard":
        return standard_world(dim)
    if key == "fourier":
        return fourier_world(dim)
    if key == "hadamard":
        if dim != 2:
            raise DimensionMismatchError(f"the Hadamard world has dim 2, requested {dim}")
        return fourier_world(2)
    if key == "random" and arg:
        return random_world(dim, int(arg))
    raise ValueError(f"unknown world name '{name}'")


def _phase(c: complex) -> complex:
    magnitude = abs(c)
    return c / magnitude if magnitude > 0 else 1.0 + 0j


def worlds_equal(W: World, W2: World, eps: float | None = None) -> bool:
    """
    True iff e_n = alpha_n e'_n with |alpha_n| = 1 for every n (same order).

    alpha_n is taken as the phase of <e'_n|e_n>.
    """
    if W.dim != W2.dim:
        raise DimensionMismatchError(f"cannot compare worlds of dim {W.dim} and {W2.dim}")
    eps = settings.EPS if eps is None else eps
    pairs = zip(W.basis, W2.basis, strict=True)
    alphas = np.array([_phase(hilbert.inner(b, a)) for a, b in pairs])
    residual = W.vectors - alphas[:, None] * W2.vectors
    return bool(np.max(np.linalg.norm(residual, axis=1)) <= eps)


def worlds_equal_up_to_permutation(W: World, W2: World, eps: float | None = None) -> bool:
    """Order-insensitive identification; not used by the core semantics."""
    if W.dim != W2.dim:
        raise DimensionMismatchError(f"cannot compare worlds of dim {W.dim} and {W2.dim}")
    eps = settings.EPS if eps is None else eps
    overlaps = np.abs(W2.vectors.conj() @ W.vectors.T)
    # each |<e'_k|e_n>| is 1 for its partner and 0 otherwise
    partners = np.argmax(overlaps, axis=0)
    if len(set(partners.tolist())) != W.dim:
        return False
    reordered = World(vectors=W2.vectors[partners])
    return worlds_equal(W, reordered, eps)


def evolve_world(W: World, gen: EvolutionGenerator, t: float) -> World:
    """W_t = U_t W with U_t = exp(i t A); negative t runs the evolution backward."""
    if gen.dim != W.dim:
        raise DimensionMismatchError(f"generator dim {gen.dim} != world dim {W.dim}")
    U = hilbert.mat_exp_hermitian(gen.A, t)
    evolved = (U.entries @ W.columns).T
    logger.debug(f"Evolved world of dim {W.dim} for t={t}")
    return validate_world([Ket(amplitudes=row) for row in evolved])


def connecting_unitary(W: World, W2: World) -> UnitaryOperator:
    """U = sum_n |e'_n><e_n|, the unitary with U e_n = e'_n."""
    if W.dim != W2.dim:
        raise DimensionMismatchError(f"cannot connect worlds of dim {W.dim} and {W2.dim}")
    return UnitaryOperator(entries=W2.columns @ W.vectors.conj())


def product_world(WA: World, WB: World) -> ProductWorld:
    vectors = np.stack(
        [np.kron(a, b) for a, b in itertools.product(WA.vectors, WB.vectors)]
    )
    return ProductWorld(worldA=WA, worldB=WB, combined=World(vectors=vectors))


def schmidt_coefficients(ket: Ket | np.ndarray, dimA: int, dimB: int) -> np.ndarray:
    """Singular values of the ket reshaped to dimA x dimB, in decreasing order."""
    amplitudes = ket.amplitudes if isinstance(ket, Ket) else np.asarray(ket, dtype=complex)
    if amplitudes.shape[0] != dimA * dimB:
        raise DimensionMismatchError(
            f"ket of dim {amplitudes.shape[0]} does not factor as {dimA} x {dimB}"
        )
    return np.linalg.svd(amplitudes.reshape(dimA, dimB), compute_uv=False)


def is_product_world(W: World, dimA: int, dimB: int, tol: float | None = None) -> bool:
    """True iff every basis vector has Schmidt rank one."""
    if W.dim != dimA * dimB:
        raise DimensionMismatchError(f"world of dim {W.dim} does not factor as {dimA} x {dimB}")
    tol = settings.SCHMIDT_TOL if tol is None else tol
    if min(dimA, dimB) < 2:
        return True
    for row in W.vectors:
        if schmidt_coefficients(row, dimA, dimB)[1] > tol:
            return False
    return True


def world_containing(ket: Ket) -> World:
    """A world whose first basis vector is `ket`, completed with the standard basis."""
    if abs(ket.norm() - 1.0) > settings.EPS:
        raise NotNormalizedError(f"ket has norm {ket.norm()}, expected 1")
    # dropping the standard vector the ket leans on most keeps the rest independent
    dropped = int(np.argmax(np.abs(ket.amplitudes)))
    others = np.delete(np.eye(ket.dim, dtype=complex), dropped, axis=0)
    return World(vectors=hilbert.gram_schmidt(np.vstack([ket.amplitudes, others])))


def eigenworld(M: HermitianOperator, gap: float | None = None) -> World:
    """
    Eigenbasis of an operator with simple spectrum, in increasing eigenvalue order.

    A degenerate spectrum does not single out one world.
    """
    gap = settings.DIAGONAL_TOL if gap is None else gap
    w, V = np.linalg.eigh(M.entries)
    if np.any(np.diff(w) <= gap):
        raise DegenerateSpectrumError(
            "operator has repeated eigenvalues", details={"eigenvalues": w.tolist()}
        )
    return World(vectors=V.T)
