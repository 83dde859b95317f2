"""Finite-dimensional complex linear algebra shared by every other service."""

import numpy as np

from ..core.config import settings
from ..core.exceptions import (
    DimensionMismatchError,
    LinearDependenceError,
    NonFiniteError,
    NotHermitianError,
)
from ..core.logger import get_logger
from ..models.hilbert_models import HermitianOperator, Ket, Operator, UnitaryOperator

logger = get_logger("hilbert")


def _check_same_dim(a: int, b: int, what: str) -> None:
    if a != b:
        raise DimensionMismatchError(f"{what}: dimension {a} != {b}", details={"dims": [a, b]})


def inner(a: Ket, b: Ket) -> complex:
    """<a|b>, conjugate-linear in `a`."""
    _check_same_dim(a.dim, b.dim, "inner product")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def apply(M: Operator, a: Ket) -> Ket:
    _check_same_dim(M.dim, a.dim, "operator application")
    return Ket(amplitudes=M.entries @ a.amplitudes)


def dagger(M: Operator) -> Operator:
    return Operator(entries=M.entries.conj().T)


def commutator(M: Operator, N: Operator) -> Operator:
    _check_same_dim(M.dim, N.dim, "commutator")
    return Operator(entries=M.entries @ N.entries - N.entries @ M.entries)


def operator_norm(M: Operator | np.ndarray) -> float:
    """
    Largest singular value, computed as sqrt of the top eigenvalue of M^dagger M.
    """
    entries = M.entries if isinstance(M, Operator) else np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(entries)):
        raise NonFiniteError("operator_norm of a matrix with non-finite entries")
    gram = entries.conj().T @ entries
    top = float(np.linalg.eigvalsh(gram)[-1])
    return float(np.sqrt(max(top, 0.0)))


def is_hermitian(M: Operator, eps: float | None = None) -> bool:
    eps = settings.EPS if eps is None else eps
    return bool(np.max(np.abs(M.entries - M.entries.conj().T)) <= eps)


def is_unitary(M: Operator, eps: float | None = None) -> bool:
    eps = settings.EPS if eps is None else eps
    product = M.entries.conj().T @ M.entries
    return bool(np.max(np.abs(product - np.eye(M.dim))) <= eps)


def as_hermitian(M: Operator) -> HermitianOperator:
    if isinstance(M, HermitianOperator):
        return M
    return HermitianOperator(entries=M.entries)


def as_unitary(M: Operator) -> UnitaryOperator:
    if isinstance(M, UnitaryOperator):
        return M
    return UnitaryOperator(entries=M.entries)


def mat_exp_hermitian(A: Operator, t: float) -> UnitaryOperator:
    """
    exp(i t A) through the spectral decomposition A = V diag(w) V^dagger.

    Only self-adjoint generators are accepted.
    """
    if not is_hermitian(A):
        raise NotHermitianError("mat_exp_hermitian needs a Hermitian generator")
    w, V = np.linalg.eigh(A.entries)
    U = (V * np.exp(1j * t * w)) @ V.conj().T
    return UnitaryOperator(entries=U)


def tensor_op(M: Operator, N: Operator) -> Operator:
    """Kronecker product; basis index (n, k) maps to n * N.dim + k."""
    product = np.kron(M.entries, N.entries)
    if isinstance(M, HermitianOperator) and isinstance(N, HermitianOperator):
        return HermitianOperator(entries=product)
    return Operator(entries=product)


def tensor_ket(a: Ket, b: Ket) -> Ket:
    return Ket(amplitudes=np.kron(a.amplitudes, b.amplitudes))


def gram_schmidt(vectors: np.ndarray, passes: int = 2) -> np.ndarray:
    """
    Orthonormalizes the rows of `vectors` in order.

    Each vector is projected against the accepted ones `passes` times; the
    second pass restores orthogonality lost to rounding.
    """
    rows = np.array(vectors, dtype=complex)
    out = np.zeros_like(rows)
    for i in range(rows.shape[0]):
        v = rows[i]
        for _ in range(passes):
            for j in range(i):
                v = v - np.vdot(out[j], v) * out[j]
        norm = np.linalg.norm(v)
        if norm < settings.EPS:
            raise LinearDependenceError(
                f"vector {i} is linearly dependent on the previous ones",
                details={"index": i},
            )
        out[i] = v / norm
    return out


def random_hermitian(dim: int, seed: int, scale: float = 1.0) -> HermitianOperator:
    """Seeded (G + G^dagger)/2 with complex Gaussian G."""
    rng = np.random.default_rng(seed)
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    A = scale * (G + G.conj().T) / 2
    logger.debug(f"random_hermitian dim={dim} seed={seed} scale={scale}")
    return HermitianOperator(entries=A)
