"""Bell-state CHSH experiment and the four measurement worlds of its terms."""

import itertools

import numpy as np

from ..core.config import settings
from ..core.exceptions import DimensionMismatchError, NotNormalizedError
from ..core.logger import get_logger
from ..models.bell_models import AXES, ChshReport, SpinDirectionBasis
from ..models.hilbert_models import HermitianOperator, Ket
from ..models.observable_models import DiagonalObservable
from ..models.world_models import ProductWorld, World
from . import hilbert, observables, states, worlds

logger = get_logger("bell")

SQRT_HALF = 1 / np.sqrt(2)

_SPIN_VECTORS = {
    "x": [[SQRT_HALF, SQRT_HALF], [SQRT_HALF, -SQRT_HALF]],
    "y": [[SQRT_HALF, 1j * SQRT_HALF], [SQRT_HALF, -1j * SQRT_HALF]],
    "z": [[1, 0], [0, 1]],
}

_PAULI = {
    "x": [[0, 1], [1, 0]],
    "y": [[0, -1j], [1j, 0]],
    "z": [[1, 0], [0, -1]],
}

# (A axis, B axis, sign) in the order xx, xy, yx, yy
CHSH_TERMS = (("x", "x", 1), ("x", "y", 1), ("y", "x", 1), ("y", "y", -1))


def spin_basis(axis: str) -> SpinDirectionBasis:
    """(|up>, |down>) along `axis`."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got '{axis}'")
    return SpinDirectionBasis(axis=axis, basis=World(vectors=_SPIN_VECTORS[axis]))


def pauli(axis: str) -> HermitianOperator:
    """Exact Pauli matrix; materializing spin_observable(axis) agrees up to rounding."""
    if axis not in AXES:
        raise ValueError(f"axis must be one of {AXES}, got '{axis}'")
    return HermitianOperator(entries=_PAULI[axis])


def spin_observable(axis: str) -> DiagonalObservable:
    return DiagonalObservable(world=spin_basis(axis).basis, eigenvalues=[1.0, -1.0])


def bell_state(phase: float) -> Ket:
    """(|00> + e^{i phase} |11>) / sqrt(2)."""
    up, down = Ket.of(1, 0), Ket.of(0, 1)
    both_up = hilbert.tensor_ket(up, up).amplitudes
    both_down = hilbert.tensor_ket(down, down).amplitudes
    return Ket(amplitudes=SQRT_HALF * (both_up + np.exp(1j * phase) * both_down))


def bell_basis() -> World:
    """The four maximally entangled states; no vector of it is a product."""
    singlet_like = np.array([[0, 1, 1, 0], [0, 1, -1, 0]]) * SQRT_HALF
    rows = [bell_state(0.0).amplitudes, bell_state(np.pi).amplitudes, *singlet_like]
    return worlds.validate_world([Ket(amplitudes=row) for row in rows])


def _term_operator(axis_a: str, axis_b: str) -> HermitianOperator:
    return hilbert.tensor_op(pauli(axis_a), pauli(axis_b))


def classical_chsh_bound() -> float:
    """Maximum of the signed sum over all 16 assignments of +-1 values."""
    return float(max(_classical_values()))


def _classical_values() -> list[int]:
    return [
        ax * bx + ax * by + ay * bx - ay * by
        for ax, ay, bx, by in itertools.product((1, -1), repeat=4)
    ]


def classical_chsh_range() -> tuple[int, int]:
    values = _classical_values()
    return min(values), max(values)


def chsh_value(psi: Ket) -> ChshReport:
    """
    <psi| s_x s_x + s_x s_y + s_y s_x - s_y s_y |psi> as four sandwiches.

    For bell_state(theta) the value is 2 (cos theta + sin theta).
    """
    if psi.dim != 4:
        raise DimensionMismatchError(f"CHSH needs a two-qubit ket, got dim {psi.dim}")
    if abs(psi.norm() - 1.0) > settings.EPS:
        raise NotNormalizedError(f"ket has norm {psi.norm()}, expected 1")

    per_term = tuple(
        states.sandwich(psi, _term_operator(axis_a, axis_b)) for axis_a, axis_b, _ in CHSH_TERMS
    )
    value = float(sum(sign * t for (_, _, sign), t in zip(CHSH_TERMS, per_term, strict=True)))
    bound = classical_chsh_bound()
    logger.debug(f"CHSH value {value} against classical bound {bound}")
    return ChshReport(
        quantum_value=value,
        classical_bound=bound,
        per_term=per_term,
        violated=value > bound + settings.EPS,
    )


def four_worlds() -> list[ProductWorld]:
    """Product worlds x(x)x, x(x)y, y(x)x, y(x)y, one per CHSH term."""
    return [
        worlds.product_world(spin_basis(axis_a).basis, spin_basis(axis_b).basis)
        for axis_a, axis_b, _ in CHSH_TERMS
    ]


def chsh_term_observables() -> list[DiagonalObservable]:
    """sigma^A_a sigma^B_b, each relative to its own product world."""
    result = []
    for (axis_a, axis_b, _), pw in zip(CHSH_TERMS, four_worlds(), strict=True):
        oa = DiagonalObservable(world=pw.worldA, eigenvalues=[1.0, -1.0])
        ob = DiagonalObservable(world=pw.worldB, eigenvalues=[1.0, -1.0])
        result.append(observables.tensor_observable(oa, ob, pw))
    return result


def diagonality_table(tol: float | None = None) -> list[list[bool]]:
    """table[i][j]: term observable i is diagonal in world j."""
    operators = [observables.materialize(o) for o in chsh_term_observables()]
    pws = four_worlds()
    return [
        [observables.is_diagonal_in(M, pw.combined, tol) is not None for pw in pws]
        for M in operators
    ]


def phase_sweep(points: int) -> list[tuple[float, ChshReport]]:
    """CHSH reports for bell_state(theta), theta on an even grid over [0, pi/2]."""
    if points < 2:
        raise ValueError("a sweep needs at least two points")
    grid = np.linspace(0, np.pi / 2, points)
    return [(float(theta), chsh_value(bell_state(theta))) for theta in grid]
