"""
Banach limits on almost-convergent sequences and the states they define.

Outside the representable class (finite prefix + periodic or convergent tail)
different Banach limits disagree, so no value is computed there.
"""

import math
from collections.abc import Sequence

from ..core.logger import get_logger
from ..models.sequence_models import (
    AlmostConvergentSequence,
    ConvergentTail,
    PeriodicTail,
    SequenceObservable,
)

logger = get_logger("banach")


def periodic(values: Sequence[float], prefix: Sequence[float] = ()) -> AlmostConvergentSequence:
    return AlmostConvergentSequence(prefix=tuple(prefix), tail=PeriodicTail(values=tuple(values)))


def convergent(limit: float, prefix: Sequence[float] = ()) -> AlmostConvergentSequence:
    return AlmostConvergentSequence(prefix=tuple(prefix), tail=ConvergentTail(limit=limit))


def banach_limit(x: AlmostConvergentSequence) -> float:
    """Mean of one period for periodic tails, the limit for convergent ones."""
    if isinstance(x.tail, PeriodicTail):
        return math.fsum(x.tail.values) / len(x.tail.values)
    return x.tail.limit


def shift(x: AlmostConvergentSequence) -> AlmostConvergentSequence:
    """(Sx)_1 = 0, (Sx)_{n+1} = x_n."""
    return AlmostConvergentSequence(prefix=(0.0, *x.prefix), tail=x.tail)


def term(x: AlmostConvergentSequence, n: int) -> float:
    """x_n for 0-based n; a convergent tail is read as its limit."""
    if n < len(x.prefix):
        return x.prefix[n]
    if isinstance(x.tail, PeriodicTail):
        values = x.tail.values
        return values[(n - len(x.prefix)) % len(values)]
    return x.tail.limit


def head(x: AlmostConvergentSequence, count: int) -> list[float]:
    return [term(x, n) for n in range(count)]


def _unroll(x: AlmostConvergentSequence, length: int) -> AlmostConvergentSequence:
    """Same sequence with its prefix extended to `length` terms."""
    extra = [term(x, n) for n in range(len(x.prefix), length)]
    if not extra:
        return x
    tail = x.tail
    if isinstance(tail, PeriodicTail):
        offset = len(extra) % len(tail.values)
        tail = PeriodicTail(values=tail.values[offset:] + tail.values[:offset])
    return AlmostConvergentSequence(prefix=(*x.prefix, *extra), tail=tail)


def _cycle(values: tuple[float, ...], length: int) -> list[float]:
    return [values[i % len(values)] for i in range(length)]


def linear_combination(
    a: float, x: AlmostConvergentSequence, b: float, y: AlmostConvergentSequence
) -> AlmostConvergentSequence:
    """
    Exact representation of a*x + b*y.

    Prefixes are aligned by unrolling the shorter tail; periods combine over
    their lcm. A convergent tail adds its limit to every period entry.
    """
    length = max(len(x.prefix), len(y.prefix))
    x, y = _unroll(x, length), _unroll(y, length)
    prefix = tuple(a * u + b * v for u, v in zip(x.prefix, y.prefix, strict=True))

    tx, ty = x.tail, y.tail
    if isinstance(tx, ConvergentTail) and isinstance(ty, ConvergentTail):
        return AlmostConvergentSequence(
            prefix=prefix, tail=ConvergentTail(limit=a * tx.limit + b * ty.limit)
        )

    period = math.lcm(
        len(tx.values) if isinstance(tx, PeriodicTail) else 1,
        len(ty.values) if isinstance(ty, PeriodicTail) else 1,
    )
    xs = _cycle(tx.values, period) if isinstance(tx, PeriodicTail) else [tx.limit] * period
    ys = _cycle(ty.values, period) if isinstance(ty, PeriodicTail) else [ty.limit] * period
    values = tuple(a * u + b * v for u, v in zip(xs, ys, strict=True))
    return AlmostConvergentSequence(prefix=prefix, tail=PeriodicTail(values=values))


def is_nonnegative(x: AlmostConvergentSequence) -> bool:
    if any(v < 0 for v in x.prefix):
        return False
    if isinstance(x.tail, PeriodicTail):
        return all(v >= 0 for v in x.tail.values)
    return x.tail.limit >= 0


def cesaro_mean(x: AlmostConvergentSequence, count: int) -> float:
    """Average of the first `count` terms; tends to banach_limit(x)."""
    if count < 1:
        raise ValueError("cesaro_mean needs at least one term")
    return math.fsum(head(x, count)) / count


def topo_state_expectation(obs: SequenceObservable) -> float:
    """omega_L(O) = L((lambda_n))."""
    value = banach_limit(obs.eigenvalues)
    logger.debug(f"topology-compact expectation in world {obs.world}: {value}")
    return value


def annihilates_compact(obs: SequenceObservable) -> bool:
    """True for the representable compact case: eigenvalues converging to 0."""
    tail = obs.eigenvalues.tail
    return (
        isinstance(tail, ConvergentTail)
        and tail.limit == 0.0
        and topo_state_expectation(obs) == 0.0
    )


def parse_tail(text: str) -> PeriodicTail | ConvergentTail:
    """'periodic:2,4,6' or 'convergent:3'."""
    kind, _, payload = text.strip().partition(":")
    kind = kind.lower()
    if kind == "periodic":
        return PeriodicTail(values=tuple(_parse_floats(payload)))
    if kind == "convergent":
        return ConvergentTail(limit=float(payload))
    raise ValueError(f"unknown tail kind '{kind}', expected periodic or convergent")


def _parse_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def parse_sequence(prefix: str, tail: str) -> AlmostConvergentSequence:
    return AlmostConvergentSequence(prefix=tuple(_parse_floats(prefix)), tail=parse_tail(tail))
