"""Bounded sequences on which every Banach limit takes the same value."""

import math
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..core.exceptions import InvalidSequenceError


def _check_finite(values: tuple[float, ...]) -> tuple[float, ...]:
    if not all(math.isfinite(v) for v in values):
        raise InvalidSequenceError("sequence terms must be finite reals")
    return values


class PeriodicTail(BaseModel):
    """Tail repeating `values` forever."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["periodic"] = "periodic"
    values: tuple[float, ...]

    @field_validator("values")
    @classmethod
    def validate_values(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        if not v:
            raise InvalidSequenceError("a periodic tail needs at least one value")
        return _check_finite(v)


class ConvergentTail(BaseModel):
    """Tail converging to `limit`; the approach path is irrelevant to any Banach limit."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["convergent"] = "convergent"
    limit: float

    @field_validator("limit")
    @classmethod
    def validate_limit(cls, v: float) -> float:
        return _check_finite((v,))[0]


Tail = Annotated[PeriodicTail | ConvergentTail, Field(discriminator="kind")]


class AlmostConvergentSequence(BaseModel):
    """x = (prefix..., tail...) with a periodic or convergent tail."""

    model_config = ConfigDict(frozen=True)

    prefix: tuple[float, ...] = ()
    tail: Tail

    @field_validator("prefix")
    @classmethod
    def validate_prefix(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        return _check_finite(v)


class SequenceObservable(BaseModel):
    """O = sum_n lambda_n |e_n><e_n| in a symbolic world indexed by the naturals."""

    model_config = ConfigDict(frozen=True)

    world: str = Field("W", description="Label of the idealized infinite world")
    eigenvalues: AlmostConvergentSequence
