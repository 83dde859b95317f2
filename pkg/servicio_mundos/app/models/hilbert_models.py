"""Vectors and operators of a finite-dimensional complex Hilbert space."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from ..core.config import settings
from ..core.exceptions import NonFiniteError, NotHermitianError, NotUnitaryError


def to_complex_array(value: Any, ndim: int) -> np.ndarray:
    """
    Converts a nested list or array into a read-only complex array.

    Real input with one extra trailing axis of length 2 is read as [re, im]
    pairs, which is how documents store complex numbers.
    """
    arr = np.asarray(value)
    if arr.ndim == ndim + 1 and arr.shape[-1] == 2 and not np.iscomplexobj(arr):
        arr = arr[..., 0] + 1j * arr[..., 1]
    arr = np.array(arr, dtype=complex)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("array holds non-finite entries")
    arr.setflags(write=False)
    return arr


def to_pairs(arr: np.ndarray) -> list:
    """Complex array -> nested lists of [re, im] pairs."""
    stacked = np.stack([arr.real, arr.imag], axis=-1)
    return stacked.tolist()


class Ket(BaseModel):
    """Column vector of probability amplitudes."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def coerce_amplitudes(cls, v: Any) -> np.ndarray:
        arr = to_complex_array(v, ndim=1)
        if arr.size == 0:
            raise ValueError("a ket needs at least one amplitude")
        return arr

    @field_serializer("amplitudes")
    def serialize_amplitudes(self, v: np.ndarray) -> list:
        return to_pairs(v)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @classmethod
    def of(cls, *amplitudes: complex) -> "Ket":
        return cls(amplitudes=list(amplitudes))


class Operator(BaseModel):
    """Square complex matrix acting on a dim-dimensional space."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def coerce_entries(cls, v: Any) -> np.ndarray:
        arr = to_complex_array(v, ndim=2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"operator must be square and non-empty, got shape {arr.shape}")
        return arr

    @field_serializer("entries")
    def serialize_entries(self, v: np.ndarray) -> list:
        return to_pairs(v)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


class HermitianOperator(Operator):
    """Self-adjoint operator; generator of world evolution."""

    @model_validator(mode="after")
    def check_hermitian(self) -> "HermitianOperator":
        deviation = float(np.max(np.abs(self.entries - self.entries.conj().T)))
        if deviation > settings.EPS:
            raise NotHermitianError(
                f"operator is not Hermitian (deviation {deviation:.3e})",
                details={"deviation": deviation},
            )
        return self


class UnitaryOperator(Operator):
    """Operator whose adjoint is its inverse."""

    @model_validator(mode="after")
    def check_unitary(self) -> "UnitaryOperator":
        product = self.entries.conj().T @ self.entries
        deviation = float(np.max(np.abs(product - np.eye(self.dim))))
        if deviation > settings.EPS:
            raise NotUnitaryError(
                f"operator is not unitary (deviation {deviation:.3e})",
                details={"deviation": deviation},
            )
        return self
