"""Worlds: ordered orthonormal bases, generators and product worlds."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from ..core.config import settings
from ..core.exceptions import (
    DimensionMismatchError,
    IncompleteBasisError,
    NotOrthonormalError,
)
from .hilbert_models import HermitianOperator, Ket, to_complex_array, to_pairs


def gram_deviation(rows: np.ndarray) -> float:
    """Largest entry of |G - I| for the Gram matrix of the given rows."""
    gram = rows.conj() @ rows.T
    return float(np.max(np.abs(gram - np.eye(rows.shape[0]))))


class World(BaseModel):
    """
    Ordered orthonormal basis (e_n) of C^dim.

    `vectors` holds one basis vector per row, in index order.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vectors: np.ndarray

    @field_validator("vectors", mode="before")
    @classmethod
    def coerce_vectors(cls, v: Any) -> np.ndarray:
        return to_complex_array(v, ndim=2)

    @field_serializer("vectors")
    def serialize_vectors(self, v: np.ndarray) -> list:
        return to_pairs(v)

    @model_validator(mode="after")
    def check_orthonormal(self) -> "World":
        count, dim = self.vectors.shape
        if dim < 2:
            raise DimensionMismatchError(f"a world needs dimension >= 2, got {dim}")
        if count < dim:
            raise IncompleteBasisError(
                f"basis has {count} vectors for dimension {dim}",
                details={"count": count, "dim": dim},
            )
        if count > dim:
            raise NotOrthonormalError(
                f"{count} vectors cannot be orthonormal in dimension {dim}",
                details={"count": count, "dim": dim},
            )
        deviation = gram_deviation(self.vectors)
        if deviation > settings.EPS:
            raise NotOrthonormalError(
                f"basis is not orthonormal (max Gram deviation {deviation:.3e})",
                details={"max_deviation": deviation},
            )
        return self

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def columns(self) -> np.ndarray:
        """Matrix whose n-th column is e_n (change of basis into the world)."""
        return self.vectors.T

    @property
    def basis(self) -> tuple[Ket, ...]:
        return tuple(Ket(amplitudes=row) for row in self.vectors)

    def ket(self, n: int) -> Ket:
        return Ket(amplitudes=self.vectors[n])


class EvolutionGenerator(BaseModel):
    """Self-adjoint A with W_t = exp(i t A) W (units of inverse time, hbar = 1)."""

    model_config = ConfigDict(frozen=True)

    A: HermitianOperator

    @property
    def dim(self) -> int:
        return self.A.dim


class ProductWorld(BaseModel):
    """World of a composite system with basis e^A_n (x) e^B_k, index n*dimB + k."""

    model_config = ConfigDict(frozen=True)

    worldA: World
    worldB: World
    combined: World

    @model_validator(mode="after")
    def check_factorization(self) -> "ProductWorld":
        expected = self.worldA.dim * self.worldB.dim
        if self.combined.dim != expected:
            raise DimensionMismatchError(
                f"combined dim {self.combined.dim} != {self.worldA.dim} x {self.worldB.dim}"
            )
        return self
