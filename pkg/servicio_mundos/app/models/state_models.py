from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from ..core.config import settings
from ..core.exceptions import DimensionMismatchError, InvalidWeightsError, NonFiniteError
from .world_models import World


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


class DiagonalState(BaseModel):
    """State on the diagonal algebra of a world: T -> sum_n p_n <e_n|T|e_n>."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    world: World
    weights: np.ndarray

    @field_validator("weights", mode="before")
    @classmethod
    def coerce_weights(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"weights must be a flat list, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("weights must be finite reals")
        return _read_only(arr)

    @field_serializer("weights")
    def serialize_weights(self, v: np.ndarray) -> list[float]:
        return v.tolist()

    @model_validator(mode="after")
    def check_simplex(self) -> "DiagonalState":
        if self.weights.shape[0] != self.world.dim:
            raise DimensionMismatchError(
                f"{self.weights.shape[0]} weights for a world of dim {self.world.dim}"
            )
        if np.min(self.weights) < -settings.EPS:
            raise InvalidWeightsError(
                "weights must be nonnegative", details={"min_weight": float(np.min(self.weights))}
            )
        total = float(np.sum(self.weights))
        if abs(total - 1.0) > settings.EPS:
            raise InvalidWeightsError(f"weights sum to {total}, not 1", details={"sum": total})
        return self

    @property
    def dim(self) -> int:
        return self.world.dim


class TransitionMatrix(BaseModel):
    """T_nk = |<e_n|e'_k>|^2 between two worlds; unistochastic."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: np.ndarray

    @field_validator("rows", mode="before")
    @classmethod
    def coerce_rows(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"transition matrix must be square, got shape {arr.shape}")
        return _read_only(arr)

    @field_serializer("rows")
    def serialize_rows(self, v: np.ndarray) -> list[list[float]]:
        return v.tolist()

    @model_validator(mode="after")
    def check_doubly_stochastic(self) -> "TransitionMatrix":
        eps = settings.EPS
        if np.min(self.rows) < -eps or np.max(self.rows) > 1 + eps:
            raise InvalidWeightsError("transition entries must lie in [0, 1]")
        row_dev = float(np.max(np.abs(self.rows.sum(axis=1) - 1.0)))
        col_dev = float(np.max(np.abs(self.rows.sum(axis=0) - 1.0)))
        if max(row_dev, col_dev) > eps:
            raise InvalidWeightsError(
                "transition matrix is not doubly stochastic",
                details={"row_deviation": row_dev, "column_deviation": col_dev},
            )
        return self

    @property
    def dim(self) -> int:
        return int(self.rows.shape[0])
