from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from ..core.exceptions import DimensionMismatchError, NonFiniteError
from .world_models import World


class DiagonalObservable(BaseModel):
    """
    Observable relative to a world: O = sum_n lambda_n |e_n><e_n|.

    Never stored as a bare matrix; the world it is diagonal in is part of it.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    world: World
    eigenvalues: np.ndarray

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def coerce_eigenvalues(cls, v: Any) -> np.ndarray:
        arr = np.array(v, dtype=float)
        if arr.ndim != 1:
            raise ValueError(f"eigenvalues must be a flat list, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteError("eigenvalues must be finite reals")
        arr.setflags(write=False)
        return arr

    @field_serializer("eigenvalues")
    def serialize_eigenvalues(self, v: np.ndarray) -> list[float]:
        return v.tolist()

    @model_validator(mode="after")
    def check_length(self) -> "DiagonalObservable":
        if self.eigenvalues.shape[0] != self.world.dim:
            raise DimensionMismatchError(
                f"{self.eigenvalues.shape[0]} eigenvalues for a world of dim {self.world.dim}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.world.dim
