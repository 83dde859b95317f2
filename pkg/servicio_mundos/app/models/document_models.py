"""On-disk document layouts. Complex numbers are stored as [re, im] pairs."""

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.exceptions import DimensionMismatchError


class WorldDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(..., ge=2)
    basis: list[list[tuple[float, float]]] = Field(
        ..., description="One row per basis vector, each entry an (re, im) pair"
    )

    @model_validator(mode="after")
    def check_rows(self) -> "WorldDocument":
        if any(len(row) != self.dim for row in self.basis):
            raise DimensionMismatchError(f"every basis row must have {self.dim} entries")
        return self


class ObservableDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    world_file: str = Field(..., description="Path of the world document, relative to this one")
    eigenvalues: list[float]


class StateDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    world_file: str = Field(..., description="Path of the world document, relative to this one")
    weights: list[float]
