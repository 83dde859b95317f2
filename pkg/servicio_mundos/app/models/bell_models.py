from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.config import settings
from .world_models import World

AXES = ("x", "y", "z")


class SpinDirectionBasis(BaseModel):
    """Eigenbasis (up, down) of the Pauli operator along `axis`."""

    model_config = ConfigDict(frozen=True)

    axis: Literal["x", "y", "z"]
    basis: World


class ChshReport(BaseModel):
    """CHSH sum <xx> + <xy> + <yx> - <yy> against the single-world bound."""

    model_config = ConfigDict(frozen=True)

    quantum_value: float
    classical_bound: float
    per_term: tuple[float, float, float, float] = Field(
        ..., description="Expectations of xx, xy, yx, yy in that order"
    )
    violated: bool

    @model_validator(mode="after")
    def check_violation_flag(self) -> "ChshReport":
        expected = self.quantum_value > self.classical_bound + settings.EPS
        if self.violated != expected:
            raise ValueError("violated must equal quantum_value > classical_bound + eps")
        return self
