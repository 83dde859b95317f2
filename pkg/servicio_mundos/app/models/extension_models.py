import math
from typing import Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)

from ..core.config import settings
from ..core.exceptions import DimensionMismatchError
from .hilbert_models import HermitianOperator
from .state_models import DiagonalState


class EnvelopeProblem(BaseModel):
    """
    Upper/lower envelope problem for extending `state` to the target operator.

    Eigenvalue vectors lambda are searched in the box [-box_radius, box_radius]^dim.
    """

    model_config = ConfigDict(frozen=True)

    state: DiagonalState
    target: HermitianOperator
    box_radius: float = Field(
        default_factory=lambda: settings.BOX_RADIUS, gt=0, description="Search bound R"
    )
    tol: float = Field(
        default_factory=lambda: settings.SOLVER_TOL, gt=0, description="Objective tolerance"
    )
    max_iter: int = Field(
        default_factory=lambda: settings.SOLVER_MAX_ITER,
        ge=1,
        description="Iteration budget across solver stages",
    )

    @model_validator(mode="after")
    def check_dims(self) -> "EnvelopeProblem":
        if self.state.dim != self.target.dim:
            raise DimensionMismatchError(
                f"state dim {self.state.dim} != target dim {self.target.dim}"
            )
        return self

    @property
    def dim(self) -> int:
        return self.state.dim


def _vector(v: Any) -> np.ndarray:
    arr = np.array(v, dtype=float)
    arr.setflags(write=False)
    return arr


class EnvelopeResult(BaseModel):
    """
    Solver output: envelope values, their arguments and diagnostics.

    upper_error and lower_error bound how far each reported value sits from the
    box optimum; they come from a dual certificate and are None without one.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    upper: float
    lower: float
    gap: float
    arg_upper: np.ndarray
    arg_lower: np.ndarray
    iterations: int = Field(ge=0)
    converged: bool
    upper_error: float | None = None
    lower_error: float | None = None

    @field_validator("arg_upper", "arg_lower", mode="before")
    @classmethod
    def coerce_args(cls, v: Any) -> np.ndarray:
        return _vector(v)

    @model_validator(mode="after")
    def check_envelopes(self) -> "EnvelopeResult":
        # both values are exact objectives at box points, so weak duality orders them
        if not math.isclose(self.gap, self.upper - self.lower, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(f"gap {self.gap} != upper - lower = {self.upper - self.lower}")
        if self.gap < -settings.EPS:
            raise ValueError(f"upper {self.upper} lies below lower {self.lower}")
        if self.arg_upper.shape != self.arg_lower.shape:
            raise DimensionMismatchError(
                f"arguments of shape {self.arg_upper.shape} and {self.arg_lower.shape}"
            )
        for error in (self.upper_error, self.lower_error):
            if error is not None and error < -settings.EPS:
                raise ValueError(f"certified error {error} is negative")
        return self

    @field_serializer("arg_upper", "arg_lower")
    def serialize_args(self, v: np.ndarray) -> list[float]:
        return v.tolist()
