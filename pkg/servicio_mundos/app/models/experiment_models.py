import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

Command = Literal["evolve", "born", "markov", "chsh", "extend", "banach"]


def _split_commas(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class CommandParameters(BaseModel):
    """Unknown keys and non-finite numbers are rejected for every command."""

    model_config = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class EvolveParameters(CommandParameters):
    dim: int | None = Field(None, ge=2, description="Dimension of the random world (default 2)")
    seed: int = Field(0, description="Seed of the initial random world")
    generator_seed: int = Field(1, description="Seed of the random Hermitian generator")
    time: float = Field(1.0, description="Evolution time t in W_t = exp(i t A) W")
    split: float | None = Field(
        None, description="Check W_t against evolving by `split` and then by t - split"
    )
    world_file: str | None = Field(None, description="Initial world document instead of a seed")
    save: str | None = Field(None, description="Write the evolved world to this document")


class BornParameters(CommandParameters):
    dim: int = Field(2, ge=2)
    seed: int = Field(0, description="Seed of the state's world")
    target_seed: int = Field(1, description="Seed of the observable's world")
    index: int = Field(0, ge=0, description="Basis index of the vector state")
    eigenvalues: list[float] | None = Field(
        None, description="Observable eigenvalues, comma separated (default 0..dim-1)"
    )

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def split_eigenvalues(cls, v: Any) -> Any:
        return _split_commas(v)


class MarkovParameters(CommandParameters):
    dim: int = Field(2, ge=2)
    chain: list[str] = Field(
        default_factory=lambda: ["hadamard", "standard"],
        min_length=1,
        description="World names the system is brought to, in order",
    )
    state: str = Field("pure:0", description="Initial state in the standard world")

    @field_validator("chain", mode="before")
    @classmethod
    def split_chain(cls, v: Any) -> Any:
        return _split_commas(v)


class ChshParameters(CommandParameters):
    phase: float = Field(math.pi / 4, description="theta in (|00> + e^{i theta}|11>)/sqrt(2)")
    sweep: int | None = Field(None, ge=2, description="Also sweep theta over [0, pi/2]")


class ExtendParameters(CommandParameters):
    dim: int = Field(2, ge=2)
    world: str = Field("standard", description="World of the diagonal state")
    state: str = Field("pure:0", description="pure:<n> | uniform | weights:<p0,p1,...>")
    target: str = Field(
        "sigma_x",
        description="sigma_x | sigma_y | sigma_z | fourier | random[:<seed>] | diagonal:<values>",
    )
    box: float | None = Field(None, gt=0, description="Search box radius R")
    tol: float | None = Field(None, gt=0, description="Objective tolerance")
    max_iter: int | None = Field(None, ge=1, description="Iteration budget")
    seed: int = Field(0, description="Seed used by 'random' worlds and targets")
    gap_tol: float | None = Field(None, ge=0, description="Gap below which the value is unique")


class BanachParameters(CommandParameters):
    prefix: str = Field("", description="Comma separated leading terms")
    tail: str = Field(..., description="periodic:<v1,v2,...> | convergent:<limit>")
    shifts: int = Field(1, ge=0, le=1000, description="Number of shifted copies to evaluate")


PARAMETER_MODELS: dict[str, type[CommandParameters]] = {
    "evolve": EvolveParameters,
    "born": BornParameters,
    "markov": MarkovParameters,
    "chsh": ChshParameters,
    "extend": ExtendParameters,
    "banach": BanachParameters,
}


class ExperimentConfig(BaseModel):
    """One experiment: a command and its raw parameters, validated per command later."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    parameters: dict[str, Any] = Field(default_factory=dict)


class BatchConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    runs: list[ExperimentConfig] = Field(..., min_length=1)


class ExperimentRecord(BaseModel):
    """One output line. Field order is part of the output format."""

    command: str
    inputs_digest: str
    outputs: dict[str, Any]
    timing: float | None = None
