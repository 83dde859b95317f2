"""
Command handlers.

Each handler validates its inputs against the owning services and returns a
job: a zero-argument callable producing the record outputs. Problems found
while preparing are configuration errors naming the offending key; problems
raised by the job itself are numeric failures.
"""

from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import Any

import numpy as np

from ..core.exceptions import ConfigurationError, DimensionMismatchError, WorldsError
from ..core.logger import get_logger
from ..crud import crud_documents
from ..models.experiment_models import (
    BanachParameters,
    BornParameters,
    ChshParameters,
    CommandParameters,
    EvolveParameters,
    ExtendParameters,
    MarkovParameters,
)
from ..models.extension_models import EnvelopeProblem
from ..models.hilbert_models import HermitianOperator, to_pairs
from ..models.sequence_models import SequenceObservable
from ..models.state_models import DiagonalState
from ..models.world_models import EvolutionGenerator, World, gram_deviation
from ..services import banach, bell, extension, hilbert, observables, states, worlds

logger = get_logger("cli.commands")

Job = Callable[[], dict[str, Any]]

SEMIGROUP_TOL = 1e-8
CESARO_TERMS = 10_000
HEAD_TERMS = 10

# Service operations each command calls, directly or through another operation
COMMAND_OPERATIONS: dict[str, tuple[str, ...]] = {
    "evolve": (
        "hilbert.random_hermitian",
        "hilbert.mat_exp_hermitian",
        "hilbert.inner",
        "worlds.random_world",
        "worlds.validate_world",
        "worlds.evolve_world",
        "worlds.worlds_equal",
    ),
    "born": (
        "worlds.random_world",
        "states.vector_state",
        "observables.diagonal_observable",
        "observables.materialize",
        "states.expectation_same_world",
        "states.transition_matrix",
        "states.born_expectation",
        "states.outcome_distribution",
        "states.sandwich",
    ),
    "markov": (
        "worlds.named_world",
        "worlds.standard_world",
        "states.markov_chain",
        "states.markov_update",
    ),
    "chsh": (
        "hilbert.tensor_ket",
        "hilbert.tensor_op",
        "bell.bell_state",
        "bell.bell_basis",
        "bell.chsh_value",
        "bell.classical_chsh_bound",
        "bell.four_worlds",
        "bell.diagonality_table",
        "bell.phase_sweep",
        "worlds.product_world",
        "worlds.is_product_world",
        "observables.tensor_observable",
        "observables.is_diagonal_in",
    ),
    "extend": (
        "worlds.named_world",
        "hilbert.operator_norm",
        "extension.objective_upper",
        "extension.objective_lower",
        "extension.solve_envelopes",
        "extension.require_converged",
        "extension.unique_extension_value",
        "extension.truncation_bias",
        "extension.sandwich_value",
    ),
    "banach": (
        "banach.parse_tail",
        "banach.parse_sequence",
        "banach.banach_limit",
        "banach.shift",
        "banach.topo_state_expectation",
        "banach.annihilates_compact",
        "banach.cesaro_mean",
        "banach.head",
    ),
}


@contextmanager
def config_key(key: str) -> Iterator[None]:
    """Re-raises input problems as a ConfigurationError that names `key`."""
    try:
        yield
    except ConfigurationError:
        raise
    except (WorldsError, ValueError) as e:
        message = e.message if isinstance(e, WorldsError) else str(e)
        raise ConfigurationError(f"invalid value for '{key}': {message}", details={"key": key})


def parse_state(text: str, world: World) -> DiagonalState:
    """'pure:<n>', 'uniform' or 'weights:<p0,p1,...>' relative to `world`."""
    kind, _, arg = text.strip().partition(":")
    if kind == "pure":
        return states.vector_state(world, int(arg))
    if kind == "uniform":
        return states.uniform_state(world)
    if kind == "weights":
        return states.diagonal_state(world, [float(v) for v in arg.split(",")])
    raise ValueError(f"unknown state '{text}', expected pure:<n>, uniform or weights:<...>")


def parse_target(text: str, world: World, seed: int) -> HermitianOperator:
    kind, _, arg = text.strip().partition(":")
    if kind.startswith("sigma_"):
        if world.dim != 2:
            raise DimensionMismatchError(f"{kind} acts on dim 2, requested {world.dim}")
        return bell.pauli(kind.removeprefix("sigma_"))
    if kind == "random":
        return hilbert.random_hermitian(world.dim, int(arg) if arg else seed)
    if kind == "fourier":
        fourier = worlds.fourier_world(world.dim)
        return observables.materialize(
            observables.diagonal_observable(fourier, [float(k) for k in range(world.dim)])
        )
    if kind == "diagonal":
        values = [float(v) for v in arg.split(",")]
        return observables.materialize(observables.diagonal_observable(world, values))
    raise ValueError(f"unknown target '{text}'")


def _seeded(name: str, seed: int) -> str:
    return f"random:{seed}" if name.strip() == "random" else name


def evolve(p: EvolveParameters) -> Job:
    initial = None
    if p.world_file:
        with config_key("world_file"):
            initial = crud_documents.load_world(p.world_file)
    with config_key("dim"):
        if initial is None:
            initial = worlds.random_world(p.dim or 2, p.seed)
        elif p.dim is not None and p.dim != initial.dim:
            raise DimensionMismatchError(f"world file has dim {initial.dim}, not {p.dim}")
    with config_key("generator_seed"):
        generator = EvolutionGenerator(A=hilbert.random_hermitian(initial.dim, p.generator_seed))

    def run() -> dict[str, Any]:
        evolved = worlds.evolve_world(initial, generator, p.time)
        semigroup = None
        if p.split is not None:
            halfway = worlds.evolve_world(initial, generator, p.split)
            composed = worlds.evolve_world(halfway, generator, p.time - p.split)
            semigroup = worlds.worlds_equal(evolved, composed, SEMIGROUP_TOL)
        if p.save:
            crud_documents.save_world(p.save, evolved)
        return {
            "dim": evolved.dim,
            "time": p.time,
            "gram_deviation": gram_deviation(evolved.vectors),
            "semigroup": semigroup,
            "world": to_pairs(evolved.vectors),
        }

    return run


def born(p: BornParameters) -> Job:
    with config_key("seed"):
        world = worlds.random_world(p.dim, p.seed)
    with config_key("target_seed"):
        target_world = worlds.random_world(p.dim, p.target_seed)
    with config_key("index"):
        state = states.vector_state(world, p.index)
    eigenvalues = p.eigenvalues if p.eigenvalues is not None else list(range(p.dim))
    with config_key("eigenvalues"):
        target = observables.diagonal_observable(target_world, eigenvalues)
        own = observables.diagonal_observable(world, eigenvalues)

    def run() -> dict[str, Any]:
        return {
            "expectation": states.born_expectation(state, target),
            "sandwich": states.sandwich(world.ket(p.index), observables.materialize(target)),
            "distribution": states.outcome_distribution(state, target_world),
            "transition_matrix": states.transition_matrix(world, target_world).rows.tolist(),
            "own_world_expectation": states.expectation_same_world(state, own),
        }

    return run


def markov(p: MarkovParameters) -> Job:
    with config_key("chain"):
        chain = [worlds.named_world(name, p.dim) for name in p.chain]
    with config_key("state"):
        initial = parse_state(p.state, worlds.standard_world(p.dim))

    def run() -> dict[str, Any]:
        history = states.markov_chain(initial, chain)
        return {
            "initial": initial.weights.tolist(),
            "distributions": [s.weights.tolist() for s in history],
        }

    return run


def chsh(p: ChshParameters) -> Job:
    psi = bell.bell_state(p.phase)

    def run() -> dict[str, Any]:
        report = bell.chsh_value(psi)
        outputs: dict[str, Any] = {"phase": p.phase, **report.model_dump()}
        outputs["term_worlds_product"] = [
            worlds.is_product_world(pw.combined, 2, 2) for pw in bell.four_worlds()
        ]
        outputs["bell_basis_product"] = worlds.is_product_world(bell.bell_basis(), 2, 2)
        outputs["diagonality"] = bell.diagonality_table()
        if p.sweep is not None:
            sweep = bell.phase_sweep(p.sweep)
            outputs["sweep"] = [[theta, r.quantum_value] for theta, r in sweep]
            outputs["argmax_phase"] = max(sweep, key=lambda item: item[1].quantum_value)[0]
        return outputs

    return run


def extend(p: ExtendParameters) -> Job:
    with config_key("world"):
        world = worlds.named_world(_seeded(p.world, p.seed), p.dim)
    with config_key("state"):
        state = parse_state(p.state, world)
    with config_key("target"):
        target = parse_target(p.target, world, p.seed + 1)
    knobs = {"box_radius": p.box, "tol": p.tol, "max_iter": p.max_iter}
    with config_key("dim"):
        problem = EnvelopeProblem(
            state=state, target=target, **{k: v for k, v in knobs.items() if v is not None}
        )

    def run() -> dict[str, Any]:
        result = extension.require_converged(extension.solve_envelopes(problem))
        upper_check = extension.objective_upper(problem, result.arg_upper)
        lower_check = extension.objective_lower(problem, result.arg_lower)
        sandwich = None
        if states.is_pure(state):
            sandwich = extension.sandwich_value(problem, int(np.argmax(state.weights)))
        return {
            "upper": result.upper,
            "lower": result.lower,
            "gap": result.gap,
            "iterations": result.iterations,
            "converged": result.converged,
            "upper_error": result.upper_error,
            "lower_error": result.lower_error,
            "weak_duality": lower_check <= upper_check + 2 * problem.tol,
            "truncation_bias": extension.truncation_bias(problem),
            "unique_value": extension.unique_extension_value(problem, p.gap_tol, result),
            "sandwich": sandwich,
        }

    return run


def banach_command(p: BanachParameters) -> Job:
    with config_key("tail"):
        banach.parse_tail(p.tail)
    with config_key("prefix"):
        x = banach.parse_sequence(p.prefix, p.tail)

    def run() -> dict[str, Any]:
        shifted = [x]
        for _ in range(p.shifts):
            shifted.append(banach.shift(shifted[-1]))
        obs = SequenceObservable(eigenvalues=x)
        return {
            "value": banach.banach_limit(x),
            "shift_values": [banach.banach_limit(y) for y in shifted[1:]],
            "topo_expectation": banach.topo_state_expectation(obs),
            "annihilates_compact": banach.annihilates_compact(obs),
            "cesaro_mean": banach.cesaro_mean(x, CESARO_TERMS),
            "head": banach.head(x, HEAD_TERMS),
        }

    return run


COMMANDS: dict[str, Callable[[Any], Job]] = {
    "evolve": evolve,
    "born": born,
    "markov": markov,
    "chsh": chsh,
    "extend": extend,
    "banach": banach_command,
}


def prepare(command: str, params: CommandParameters) -> Job:
    logger.debug(f"Preparing {command} with {params.model_dump()}")
    return COMMANDS[command](params)
