"""JSON persistence for worlds, observables, states, sequences and envelope runs."""

from pathlib import Path
from typing import TypeVar

from pydantic import BaseModel, ValidationError

from ..core.exceptions import DocumentError
from ..core.logger import get_logger
from ..models.document_models import ObservableDocument, StateDocument, WorldDocument
from ..models.extension_models import EnvelopeProblem, EnvelopeResult
from ..models.hilbert_models import to_pairs
from ..models.observable_models import DiagonalObservable
from ..models.sequence_models import AlmostConvergentSequence
from ..models.state_models import DiagonalState
from ..models.world_models import World

logger = get_logger("crud_documents")

DocumentT = TypeVar("DocumentT", bound=BaseModel)


def _write(path: str | Path, document: BaseModel) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise DocumentError(f"cannot write document {target}: {e}") from e
    logger.debug(f"Document written: {target}")
    return target


def _read(path: str | Path, model: type[DocumentT]) -> DocumentT:
    source = Path(path)
    try:
        return model.model_validate_json(source.read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise DocumentError(f"document not found: {source}") from e
    except ValidationError as e:
        logger.warning(f"Malformed document {source}: {e.error_count()} errors")
        raise DocumentError(f"malformed document {source}", details={"errors": e.errors()}) from e


def _resolve(document_path: str | Path, reference: str) -> Path:
    ref = Path(reference)
    return ref if ref.is_absolute() else Path(document_path).parent / ref


def save_world(path: str | Path, world: World) -> Path:
    return _write(path, WorldDocument(dim=world.dim, basis=to_pairs(world.vectors)))


def load_world(path: str | Path) -> World:
    document = _read(path, WorldDocument)
    return World(vectors=document.basis)


def save_observable(path: str | Path, obs: DiagonalObservable, world_file: str) -> Path:
    """Writes the eigenvalues with a reference to an already saved world."""
    return _write(
        path, ObservableDocument(world_file=world_file, eigenvalues=obs.eigenvalues.tolist())
    )


def load_observable(path: str | Path) -> DiagonalObservable:
    document = _read(path, ObservableDocument)
    world = load_world(_resolve(path, document.world_file))
    return DiagonalObservable(world=world, eigenvalues=document.eigenvalues)


def save_state(path: str | Path, state: DiagonalState, world_file: str) -> Path:
    return _write(path, StateDocument(world_file=world_file, weights=state.weights.tolist()))


def load_state(path: str | Path) -> DiagonalState:
    document = _read(path, StateDocument)
    world = load_world(_resolve(path, document.world_file))
    return DiagonalState(world=world, weights=document.weights)


def save_sequence(path: str | Path, x: AlmostConvergentSequence) -> Path:
    return _write(path, x)


def load_sequence(path: str | Path) -> AlmostConvergentSequence:
    return _read(path, AlmostConvergentSequence)


def save_problem(path: str | Path, problem: EnvelopeProblem) -> Path:
    return _write(path, problem)


def load_problem(path: str | Path) -> EnvelopeProblem:
    return _read(path, EnvelopeProblem)


def save_result(path: str | Path, result: EnvelopeResult) -> Path:
    return _write(path, result)


def load_result(path: str | Path) -> EnvelopeResult:
    return _read(path, EnvelopeResult)
