"""
Command-line front end.

    run.py [--config FILE] [--workers N] [--timing] <command> [--key value ...]

Prints one JSON record per experiment on stdout, in input order. Logs go to
stderr. Exit status: 0 on success, 1 on a numeric failure, 2 on a
configuration error.
"""

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import Future, ThreadPoolExecutor
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from ..core.config import settings, validate_settings
from ..core.exceptions import ConfigurationError, WorldsError
from ..core.logger import get_logger, set_level
from ..models.experiment_models import (
    PARAMETER_MODELS,
    BatchConfig,
    CommandParameters,
    ExperimentConfig,
    ExperimentRecord,
)
from .commands import Job, prepare

logger = get_logger("cli")

EXIT_OK = 0
EXIT_NUMERIC_FAILURE = 1
EXIT_CONFIG_ERROR = 2

_GLOBAL_KEYS = {"config", "workers", "timing", "command"}

_COMMAND_HELP = {
    "evolve": "Evolve a world with exp(i t A) and check the semigroup property",
    "born": "Born-rule expectation of an observable of another world",
    "markov": "Propagate a diagonal state through a chain of worlds",
    "chsh": "CHSH value of a Bell state against the classical bound",
    "extend": "Upper and lower envelopes of the extensions of a diagonal state",
    "banach": "Banach limit of an almost-convergent sequence",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="run.py", description=settings.PROJECT_NAME)
    parser.add_argument("--config", help="JSON experiment file (single run or {'runs': [...]})")
    parser.add_argument("--workers", type=int, default=1, help="Threads for batch runs")
    parser.add_argument("--timing", action="store_true", help="Fill the timing field")

    subparsers = parser.add_subparsers(dest="command", metavar="<command>")
    for name, model in PARAMETER_MODELS.items():
        sub = subparsers.add_parser(
            name, help=_COMMAND_HELP[name], argument_default=argparse.SUPPRESS
        )
        # values stay strings here; the parameter model does the coercion
        for key, field in model.model_fields.items():
            sub.add_argument(f"--{key.replace('_', '-')}", dest=key, help=field.description)
    return parser


def _config_error(e: ValidationError, scope: str = "") -> ConfigurationError:
    first = e.errors()[0]
    key = ".".join(str(part) for part in first["loc"]) or scope
    if scope and key != scope:
        key = f"{scope}.{key}"
    return ConfigurationError(f"invalid value for '{key}': {first['msg']}", details={"key": key})


def load_runs(args: argparse.Namespace) -> list[ExperimentConfig]:
    """Experiments from --config, or the single one given by flags."""
    if args.config and args.command:
        raise ConfigurationError("give either --config or a command", details={"key": "config"})

    if args.config:
        try:
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"cannot read config file: {e}", details={"key": "config"})
        try:
            if isinstance(raw, dict) and "runs" in raw:
                return BatchConfig.model_validate(raw).runs
            return [ExperimentConfig.model_validate(raw)]
        except ValidationError as e:
            raise _config_error(e)

    if not args.command:
        raise ConfigurationError("no command given", details={"key": "command"})
    parameters = {k: v for k, v in vars(args).items() if k not in _GLOBAL_KEYS}
    return [ExperimentConfig(command=args.command, parameters=parameters)]


def validate_parameters(run: ExperimentConfig) -> CommandParameters:
    try:
        return PARAMETER_MODELS[run.command].model_validate(run.parameters)
    except ValidationError as e:
        raise _config_error(e, scope="parameters")


def inputs_digest(command: str, params: CommandParameters) -> str:
    """sha256 of the canonical JSON of the validated parameters."""
    canonical = json.dumps(
        {"command": command, "parameters": params.model_dump(mode="json")},
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _timed(job: Job, timing: bool) -> tuple[dict[str, Any], float | None]:
    start = time.perf_counter()
    outputs = job()
    return outputs, (time.perf_counter() - start) if timing else None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_CONFIG_ERROR

    set_level(settings.LOG_LEVEL)

    try:
        validate_settings()
        if args.workers < 1:
            raise ConfigurationError("--workers must be >= 1", details={"key": "workers"})
        prepared = []
        for run in load_runs(args):
            params = validate_parameters(run)
            digest = inputs_digest(run.command, params)
            prepared.append((run.command, digest, prepare(run.command, params)))
    except ConfigurationError as e:
        logger.debug(f"Configuration rejected: {e.details}")
        print(f"configuration error: {e.message}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except WorldsError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return EXIT_NUMERIC_FAILURE

    logger.info(f"Running {len(prepared)} experiment(s) on {args.workers} worker(s)")
    with ThreadPoolExecutor(max_workers=args.workers) as executor:
        futures: list[Future] = [
            executor.submit(_timed, job, args.timing) for _, _, job in prepared
        ]
        for (command, digest, _), future in zip(prepared, futures, strict=True):
            try:
                outputs, elapsed = future.result()
            except WorldsError as e:
                for pending in futures:
                    pending.cancel()
                logger.debug(f"{command} failed: {e.details}")
                print(f"error in {command}: {e.message}", file=sys.stderr)
                return EXIT_NUMERIC_FAILURE
            record = ExperimentRecord(
                command=command, inputs_digest=digest, outputs=outputs, timing=elapsed
            )
            print(record.model_dump_json(), flush=True)

    return EXIT_OK
