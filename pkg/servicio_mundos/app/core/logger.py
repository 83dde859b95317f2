import logging
import os
import sys

LOG_LEVEL = os.getenv("WORLDS_LOG_LEVEL", "WARNING").upper()
ENVIRONMENT = os.getenv("WORLDS_ENVIRONMENT", "production")

_log_level_map = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}


def get_logger(name: str, level: int | None = None) -> logging.Logger:
    """
    Returns a configured logger for the worlds toolkit.

    Args:
        name: Module or component name (e.g. 'extension', 'cli')
        level: Optional level override. Defaults to WORLDS_LOG_LEVEL.

    Returns:
        Logger writing to stderr; stdout carries the result records.
    """
    logger = logging.getLogger(f"worlds.{name}")

    if not logger.handlers:
        resolved = level or _log_level_map.get(LOG_LEVEL, logging.WARNING)
        logger.setLevel(resolved)

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(resolved)

        if ENVIRONMENT == "development":
            formatter = logging.Formatter(
                "[%(asctime)s] %(levelname)s [%(name)s]: %(message)s", datefmt="%Y-%m-%d %H:%M:%S"
            )
        else:
            formatter = logging.Formatter("%(levelname)s %(name)s: %(message)s")

        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_level(level_name: str) -> None:
    """Apply a level to every worlds.* logger created so far."""
    level = _log_level_map.get(level_name.upper(), logging.WARNING)
    for name, candidate in logging.Logger.manager.loggerDict.items():
        if name.startswith("worlds.") and isinstance(candidate, logging.Logger):
            candidate.setLevel(level)
            for handler in candidate.handlers:
                handler.setLevel(level)
