from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

from .exceptions import ConfigurationError
from .logger import get_logger

logger = get_logger("config")

BASE_DIR = Path(__file__).resolve().parent.parent.parent
ENV_PATH = BASE_DIR / ".env"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_file=ENV_PATH,
        env_file_encoding="utf-8",
        env_prefix="WORLDS_",
        case_sensitive=True,
        extra="ignore",
    )

    PROJECT_NAME: str = "Worlds toolkit"

    EPS: float = 1e-9
    SCHMIDT_TOL: float = 1e-8
    DIAGONAL_TOL: float = 1e-8

    BOX_RADIUS: float = 1e3
    SOLVER_TOL: float = 1e-6
    SOLVER_MAX_ITER: int = 20000
    GAP_TOL_FACTOR: float = 10.0

    LOG_LEVEL: str = "WARNING"
    ENVIRONMENT: str = "production"


settings = Settings()


def validate_settings() -> None:
    """Reject non-positive tolerances and budgets. Called on CLI start-up."""
    errors = []

    for key in ("EPS", "SCHMIDT_TOL", "DIAGONAL_TOL", "BOX_RADIUS", "SOLVER_TOL", "GAP_TOL_FACTOR"):
        value = getattr(settings, key)
        if not value > 0:
            errors.append(f"WORLDS_{key} must be positive, got {value}")

    if settings.SOLVER_MAX_ITER < 1:
        errors.append(f"WORLDS_SOLVER_MAX_ITER must be >= 1, got {settings.SOLVER_MAX_ITER}")

    if errors:
        for error in errors:
            logger.error(f"Configuration error: {error}")
        raise ConfigurationError(errors[0], details={"errors": errors})

    logger.debug(f"Settings validated - eps: {settings.EPS}, box: {settings.BOX_RADIUS}")
