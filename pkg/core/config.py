import logging
import os

from dotenv import load_dotenv

from core.errors import UsageError
from core.numeric import Tolerances

load_dotenv()

DEFAULT_SERVER = "http://127.0.0.1:3333"


def _env_float(name: str) -> float | None:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{name} must be a number, got {raw!r}")


def default_tolerances(**overrides) -> Tolerances:
    """Built-in defaults, then environment, then explicit overrides (None means 'not given')."""
    tol = Tolerances().replace(
        feas_tol=_env_float("EIGENSTEPS_TOL"),
        eq_tol=_env_float("EIGENSTEPS_TOL_EQ"),
    )
    return tol.replace(**overrides)


def server_url() -> str:
    return os.getenv("EIGENSTEPS_SERVER", DEFAULT_SERVER).rstrip("/")


def log_level(verbosity: int = 0) -> int:
    if verbosity >= 2:
        return logging.DEBUG
    if verbosity == 1:
        return logging.INFO
    name = os.getenv("EIGENSTEPS_LOG_LEVEL", "WARNING").upper()
    level = logging.getLevelName(name)
    if not isinstance(level, int):
        raise UsageError(f"EIGENSTEPS_LOG_LEVEL: unknown level {name!r}")
    return level
