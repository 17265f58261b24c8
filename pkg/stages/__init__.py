import logging

from core.errors import EigenstepError, InfeasibleError

logger = logging.getLogger(__name__)


def note(state: dict, message: str):
    state.setdefault("notes", []).append(message)
    logger.info(message)


def fail(state: dict, exc: EigenstepError) -> dict:
    state["status"] = "infeasible" if isinstance(exc, InfeasibleError) else "failed"
    state["error"] = exc.to_dict()
    state["exit_code"] = exc.exit_code
    note(state, f"{exc.code}: {exc}")
    return state
