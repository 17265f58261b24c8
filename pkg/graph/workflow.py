import logging

import requests

from core.config import default_tolerances, server_url
from core.errors import EigenstepError, ParseError, UsageError
from core.majorization import check_nonincreasing
from eigensteps.tables import table_from_dict
from frames.io import matrix_from_dict
from stages.check import check_step
from stages.frame import frame_step
from stages.schur import schur_horn_step
from stages.steps import MODES, eigensteps_step
from stages.verify import verify_step

logger = logging.getLogger(__name__)

GOALS = ("check", "eigensteps", "frame", "schur-horn", "verify")

# tool name on the HTTP surface -> pipeline goal
TOOL_GOALS = {
    "majorization.check": "check",
    "eigensteps.build": "eigensteps",
    "frame.build": "frame",
    "schur_horn.build": "schur-horn",
    "matrix.verify": "verify",
}

SUCCESS = ("feasible", "eigensteps_ready", "verified")


def call_tool(tool_name: str, payload: dict, url: str | None = None) -> dict:
    # Remote run of one job on a tool server
    base = (url or server_url()).rstrip("/")
    try:
        resp = requests.post(f"{base}/tools/{tool_name}", json=payload, timeout=60)
    except requests.RequestException as e:
        return {"ok": False, "error": {"code": "unreachable", "message": f"{base}: {e}"}}
    try:
        return resp.json()
    except ValueError:
        return {"ok": False, "error": {"code": f"bad_response_{resp.status_code}", "message": resp.text}}


def supervisor(state: dict) -> str:
    s = state.get("status", "new")
    goal = state["goal"]
    if s == "new":
        return "verify" if goal == "verify" else "check"
    if s == "feasible":
        if goal == "schur-horn":
            return "schur_horn"
        if goal in ("eigensteps", "frame"):
            return "eigensteps"
    if s == "eigensteps_ready" and goal == "frame":
        return "frame"
    if s == "built":
        return "verify"
    return "done"


STAGES = {
    "check": check_step,
    "eigensteps": eigensteps_step,
    "frame": frame_step,
    "schur_horn": schur_horn_step,
    "verify": verify_step,
}


def run(state: dict) -> dict:
    # Simple state machine loop
    for _ in range(20):
        nxt = supervisor(state)
        if nxt == "done":
            break
        logger.debug("stage %s (status %s)", nxt, state.get("status", "new"))
        state = STAGES[nxt](state)
    return state


def _numbers(values, name: str) -> tuple[float, ...]:
    if not isinstance(values, (list, tuple)) or not values:
        raise UsageError(f"{name} must be a nonempty list of numbers")
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in values):
        raise ParseError(f"{name} must contain only numbers")
    return tuple(float(v) for v in values)


def _sequence(payload: dict, key: str, name: str, tol) -> tuple[float, ...]:
    values = _numbers(payload.get(key), name)
    return tuple(float(v) for v in check_nonincreasing(values, tol, name, nonnegative=False))


def _int(payload: dict, key: str, default, minimum: int):
    value = payload.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise UsageError(f"{key} must be an integer >= {minimum}, got {value!r}")
    return value


def new_state(goal: str, payload: dict) -> dict:
    """Validate a JSON-compatible payload into a pipeline state."""
    if goal not in GOALS:
        raise UsageError(f"unknown goal {goal!r}; choose one of {', '.join(GOALS)}")
    overrides = payload.get("tol") or {}
    if not isinstance(overrides, dict):
        raise UsageError("tol must be an object of tolerance overrides")
    try:
        tol = default_tolerances(**overrides)
    except (TypeError, ValueError) as e:
        raise UsageError(f"bad tolerance override: {e}")
    mode = payload.get("mode") or "topkill"
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}; choose one of {', '.join(MODES)}")
    state = {
        "goal": goal,
        "status": "new",
        "notes": [],
        "tol": tol,
        "lam": _sequence(payload, "lam", "spectrum", tol),
        "mu": _sequence(payload, "mu", "diagonal" if goal == "schur-horn" else "lengths", tol),
        "dim": _int(payload, "dim", None, 1),
        "mode": mode,
        "seed": _int(payload, "seed", 0, 0),
        "count": _int(payload, "count", 1, 1),
        "t": payload.get("t"),
        "alpha": payload.get("alpha"),
        "kind": payload.get("kind"),
        "probe": payload.get("probe", "canonical"),
        "table": None,
        "matrix": None,
    }
    if state["t"] is not None:
        state["t"] = _numbers(state["t"], "t-vector")
    if state["alpha"] is not None:
        state["alpha"] = _numbers([state["alpha"]], "alpha")[0]
    if payload.get("table") is not None:
        state["table"] = table_from_dict(payload["table"])
    if payload.get("matrix") is not None:
        state["matrix"] = matrix_from_dict(payload["matrix"])
    return state


def summarize(state: dict) -> dict:
    status = state["status"]
    if status in SUCCESS:
        exit_code = 0
    else:
        exit_code = state.get("exit_code", 1)
    out = {
        "ok": exit_code == 0,
        "goal": state["goal"],
        "status": status,
        "exit_code": exit_code,
        "notes": list(state.get("notes", [])),
    }
    if "report" in state:
        out["report"] = state["report"]
    if "error" in state:
        out["error"] = state["error"]
    tables = state.get("tables") if state["goal"] == "eigensteps" else None
    if tables:
        out["tables"] = [t.to_dict() for t in tables]
        if len(tables) == 1:
            out["table"] = out["tables"][0]
    matrices = state.get("matrices")
    if matrices and status in ("verified", "verification_failed"):
        out["matrices"] = [m.to_dict() for m in matrices]
        if len(matrices) == 1:
            out["matrix"] = out["matrices"][0]
    if "verification" in state:
        out["verification"] = [r.to_dict() for r in state["verification"]]
    return out


def execute(goal: str, payload: dict) -> dict:
    """Run one job end to end and return the result dict the CLI and the server share."""
    try:
        state = new_state(goal, payload)
    except EigenstepError as e:
        return {
            "ok": False,
            "goal": goal,
            "status": "failed",
            "exit_code": e.exit_code,
            "notes": [f"{e.code}: {e}"],
            "error": e.to_dict(),
        }
    return summarize(run(state))
