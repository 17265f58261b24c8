import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from core.errors import EigenstepError, InfeasibleError, UsageError
from eigensteps.sampling import num_coordinates, parametrize_inner
from eigensteps.tables import InnerEigenstepTable, validate_inner, validate_outer
from eigensteps.topkill import topkill_table
from stages import fail, note
from stages.check import padded_spectrum

MODES = ("topkill", "midpoint", "random", "t-vector")


def parameter_vector(state: dict, N: int, index: int = 0) -> np.ndarray | None:
    """The t-vector the mode asks for; None means Top Kill."""
    mode = state["mode"]
    if mode == "topkill":
        return None
    if mode == "midpoint":
        return np.full(num_coordinates(N), 0.5)
    if mode == "random":
        return np.random.default_rng([state["seed"], index]).random(num_coordinates(N))
    if mode == "t-vector":
        if state.get("t") is None:
            raise UsageError("mode t-vector needs a t-vector")
        return np.asarray(state["t"], dtype=float)
    raise UsageError(f"unknown mode {mode!r}; choose one of {', '.join(MODES)}")


def fan_out(state: dict, build) -> list:
    """build(index) for every requested sample; results keep index order."""
    count = state["count"]
    if count == 1:
        return [build(0)]
    if state["mode"] != "random":
        raise UsageError("--count above 1 needs mode random")
    with ThreadPoolExecutor(max_workers=min(count, os.cpu_count() or 1)) as pool:
        return list(pool.map(build, range(count)))


def _supplied(state: dict):
    table = state["table"]
    tol = state["tol"]
    if len(table.mu) != len(state["mu"]) or np.max(np.abs(np.subtract(table.mu, state["mu"]))) > tol.feas_tol:
        raise UsageError("the supplied eigenstep table was built for different lengths")
    report = validate_inner(table, tol) if isinstance(table, InnerEigenstepTable) else validate_outer(table, tol)
    if not report.holds:
        raise InfeasibleError(f"supplied eigenstep table is not valid: {report.summary()}", report)
    return table


def eigensteps_step(state: dict) -> dict:
    # A supplied table is validated, otherwise one is built per the mode.
    try:
        if state.get("table") is not None:
            state["tables"] = [_supplied(state)]
            note(state, "Eigensteps: supplied table is valid.")
        else:
            lam = padded_spectrum(state)
            mu = state["mu"]
            tol = state["tol"]

            def build(index: int):
                t = parameter_vector(state, len(mu), index)
                return topkill_table(lam, mu, tol) if t is None else parametrize_inner(lam, mu, t, tol)

            tables = fan_out(state, build)
            for table in tables:
                report = validate_inner(table, tol)
                if not report.holds:
                    raise InfeasibleError(f"constructed table failed validation: {report.summary()}", report)
            state["tables"] = tables
            note(state, f"Eigensteps: built {len(tables)} table(s) with mode {state['mode']}.")
    except EigenstepError as e:
        return fail(state, e)
    state["status"] = "eigensteps_ready"
    return state
