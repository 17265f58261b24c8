import numpy as np

from core.errors import EigenstepError, UsageError
from eigensteps.tables import InnerEigenstepTable, inner_to_outer
from frames.framebuild import CanonicalProbe, RandomProbe, synthesize
from stages import fail, note


def frame_dimension(state: dict) -> int:
    """M: --dim when given, else the length of the spectrum as supplied."""
    return state.get("dim") or len(state["lam"])


def probe_for(state: dict, index: int):
    if state.get("probe", "canonical") == "random":
        return RandomProbe(np.random.default_rng([state["seed"], index, 1]))
    return CanonicalProbe()


def frame_step(state: dict) -> dict:
    # One frame per eigenstep table.
    tol = state["tol"]
    M = frame_dimension(state)
    try:
        outers, frames = [], []
        for index, table in enumerate(state["tables"]):
            if isinstance(table, InnerEigenstepTable):
                outer = inner_to_outer(table, M, tol)
            elif table.M == M or not state.get("dim"):
                outer = table
            else:
                raise UsageError(f"supplied outer table has M={table.M} but --dim is {M}")
            result = synthesize(outer, probe_for(state, index), tol)
            worst = max(abs(w.total - mu) for w, mu in zip(result.weights, outer.mu)) if outer.N else 0.0
            note(state, f"Frame: {outer.M}x{outer.N} built; worst weight-sum drift {worst:.3g}.")
            outers.append(outer)
            frames.append(result.frame)
    except EigenstepError as e:
        return fail(state, e)
    state["outer_tables"] = outers
    state["matrices"] = frames
    state["status"] = "built"
    return state
