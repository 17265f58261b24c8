from core.errors import EigenstepError, UsageError
from eigensteps.tables import InnerEigenstepTable, inner_to_outer
from frames.framebuild import FrameMatrix, verify_frame
from frames.schurhorn import verify_schur_horn
from stages import fail, note

KINDS = ("frame", "schur-horn")


def _frame_reports(state: dict, frames: list) -> list:
    tol = state["tol"]
    outers = state.get("outer_tables")
    if outers is None:
        table = state.get("table")
        if isinstance(table, InnerEigenstepTable):
            table = inner_to_outer(table, frames[0].M, tol)
        outers = [table] * len(frames)
    return [verify_frame(F, state["lam"], state["mu"], outer, tol) for F, outer in zip(frames, outers)]


def verify_step(state: dict) -> dict:
    # Every emitted or supplied matrix is checked against the requested spectrum and lengths/diagonal.
    kind = state.get("kind") or ("schur-horn" if state["goal"] == "schur-horn" else "frame")
    try:
        if kind not in KINDS:
            raise UsageError(f"unknown matrix kind {kind!r}; choose one of {', '.join(KINDS)}")
        if state["goal"] == "verify":
            if state.get("matrix") is None:
                raise UsageError("verify needs a matrix")
            matrices = [state["matrix"]]
        else:
            matrices = state["matrices"]
        if kind == "frame":
            reports = _frame_reports(state, [m if isinstance(m, FrameMatrix) else FrameMatrix(m) for m in matrices])
        else:
            reports = [verify_schur_horn(G, state["lam"], state["mu"], state["tol"]) for G in matrices]
    except EigenstepError as e:
        return fail(state, e)
    state["verification"] = reports
    for i, report in enumerate(reports):
        note(state, f"Verify[{i}] {kind}: {report.summary()}")
    if all(r.holds for r in reports):
        state["status"] = "verified"
    else:
        state["status"] = "verification_failed"
        state["exit_code"] = 1
    return state
