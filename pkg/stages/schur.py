from core.errors import EigenstepError
from frames.schurhorn import build_schur_horn
from stages import fail, note
from stages.frame import probe_for
from stages.steps import fan_out, parameter_vector


def schur_horn_step(state: dict) -> dict:
    # G = F^T F + alpha I for the shifted problem.
    lam, mu, tol = state["lam"], state["mu"], state["tol"]
    try:

        def build(index: int):
            t = parameter_vector(state, len(mu), index)
            return build_schur_horn(lam, mu, state.get("alpha"), t, probe_for(state, index), tol)

        state["matrices"] = fan_out(state, build)
    except EigenstepError as e:
        return fail(state, e)
    alpha = state.get("alpha")
    note(
        state,
        f"Schur-Horn: built {len(state['matrices'])} matrix(es) of size {len(mu)} with "
        f"alpha={'smallest eigenvalue' if alpha is None else repr(alpha)}.",
    )
    state["status"] = "built"
    return state
