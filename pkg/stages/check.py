from core.errors import EigenstepError, InfeasibleError
from core.majorization import LengthSequence, Spectrum, check_nonincreasing, majorizes, zero_pad
from stages import fail, note


def padded_spectrum(state: dict) -> Spectrum:
    """The spectrum as a length-N sequence; frame problems list only the M frame-operator eigenvalues."""
    tol = state["tol"]
    N = len(state["mu"])
    return zero_pad(Spectrum.of(state["lam"], tol), N)


def check_step(state: dict) -> dict:
    # Majorization decides feasibility for every construction goal.
    tol = state["tol"]
    try:
        if state["goal"] == "schur-horn":
            lam = check_nonincreasing(state["lam"], tol, "spectrum", nonnegative=False)
            mu = check_nonincreasing(state["mu"], tol, "diagonal", nonnegative=False)
        else:
            lam = padded_spectrum(state)
            mu = LengthSequence.of(state["mu"], tol)
        report = majorizes(lam, mu, tol)
    except EigenstepError as e:
        return fail(state, e)
    state["report"] = report.to_dict()
    if not report.holds:
        return fail(
            state,
            InfeasibleError(
                f"spectrum does not majorize the {'diagonal' if state['goal'] == 'schur-horn' else 'lengths'} "
                f"(first failing partial sum {report.first_failure}, worst slack {report.worst_partial_slack:.3g}, "
                f"trace gap {report.trace_gap:.3g})",
                report,
            ),
        )
    state["status"] = "feasible"
    note(state, f"Check: majorization holds for N={len(mu)} (worst slack {report.worst_partial_slack:.3g}).")
    return state
