"""Top Kill: build inner eigensteps greedily, chipping each new length off the
highest levels of the staircase first."""
from __future__ import annotations

import logging
from typing import Sequence

from core.errors import InfeasibleError, UsageError
from core.majorization import LengthSequence, Spectrum, majorizes
from core.numeric import Tolerances
from eigensteps.tables import InnerEigenstepTable

logger = logging.getLogger(__name__)


def admissible_pivots(row: Sequence[float], mu_n: float, tol: Tolerances | None = None) -> list[int]:
    """All k in 1..n-1 with row[k+1] <= mu_n <= row[k] (1-based, within feas_tol)."""
    tol = tol or Tolerances()
    n = len(row)
    return [
        k
        for k in range(1, n)
        if row[k] - tol.feas_tol <= mu_n <= row[k - 1] + tol.feas_tol
    ]


def topkill_step(
    row: Sequence[float],
    mu_n: float,
    tol: Tolerances | None = None,
    pivot: int | None = None,
) -> tuple[float, ...]:
    """Remove mu_n units of area from `row` (length n), returning the length n-1 row below it.

    The pivot defaults to the smallest admissible level; any admissible pivot gives
    the same result.
    """
    tol = tol or Tolerances()
    row = tuple(float(v) for v in row)
    n = len(row)
    if n == 0:
        raise UsageError("topkill_step needs a nonempty row")
    if n == 1:
        if abs(row[0] - mu_n) > tol.feas_tol:
            raise InfeasibleError(f"single level {row[0]!r} cannot lose exactly {mu_n!r}")
        return ()
    if mu_n > row[0] + tol.feas_tol or mu_n < row[-1] - tol.feas_tol:
        raise InfeasibleError(
            f"no level k with row[k+1] <= mu_n={mu_n!r} <= row[k]: the row does not majorize the lengths"
        )
    pivots = admissible_pivots(row, mu_n, tol)
    if pivot is None:
        # an exact fit keeps the new level inside [row[k+1], row[k]]; slack fits are a fallback
        exact = [k for k in pivots if row[k] <= mu_n <= row[k - 1]]
        k = exact[0] if exact else pivots[0]
    elif pivot in pivots:
        k = pivot
    else:
        raise UsageError(f"pivot {pivot} is not admissible for mu_n={mu_n!r}; admissible: {pivots}")
    level = min(max(row[k - 1] + row[k] - mu_n, row[k]), row[k - 1])
    out = row[: k - 1] + (level,) + row[k + 1 :]
    logger.debug("top kill n=%d mu=%r pivot=%d -> %r", n, mu_n, k, out)
    return out


def topkill_table(lam, mu, tol: Tolerances | None = None) -> InnerEigenstepTable:
    tol = tol or Tolerances()
    lam = Spectrum.of(lam, tol)
    mu = LengthSequence.of(mu, tol)
    report = majorizes(lam, mu, tol)
    if not report.holds:
        raise InfeasibleError(
            f"spectrum does not majorize the lengths (worst partial slack {report.worst_partial_slack:.3g}, "
            f"trace gap {report.trace_gap:.3g})",
            report,
        )
    N = len(lam)
    rows: list[tuple[float, ...]] = [tuple(lam)]
    for n in range(N, 1, -1):
        rows.append(topkill_step(rows[-1], mu[n - 1], tol))
    rows.reverse()
    logger.info("top kill built %d rows", N)
    return InnerEigenstepTable(tuple(rows), tuple(lam), tuple(mu))
