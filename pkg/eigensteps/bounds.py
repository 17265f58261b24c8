"""Interval bounds [A, B] for the next eigenstep entry, given the row above and
the entries of the current row already chosen to its right.

Indices are 1-based to line up with the usual lambda_{n;m} notation; sums over
empty index ranges are zero.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from core.errors import InconsistentPrefixError, UsageError
from core.numeric import Tolerances

logger = logging.getLogger(__name__)

INTERLACING = "interlacing"
TRACE_BUDGET = "trace-budget"
MAJORIZATION = "majorization"


@dataclass(frozen=True)
class IntervalBounds:
    A: float
    B: float
    active_lower: str
    active_upper: str
    upper_index: int | None = None  # the l of the tight majorization term

    @property
    def width(self) -> float:
        return self.B - self.A

    def degenerate(self, tol: Tolerances) -> bool:
        return self.width <= tol.feas_tol

    def contains(self, value: float, slack: float) -> bool:
        return self.A - slack <= value <= self.B + slack

    def to_dict(self) -> dict:
        return {
            "A": self.A,
            "B": self.B,
            "active_lower": self.active_lower,
            "active_upper": self.active_upper
            if self.upper_index is None
            else f"{self.active_upper}({self.upper_index})",
        }


def _sum(seq: Sequence[float], lo: int, hi: int) -> float:
    """Sum of seq[lo..hi], 1-based inclusive; zero when lo > hi."""
    if lo > hi:
        return 0.0
    return float(sum(seq[lo - 1 : hi]))


def _bounds(
    next_row: Sequence[float],
    suffix_sum: float,
    top: int,
    mu: Sequence[float],
    n: int,
    k: int,
    tol: Tolerances,
) -> IntervalBounds:
    def beta(m: int) -> float:
        return float(next_row[m - 1]) if m <= len(next_row) else 0.0

    interlace_lo = beta(k + 1)
    budget_lo = _sum(next_row, k, top) - suffix_sum - float(mu[n - 1])
    if interlace_lo >= budget_lo:
        A, lower = interlace_lo, INTERLACING
    else:
        A, lower = budget_lo, TRACE_BUDGET

    B, upper, index = beta(k), INTERLACING, None
    for l in range(1, k + 1):
        term = _sum(mu, l, n - 1) - _sum(next_row, l + 1, k) - suffix_sum
        if term < B:
            B, upper, index = term, MAJORIZATION, l

    if A > B + tol.feas_tol:
        raise InconsistentPrefixError(
            f"empty interval for lambda_{{{n - 1};{k}}}: A={A!r} > B={B!r}; "
            "the entries already chosen lie outside their own bounds or the data is infeasible"
        )
    logger.debug("bounds n=%d k=%d A=%r (%s) B=%r (%s %s)", n, k, A, lower, B, upper, index)
    return IntervalBounds(A, B, lower, upper, index)


def _check_indices(n: int, k: int, suffix_len: int, expected_suffix: int):
    if not 1 <= k <= n - 1:
        raise UsageError(f"k must lie in [1, n-1] = [1, {n - 1}], got {k}")
    if suffix_len != expected_suffix:
        raise UsageError(f"expected {expected_suffix} already-chosen entries to the right of k={k}, got {suffix_len}")


def inner_bounds(
    next_row: Sequence[float],
    chosen_suffix: Sequence[float],
    mu: Sequence[float],
    n: int,
    k: int,
    tol: Tolerances | None = None,
) -> IntervalBounds:
    """Bounds on lambda_{n-1;k} for inner eigensteps.

    next_row is lambda_{n;1..n}; chosen_suffix is lambda_{n-1;k+1..n-1}.
    """
    tol = tol or Tolerances()
    if len(next_row) != n:
        raise UsageError(f"inner row n={n} must have {n} entries, got {len(next_row)}")
    _check_indices(n, k, len(chosen_suffix), n - 1 - k)
    if len(mu) < n:
        raise UsageError(f"need at least n={n} lengths, got {len(mu)}")
    return _bounds(next_row, float(sum(chosen_suffix)), n, mu, n, k, tol)


def outer_bounds(
    next_row: Sequence[float],
    chosen_suffix: Sequence[float],
    mu: Sequence[float],
    n: int,
    k: int,
    tol: Tolerances | None = None,
) -> IntervalBounds:
    """Bounds on lambda_{n-1;k} for outer eigensteps (rows of length M, k <= min(n-1, M)).

    next_row is lambda_{n;1..M} with lambda_{n;M+1} = 0; chosen_suffix is
    lambda_{n-1;k+1..M}. Entries with k > n-1 are zero and never bounded here.
    """
    tol = tol or Tolerances()
    M = len(next_row)
    if k > M:
        raise UsageError(f"k={k} exceeds the row length M={M}")
    _check_indices(n, k, len(chosen_suffix), M - k)
    if len(mu) < n:
        raise UsageError(f"need at least n={n} lengths, got {len(mu)}")
    return _bounds(next_row, float(sum(chosen_suffix)), M, mu, n, k, tol)
