"""Sequential construction of eigenstep tables.

Entries are chosen one at a time in the fixed order n = N..2, k = n-1..1, each
from its interval [A, B] given everything chosen before it. A chooser decides
where in the interval to land; the t-vector parametrization is the chooser
A + t (B - A), which reaches every valid table but is not a uniform sampler of
the polytope.
"""
from __future__ import annotations

import logging
from typing import Callable, Sequence

import numpy as np

from core.errors import InfeasibleError, UsageError
from core.majorization import LengthSequence, Spectrum, majorizes, zero_pad
from core.numeric import Tolerances
from eigensteps.bounds import IntervalBounds, inner_bounds, outer_bounds
from eigensteps.tables import InnerEigenstepTable, OuterEigenstepTable

logger = logging.getLogger(__name__)

Chooser = Callable[[IntervalBounds, int, int], float]


def num_coordinates(N: int) -> int:
    return N * (N - 1) // 2


def coordinate_index(N: int, n: int, k: int) -> int:
    """Position of lambda_{n-1;k} in the construction order."""
    return (N * (N - 1) - n * (n - 1)) // 2 + (n - 1 - k)


def construction_order(N: int) -> list[tuple[int, int]]:
    return [(n, k) for n in range(N, 1, -1) for k in range(n - 1, 0, -1)]


def lower_chooser(bounds: IntervalBounds, n: int, k: int) -> float:
    return bounds.A


def upper_chooser(bounds: IntervalBounds, n: int, k: int) -> float:
    return bounds.B


def midpoint_chooser(bounds: IntervalBounds, n: int, k: int) -> float:
    return 0.5 * (bounds.A + bounds.B)


def interpolating_chooser(t: Sequence[float], N: int) -> Chooser:
    t = np.asarray(t, dtype=float)

    def choose(bounds: IntervalBounds, n: int, k: int) -> float:
        s = float(t[coordinate_index(N, n, k)])
        return bounds.A + s * (bounds.B - bounds.A)

    return choose


def uniform_chooser(rng: np.random.Generator) -> Chooser:
    def choose(bounds: IntervalBounds, n: int, k: int) -> float:
        s = rng.uniform()
        return bounds.A + s * (bounds.B - bounds.A)

    return choose


def _settle(bounds: IntervalBounds, proposed: float, ceiling: float, tol: Tolerances) -> float:
    # degenerate: stay on the exact lower value, capped by the interlacing ceiling
    if bounds.degenerate(tol):
        return min(bounds.A, ceiling)
    return min(max(float(proposed), bounds.A), bounds.B)


def _feasible(lam, mu, tol: Tolerances) -> tuple[Spectrum, LengthSequence]:
    lam = Spectrum.of(lam, tol)
    mu = LengthSequence.of(mu, tol)
    report = majorizes(lam, mu, tol)
    if not report.holds:
        raise InfeasibleError(
            f"spectrum does not majorize the lengths (worst partial slack {report.worst_partial_slack:.3g}, "
            f"trace gap {report.trace_gap:.3g})",
            report,
        )
    return lam, mu


def build_inner(lam, mu, chooser: Chooser, tol: Tolerances | None = None) -> InnerEigenstepTable:
    tol = tol or Tolerances()
    lam, mu = _feasible(lam, mu, tol)
    N = len(lam)
    rows: dict[int, tuple[float, ...]] = {N: tuple(lam)}
    for n in range(N, 1, -1):
        above = rows[n]
        chosen: list[float] = []  # lambda_{n-1;k+1..n-1}
        for k in range(n - 1, 0, -1):
            bounds = inner_bounds(above, chosen, mu, n, k, tol)
            value = _settle(bounds, chooser(bounds, n, k), above[k - 1], tol)
            chosen.insert(0, value)
        rows[n - 1] = tuple(chosen)
    return InnerEigenstepTable(tuple(rows[n] for n in range(1, N + 1)), tuple(lam), tuple(mu))


def _check_t(t, N: int) -> np.ndarray:
    t = np.asarray(t, dtype=float).ravel()
    expected = num_coordinates(N)
    if t.size != expected:
        raise UsageError(f"t-vector must have N(N-1)/2 = {expected} entries, got {t.size}")
    if t.size and (not np.all(np.isfinite(t)) or t.min() < 0.0 or t.max() > 1.0):
        raise UsageError("t-vector entries must lie in [0, 1]")
    return t


def parametrize_inner(lam, mu, t, tol: Tolerances | None = None) -> InnerEigenstepTable:
    """The table at t in the cube [0,1]^{N(N-1)/2}; each entry is A + t (B - A)."""
    N = len(mu)
    t = _check_t(t, N)
    return build_inner(lam, mu, interpolating_chooser(t, N), tol)


def sample_inner(lam, mu, rng: np.random.Generator, tol: Tolerances | None = None) -> InnerEigenstepTable:
    """Exploration sampler: every coordinate uniform on its own interval."""
    return parametrize_inner(lam, mu, rng.random(num_coordinates(len(mu))), tol)


def build_outer(
    lam, mu, chooser: Chooser, M: int | None = None, tol: Tolerances | None = None
) -> OuterEigenstepTable:
    """build_inner for the outer form.

    lam lists the frame-operator eigenvalues; entries past M must be zero and are dropped.
    """
    tol = tol or Tolerances()
    mu = LengthSequence.of(mu, tol)
    N = len(mu)
    lam = Spectrum.of(lam, tol)
    M = len(lam) if M is None else M
    if not 1 <= M <= N:
        raise UsageError(f"need 1 <= M <= N, got M={M}, N={N}")
    if any(abs(v) > tol.feas_tol for v in lam[M:]):
        raise UsageError(f"spectrum has more than M={M} nonzero entries")
    lam_m = Spectrum.of(tuple(lam)[:M] + (0.0,) * max(0, M - len(lam)), tol)
    _feasible(zero_pad(lam_m, N), mu, tol)
    rows: dict[int, tuple[float, ...]] = {N: tuple(lam_m), 0: (0.0,) * M}
    for n in range(N, 1, -1):
        above = rows[n]
        row = [0.0] * M
        for k in range(min(n - 1, M), 0, -1):
            bounds = outer_bounds(above, row[k:], mu, n, k, tol)
            row[k - 1] = _settle(bounds, chooser(bounds, n, k), above[k - 1], tol)
        rows[n - 1] = tuple(row)
    return OuterEigenstepTable(tuple(rows[n] for n in range(N + 1)), tuple(lam_m), tuple(mu))


def parametrize_outer(lam, mu, M: int, t, tol: Tolerances | None = None) -> OuterEigenstepTable:
    """Outer-form counterpart of parametrize_inner; t keeps the inner length and order."""
    N = len(mu)
    t = _check_t(t, N)
    return build_outer(lam, mu, interpolating_chooser(t, N), M, tol)


def table_bounds(table: InnerEigenstepTable, tol: Tolerances | None = None) -> dict[tuple[int, int], IntervalBounds]:
    """Recompute every interval along the table's own entries."""
    tol = tol or Tolerances()
    out = {}
    for n in range(table.N, 1, -1):
        below = table.row(n - 1)
        for k in range(n - 1, 0, -1):
            out[(n, k)] = inner_bounds(table.row(n), below[k:], table.mu, n, k, tol)
    return out


def free_coordinates(table: InnerEigenstepTable, tol: Tolerances | None = None) -> list[tuple[int, int]]:
    """(n, k) pairs whose entry lambda_{n-1;k} had a non-degenerate interval."""
    tol = tol or Tolerances()
    return [nk for nk, b in table_bounds(table, tol).items() if not b.degenerate(tol)]
