"""Brute-force checks for the interval bounds at tiny sizes.

Two independent walks over a grid of step h:

* enumeration fills each row of a table from the definition alone (interlacing
  ranges plus the trace identity) and keeps whatever passes validate_inner;
* the sequential walk fills entries from inner_bounds.

Every enumerated table must sit inside its own sequential intervals, every
sequential table must be valid, and the two sets must agree up to the grid's
discretization slack.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.errors import InconsistentPrefixError, UsageError
from core.majorization import LengthSequence, Spectrum, majorizes
from core.numeric import Tolerances
from eigensteps.bounds import inner_bounds
from eigensteps.sampling import construction_order, table_bounds
from eigensteps.tables import InnerEigenstepTable, validate_inner

logger = logging.getLogger(__name__)

MAX_ORACLE_N = 6


@dataclass(frozen=True)
class GridSpec:
    step: float = 1.0 / 32
    max_N: int = 5

    def __post_init__(self):
        if not self.step > 0:
            raise UsageError(f"grid step must be positive, got {self.step!r}")
        if not 1 <= self.max_N <= MAX_ORACLE_N:
            raise UsageError(f"grid max_N must lie in [1, {MAX_ORACLE_N}], got {self.max_N}")


@dataclass
class OracleReport:
    enumerated: list[InnerEigenstepTable] = field(default_factory=list)
    sequential: list[InnerEigenstepTable] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)
    # (row, m) -> (min, max) of lambda_{row;m} over the enumerated tables
    entry_ranges: dict[tuple[int, int], tuple[float, float]] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations

    def free_ranges(self, tol: Tolerances | None = None) -> dict[tuple[int, int], tuple[float, float]]:
        tol = tol or Tolerances()
        return {key: r for key, r in self.entry_ranges.items() if r[1] - r[0] > tol.feas_tol}

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "violations": list(self.violations),
            "enumerated": len(self.enumerated),
            "sequential": len(self.sequential),
            "entry_ranges": {f"{r},{m}": list(v) for (r, m), v in sorted(self.entry_ranges.items())},
        }


def _candidates(lo: float, hi: float, h: float, tol: Tolerances) -> list[float]:
    """Grid points of [lo, hi] plus both ends; a single point when the range is degenerate."""
    if hi < lo - tol.feas_tol:
        return []
    if hi - lo <= tol.feas_tol:
        return [lo]
    first = math.ceil((lo - tol.feas_tol) / h)
    last = math.floor((hi + tol.feas_tol) / h)
    points = sorted({lo, hi, *(min(max(j * h, lo), hi) for j in range(first, last + 1))})
    out = [points[0]]
    for p in points[1:]:
        if p - out[-1] > tol.feas_tol:
            out.append(p)
    return out


def _rows_below(above: tuple[float, ...], mu, grid: GridSpec, tol: Tolerances):
    """Every grid row of length n-1 that interlaces under `above` and carries the right trace."""
    n = len(above)
    target = float(sum(mu[: n - 1]))
    # entries k = 2..n-1 range over [lambda_{n;k+1}, lambda_{n;k}]; entry 1 is forced by the trace
    choices = [_candidates(above[k], above[k - 1], grid.step, tol) for k in range(2, n)]
    for rest in itertools.product(*choices):
        first = target - sum(rest)
        if above[1] - tol.feas_tol <= first <= above[0] + tol.feas_tol:
            yield (first, *rest)


def enumerate_valid_tables(
    lam, mu, grid: GridSpec | None = None, tol: Tolerances | None = None
) -> list[InnerEigenstepTable]:
    grid = grid or GridSpec()
    tol = tol or Tolerances()
    lam = Spectrum.of(lam, tol)
    mu = LengthSequence.of(mu, tol)
    N = len(lam)
    if N > grid.max_N:
        raise UsageError(f"oracle enumeration is limited to N <= {grid.max_N}, got N={N}")
    if not majorizes(lam, mu, tol).holds:
        return []

    found: list[InnerEigenstepTable] = []

    def descend(rows: list[tuple[float, ...]]):
        above = rows[-1]
        if len(above) == 1:
            table = InnerEigenstepTable(tuple(reversed(rows)), tuple(lam), tuple(mu))
            if validate_inner(table, tol).holds:
                found.append(table)
            return
        for row in _rows_below(above, mu, grid, tol):
            descend(rows + [row])

    descend([tuple(lam)])
    logger.info("enumerated %d valid tables for N=%d at h=%r", len(found), N, grid.step)
    return found


def _sequential_tables(lam, mu, grid: GridSpec, tol: Tolerances, violations: list[str]):
    N = len(lam)
    order = construction_order(N)
    out: list[InnerEigenstepTable] = []

    def walk(i: int, rows: dict[int, tuple[float, ...]], chosen: list[float]):
        if i == len(order):
            out.append(InnerEigenstepTable(tuple(rows[n] for n in range(1, N + 1)), tuple(lam), tuple(mu)))
            return
        n, k = order[i]
        above = rows[n]
        try:
            b = inner_bounds(above, chosen, mu, n, k, tol)
        except InconsistentPrefixError as e:
            violations.append(f"sequential walk hit an empty interval: {e}")
            return
        if b.degenerate(tol):
            values = [min(b.A, above[k - 1])]
        else:
            values = _candidates(b.A, b.B, grid.step, tol)
        for v in values:
            if k == 1:
                walk(i + 1, {**rows, n - 1: (v, *chosen)}, [])
            else:
                walk(i + 1, rows, [v, *chosen])

    walk(0, {N: tuple(lam)}, [])
    return out


def _flatten(table: InnerEigenstepTable) -> np.ndarray:
    return np.array([v for n in range(1, table.N) for v in table.row(n)], dtype=float)


def _unmatched(source: list[InnerEigenstepTable], target: list[InnerEigenstepTable], slack: float) -> int:
    if not source:
        return 0
    if not target:
        return len(source)
    tgt = np.stack([_flatten(t) for t in target])
    missing = 0
    for table in source:
        distance = np.max(np.abs(tgt - _flatten(table)), axis=1, initial=0.0)
        if distance.min() > slack:
            missing += 1
    return missing


def check_bounds_against_oracle(
    lam, mu, grid: GridSpec | None = None, tol: Tolerances | None = None
) -> OracleReport:
    grid = grid or GridSpec()
    tol = tol or Tolerances()
    report = OracleReport()
    report.enumerated = enumerate_valid_tables(lam, mu, grid, tol)
    lam = Spectrum.of(lam, tol)
    mu = LengthSequence.of(mu, tol)
    if not majorizes(lam, mu, tol).holds:
        return report
    N = len(lam)

    for idx, table in enumerate(report.enumerated):
        try:
            bounds = table_bounds(table, tol)
        except InconsistentPrefixError as e:
            report.violations.append(f"enumerated table {idx}: {e}")
            continue
        for (n, k), b in bounds.items():
            value = table.value(n - 1, k)
            if not b.contains(value, tol.feas_tol):
                report.violations.append(
                    f"enumerated table {idx}: lambda_{{{n - 1};{k}}}={value!r} outside [{b.A!r}, {b.B!r}]"
                )

    report.sequential = _sequential_tables(lam, mu, grid, tol, report.violations)
    for idx, table in enumerate(report.sequential):
        check = validate_inner(table, tol)
        if not check.holds:
            report.violations.append(f"sequential table {idx} is invalid: {check.summary()}")

    slack = tol.feas_tol + grid.step * N
    for label, source, target in (
        ("enumerated", report.enumerated, report.sequential),
        ("sequential", report.sequential, report.enumerated),
    ):
        missing = _unmatched(source, target, slack)
        if missing:
            report.violations.append(f"{missing} {label} tables have no counterpart within {slack!r}")

    for table in report.enumerated:
        for n in range(1, N):
            for m, v in enumerate(table.row(n), start=1):
                lo, hi = report.entry_ranges.get((n, m), (v, v))
                report.entry_ranges[(n, m)] = (min(lo, v), max(hi, v))

    logger.info(
        "oracle N=%d h=%r: %d enumerated, %d sequential, %d violations",
        N, grid.step, len(report.enumerated), len(report.sequential), len(report.violations),
    )
    return report
