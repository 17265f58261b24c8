"""Inner and outer eigenstep tables, their validators, and the zero-padding
correspondence between them.

Inner tables hold Gram-matrix spectra (row n has n entries, n = 1..N); outer
tables hold frame-operator spectra (every row has M entries, n = 0..N). Rows are
stored n ascending, entries m ascending, matching the JSON layout.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ParseError, UsageError
from core.numeric import Tolerances
from core.report import VerificationReport

logger = logging.getLogger(__name__)


def _floats(values) -> tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class InnerEigenstepTable:
    rows: tuple[tuple[float, ...], ...]
    lam: tuple[float, ...]
    mu: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(_floats(r) for r in self.rows))
        object.__setattr__(self, "lam", _floats(self.lam))
        object.__setattr__(self, "mu", _floats(self.mu))
        N = len(self.mu)
        if len(self.lam) != N or len(self.rows) != N:
            raise UsageError(
                f"inner table needs N rows and length-N lam/mu, got "
                f"{len(self.rows)} rows, |lam|={len(self.lam)}, |mu|={N}"
            )
        for n, row in enumerate(self.rows, start=1):
            if len(row) != n:
                raise UsageError(f"inner table row {n} must have {n} entries, has {len(row)}")

    @property
    def N(self) -> int:
        return len(self.mu)

    def row(self, n: int) -> tuple[float, ...]:
        return self.rows[n - 1]

    def value(self, n: int, m: int) -> float:
        return self.rows[n - 1][m - 1]

    def to_dict(self) -> dict:
        return {
            "kind": "inner",
            "N": self.N,
            "M": self.N,
            "lam": list(self.lam),
            "mu": list(self.mu),
            "rows": [list(r) for r in self.rows],
        }


@dataclass(frozen=True)
class OuterEigenstepTable:
    rows: tuple[tuple[float, ...], ...]
    lam: tuple[float, ...]
    mu: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(_floats(r) for r in self.rows))
        object.__setattr__(self, "lam", _floats(self.lam))
        object.__setattr__(self, "mu", _floats(self.mu))
        if len(self.rows) != len(self.mu) + 1:
            raise UsageError(f"outer table needs N+1 rows, got {len(self.rows)} for N={len(self.mu)}")
        for n, row in enumerate(self.rows):
            if len(row) != self.M:
                raise UsageError(f"outer table row {n} must have M={self.M} entries, has {len(row)}")

    @property
    def M(self) -> int:
        return len(self.lam)

    @property
    def N(self) -> int:
        return len(self.mu)

    def row(self, n: int) -> tuple[float, ...]:
        return self.rows[n]

    def to_dict(self) -> dict:
        return {
            "kind": "outer",
            "N": self.N,
            "M": self.M,
            "lam": list(self.lam),
            "mu": list(self.mu),
            "rows": [list(r) for r in self.rows],
        }


def table_from_dict(data: dict) -> InnerEigenstepTable | OuterEigenstepTable:
    try:
        rows, lam, mu = data["rows"], data["lam"], data["mu"]
    except (KeyError, TypeError) as e:
        raise ParseError(f"eigenstep table JSON is missing a field: {e}")
    for name, value in (("rows", rows), ("lam", lam), ("mu", mu)):
        if not isinstance(value, list):
            raise ParseError(f"eigenstep table field {name!r} must be a list, got {type(value).__name__}")
    if not all(isinstance(r, list) for r in rows):
        raise ParseError("eigenstep table rows must be lists of numbers")
    kind = data.get("kind")
    if kind is None:
        kind = "outer" if len(rows) == len(mu) + 1 else "inner"
    cls = {"inner": InnerEigenstepTable, "outer": OuterEigenstepTable}.get(kind) if isinstance(kind, str) else None
    if cls is None:
        raise ParseError(f"unknown eigenstep table kind {kind!r}")
    try:
        return cls(rows, lam, mu)
    except (TypeError, ValueError) as e:
        raise ParseError(f"eigenstep table holds a non-numeric entry: {e}")


def interlacing_defect(inner, outer, equal_length: bool = False) -> tuple[float, int]:
    """Worst violation of inner ⊑ outer, and the (1-based) entry where it happens.

    Shorter form (len(outer) == len(inner) + 1): outer[m+1] <= inner[m] <= outer[m].
    Equal-length form additionally drops the missing outer[M+1] bound.
    """
    a, b = np.asarray(inner, float), np.asarray(outer, float)
    if a.size == 0:
        return 0.0, 0
    upper = a - b[: a.size]
    if equal_length:
        lower = np.append(b[1:] - a[:-1], -np.inf)
    else:
        lower = b[1 : a.size + 1] - a
    worst = np.maximum(np.maximum(upper, lower), 0.0)
    m = int(np.argmax(worst))
    return float(worst[m]), m + 1


def validate_inner(table: InnerEigenstepTable, tol: Tolerances | None = None) -> VerificationReport:
    tol = tol or Tolerances()
    N = table.N
    final = float(np.max(np.abs(np.subtract(table.row(N), table.lam)))) if N else 0.0
    inter, where = 0.0, None
    for n in range(2, N + 1):
        d, m = interlacing_defect(table.row(n - 1), table.row(n))
        if d > inter:
            inter, where = d, [n, m]
    prefix = np.cumsum(table.mu)
    trace = max((abs(sum(table.row(n)) - prefix[n - 1]) for n in range(1, N + 1)), default=0.0)
    limits = dict.fromkeys(("final_row", "interlacing", "trace"), tol.feas_tol)
    details = {"interlacing_at": where} if where else {}
    return VerificationReport({"final_row": final, "interlacing": inter, "trace": float(trace)}, limits, details)


def validate_outer(table: OuterEigenstepTable, tol: Tolerances | None = None) -> VerificationReport:
    tol = tol or Tolerances()
    N, M = table.N, table.M
    zero = float(np.max(np.abs(table.row(0)))) if M else 0.0
    final = float(np.max(np.abs(np.subtract(table.row(N), table.lam)))) if M else 0.0
    inter, where = 0.0, None
    for n in range(1, N + 1):
        d, m = interlacing_defect(table.row(n - 1), table.row(n), equal_length=True)
        if d > inter:
            inter, where = d, [n, m]
    prefix = np.cumsum(table.mu)
    trace = max((abs(sum(table.row(n)) - prefix[n - 1]) for n in range(1, N + 1)), default=0.0)
    limits = dict.fromkeys(("zero_row", "final_row", "interlacing", "trace"), tol.feas_tol)
    details = {"interlacing_at": where} if where else {}
    residuals = {"zero_row": zero, "final_row": final, "interlacing": inter, "trace": float(trace)}
    return VerificationReport(residuals, limits, details)


def inner_to_outer(table: InnerEigenstepTable, M: int, tol: Tolerances | None = None) -> OuterEigenstepTable:
    """Zero-pad (or truncate the zero tail of) every inner row to length M and prepend row 0."""
    tol = tol or Tolerances()
    N = table.N
    if not 1 <= M <= max(N, 1):
        raise UsageError(f"outer dimension M must lie in [1, N={N}], got {M}")
    for n, row in enumerate(table.rows, start=1):
        tail = row[M:]
        if tail and max(abs(v) for v in tail) > tol.feas_tol:
            raise UsageError(f"inner row {n} is not supported on the first M={M} entries")
    rows = [(0.0,) * M]
    for row in table.rows:
        head = row[:M]
        rows.append(tuple(head) + (0.0,) * (M - len(head)))
    lam = table.lam[:M]
    return OuterEigenstepTable(tuple(rows), lam, table.mu)


def outer_to_inner(table: OuterEigenstepTable) -> InnerEigenstepTable:
    N, M = table.N, table.M
    rows = []
    for n in range(1, N + 1):
        row = table.row(n)
        rows.append(tuple(row[: min(n, M)]) + (0.0,) * max(0, n - M))
    lam = tuple(table.lam[:N]) + (0.0,) * max(0, N - M)
    return InnerEigenstepTable(tuple(rows), lam, table.mu)
