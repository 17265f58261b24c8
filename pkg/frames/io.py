"""Reading and writing sequences, matrices and eigenstep tables.

Sequences are a JSON array or one decimal per line, told apart by the first
non-blank character. Matrices are JSON {"M", "N", "entries"} or CSV rows.
"""
from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path

import numpy as np

from core.errors import ParseError, UsageError
from core.majorization import check_nonincreasing
from core.numeric import Tolerances
from eigensteps.tables import InnerEigenstepTable, OuterEigenstepTable, table_from_dict

logger = logging.getLogger(__name__)

FORMATS = ("json", "csv")


def _read(path: str | Path, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {what} file {str(path)!r}: {e.strerror or e}")


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    return float(value)


def parse_sequence(
    text: str,
    name: str = "sequence",
    sorted_check: bool = True,
    tol: Tolerances | None = None,
) -> tuple[float, ...]:
    tol = tol or Tolerances()
    body = text.strip()
    if body.startswith("["):
        try:
            data = json.loads(body)
        except json.JSONDecodeError as e:
            raise ParseError(f"{name}: invalid JSON array: {e.msg} at line {e.lineno}")
        if not isinstance(data, list):
            raise ParseError(f"{name}: expected a JSON array of numbers")
        values = [_number(v, f"{name}[{i}]") for i, v in enumerate(data)]
    else:
        values = []
        for lineno, line in enumerate(body.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParseError(f"{name}: line {lineno}: not a decimal number: {line!r}")
    if not values:
        raise ParseError(f"{name}: no values found")
    if sorted_check:
        try:
            check_nonincreasing(values, tol, name, nonnegative=False)
        except UsageError as e:
            raise ParseError(str(e))
    return tuple(values)


def read_sequence(path: str | Path, name: str = "sequence", sorted_check: bool = True, tol: Tolerances | None = None):
    return parse_sequence(_read(path, name), name, sorted_check, tol)


def matrix_from_dict(data) -> np.ndarray:
    try:
        M, N, entries = int(data["M"]), int(data["N"]), data["entries"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"matrix JSON needs integer M, N and entries: {e}")
    if M < 0 or N < 0:
        raise ParseError(f"matrix dimensions must be nonnegative, got M={M}, N={N}")
    if not isinstance(entries, list):
        raise ParseError(f"matrix entries must be a list, got {type(entries).__name__}")
    if entries and all(isinstance(r, list) for r in entries):
        rows = [[_number(v, f"entries[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(entries)]
        if len(rows) != M or any(len(r) != N for r in rows):
            raise ParseError(f"matrix entries do not form {M} rows of {N}")
        return np.array(rows, dtype=float).reshape(M, N)
    flat = [_number(v, f"entries[{i}]") for i, v in enumerate(entries)]
    if len(flat) != M * N:
        raise ParseError(f"flat matrix entries have length {len(flat)}, expected M*N = {M * N}")
    return np.array(flat, dtype=float).reshape(M, N)


def parse_matrix(text: str) -> np.ndarray:
    body = text.strip()
    if body.startswith("{"):
        try:
            return matrix_from_dict(json.loads(body))
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid matrix JSON: {e.msg} at line {e.lineno}")
    rows = []
    for lineno, line in enumerate(csv.reader(io.StringIO(body)), start=1):
        if not any(cell.strip() for cell in line):
            continue
        try:
            rows.append([float(v) for v in line])
        except ValueError:
            raise ParseError(f"matrix CSV line {lineno}: not a row of decimals")
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("matrix CSV rows are empty or ragged")
    return np.array(rows, dtype=float)


def read_matrix(path: str | Path) -> np.ndarray:
    return parse_matrix(_read(path, "matrix"))


def matrix_to_json(entries: np.ndarray) -> str:
    entries = np.asarray(entries, dtype=float)
    M, N = entries.shape
    return json.dumps({"M": M, "N": N, "entries": entries.tolist()}) + "\n"


def matrix_to_csv(entries: np.ndarray) -> str:
    entries = np.asarray(entries, dtype=float)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows([format(float(x), ".17g") for x in row] for row in entries)
    return buf.getvalue()


def format_matrix(entries: np.ndarray, fmt: str = "json") -> str:
    if fmt == "json":
        return matrix_to_json(entries)
    if fmt == "csv":
        return matrix_to_csv(entries)
    raise UsageError(f"unknown format {fmt!r}; choose one of {', '.join(FORMATS)}")


def parse_table(text: str) -> InnerEigenstepTable | OuterEigenstepTable:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid eigenstep table JSON: {e.msg} at line {e.lineno}")
    if not isinstance(data, dict):
        raise ParseError("eigenstep table JSON must be an object")
    return table_from_dict(data)


def read_table(path: str | Path) -> InnerEigenstepTable | OuterEigenstepTable:
    return parse_table(_read(path, "eigenstep table"))


def table_to_json(table: InnerEigenstepTable | OuterEigenstepTable) -> str:
    return json.dumps(table.to_dict()) + "\n"
