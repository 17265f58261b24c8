"""Command-line front end.

    python main.py check      --spectrum lam.txt --lengths mu.txt
    python main.py eigensteps --spectrum lam.txt --lengths mu.txt --mode random --seed 7
    python main.py frame      --spectrum lam.txt --lengths mu.txt --dim 3 --format csv
    python main.py schur-horn --spectrum lam.txt --diagonal d.txt --alpha 0.5
    python main.py verify     --matrix F.json --spectrum lam.txt --lengths mu.txt --kind frame

Artifacts go to --out or stdout; run notes and errors go to stderr.
Exit codes: 0 success, 1 infeasible or failed verification, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from core.config import log_level
from core.errors import EigenstepError
from frames.io import format_matrix, read_matrix, read_sequence, read_table
from graph.workflow import TOOL_GOALS, call_tool, execute
from stages.steps import MODES
from stages.verify import KINDS

logger = logging.getLogger(__name__)

GOAL_TOOLS = {goal: tool for tool, goal in TOOL_GOALS.items()}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--tol-eq", type=float, help="root-grouping tolerance (eq_tol)")
    p.add_argument("--tol-feas", type=float, help="feasibility tolerance (feas_tol); EIGENSTEPS_TOL sets the default")
    p.add_argument("--out", help="write the artifact here instead of stdout")
    p.add_argument("--remote", nargs="?", const="", metavar="URL", help="run on a tool server (default EIGENSTEPS_SERVER)")
    p.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs on stderr")


def _sampling(p: argparse.ArgumentParser):
    p.add_argument("--mode", choices=MODES, default="topkill")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t", dest="t_file", metavar="FILE", help="t-vector file for --mode t-vector")
    p.add_argument("--count", type=int, default=1, help="number of samples (mode random)")
    p.add_argument("--probe", choices=("canonical", "random"), default="canonical",
                   help="direction chosen inside each eigenspace")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eigensteps", description="Frames and Schur-Horn matrices via eigensteps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="does the spectrum majorize the lengths?")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--lengths", required=True)
    _common(p)

    p = sub.add_parser("eigensteps", help="build an inner eigenstep table")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--lengths", required=True)
    _sampling(p)
    _common(p)

    p = sub.add_parser("frame", help="build an M x N frame")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--lengths", required=True)
    p.add_argument("--dim", type=int, help="ambient dimension M (default: length of the spectrum file)")
    p.add_argument("--eigensteps", help="use this eigenstep table instead of building one")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _sampling(p)
    _common(p)

    p = sub.add_parser("schur-horn", help="build a symmetric matrix with given spectrum and diagonal")
    p.add_argument("--spectrum", required=True)
    p.add_argument("--diagonal", required=True)
    p.add_argument("--alpha", type=float, help="shift, at most the smallest eigenvalue (default: equal to it)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    _sampling(p)
    _common(p)

    p = sub.add_parser("verify", help="check a matrix against a spectrum and lengths or diagonal")
    p.add_argument("--matrix", required=True)
    p.add_argument("--spectrum", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lengths")
    group.add_argument("--diagonal")
    p.add_argument("--kind", choices=KINDS, default="frame")
    p.add_argument("--eigensteps", help="also check partial spectra against this table (kind frame)")
    _common(p)
    return parser


def payload_from_args(args: argparse.Namespace) -> dict:
    """Read every referenced file into a JSON-compatible job payload."""
    payload: dict = {"lam": list(read_sequence(args.spectrum, "spectrum"))}
    other = getattr(args, "lengths", None) or getattr(args, "diagonal", None)
    payload["mu"] = list(read_sequence(other, "lengths" if getattr(args, "lengths", None) else "diagonal"))
    tol = {"eq_tol": args.tol_eq, "feas_tol": args.tol_feas}
    payload["tol"] = {k: v for k, v in tol.items() if v is not None}
    for key in ("mode", "seed", "count", "probe", "dim", "alpha", "kind"):
        value = getattr(args, key, None)
        if value is not None:
            payload[key] = value
    if getattr(args, "t_file", None):
        payload["t"] = list(read_sequence(args.t_file, "t-vector", sorted_check=False))
    if getattr(args, "eigensteps", None):
        payload["table"] = read_table(args.eigensteps).to_dict()
    if getattr(args, "matrix", None):
        entries = read_matrix(args.matrix)
        payload["matrix"] = {"M": entries.shape[0], "N": entries.shape[1], "entries": entries.tolist()}
    return payload


def _matrices(result: dict, fmt: str) -> str | None:
    matrices = result.get("matrices")
    if not matrices:
        return None
    arrays = [np.array(m["entries"], dtype=float).reshape(m["M"], m["N"]) for m in matrices]
    if len(arrays) == 1:
        return format_matrix(arrays[0], fmt)
    if fmt == "json":
        return json.dumps([{"M": a.shape[0], "N": a.shape[1], "entries": a.tolist()} for a in arrays]) + "\n"
    return "\n".join(format_matrix(a, fmt) for a in arrays)


def render(command: str, args: argparse.Namespace, result: dict) -> str | None:
    """The artifact for stdout/--out, or None when the run produced nothing to emit."""
    if command == "check":
        return json.dumps(result["report"]) + "\n" if "report" in result else None
    if command == "eigensteps":
        tables = result.get("tables")
        if not tables:
            return None
        return json.dumps(tables[0] if len(tables) == 1 else tables) + "\n"
    if command in ("frame", "schur-horn"):
        return _matrices(result, args.format)
    if "verification" in result:
        reports = result["verification"]
        return json.dumps(reports[0] if len(reports) == 1 else reports) + "\n"
    return None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        logging.basicConfig(level=log_level(args.verbose), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        payload = payload_from_args(args)
    except EigenstepError as e:
        print(f"error ({e.code}): {e}", file=sys.stderr)
        return e.exit_code

    if args.remote is not None:
        logger.info("sending %s job to %s", args.command, args.remote or "EIGENSTEPS_SERVER")
        result = call_tool(GOAL_TOOLS[args.command], payload, args.remote or None)
    else:
        result = execute(args.command, payload)

    for line in result.get("notes", []):
        print(line, file=sys.stderr)
    if not result.get("ok") and "error" in result:
        err = result["error"]
        print(f"error ({err.get('code')}): {err.get('message')}", file=sys.stderr)

    text = render(args.command, args, result)
    if text is not None:
        try:
            _emit(text, args.out)
        except OSError as e:
            print(f"error: cannot write {args.out!r}: {e.strerror or e}", file=sys.stderr)
            return 2
    return int(result.get("exit_code", 1))
