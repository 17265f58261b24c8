from __future__ import annotations

from typing import Any


class EigenstepError(Exception):
    """Base error. `code` is stable across releases; `exit_code` is what the CLI returns."""

    code = "error"
    exit_code = 1

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": str(self)}
        if self.report is not None and hasattr(self.report, "to_dict"):
            out["report"] = self.report.to_dict()
        return out


class UsageError(EigenstepError):
    code = "usage"
    exit_code = 2


class ParseError(UsageError):
    code = "parse"


class ContractViolation(EigenstepError):
    code = "contract"
    exit_code = 2


class InfeasibleError(EigenstepError):
    code = "infeasible"
    exit_code = 1


class InterlacingViolation(InfeasibleError):
    code = "interlacing"


class InconsistentPrefixError(InfeasibleError):
    code = "inconsistent_prefix"


class GroupingToleranceError(InfeasibleError):
    code = "grouping"
