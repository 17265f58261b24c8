from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class VerificationReport:
    """Residual of every contract check next to the limit it is held to.

    A check passes when its residual is finite and within its limit.
    """

    residuals: dict[str, float]
    limits: dict[str, float]
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return not self.violations()

    def violations(self) -> list[str]:
        bad = []
        for name, value in self.residuals.items():
            if not math.isfinite(value) or value > self.limits[name]:
                bad.append(name)
        return bad

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "residuals": dict(self.residuals),
            "limits": dict(self.limits),
            "violations": self.violations(),
            **({"details": self.details} if self.details else {}),
        }

    def summary(self) -> str:
        parts = [f"{k}={v:.3g} (<= {self.limits[k]:.0e})" for k, v in self.residuals.items()]
        return ("ok: " if self.holds else "FAILED: ") + ", ".join(parts)
