"""Symmetric matrices with prescribed spectrum and diagonal.

Shift both sequences by alpha so the spectrum becomes nonnegative, build an
N x N frame for the shifted data, and return F^T F + alpha I.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import ContractViolation, InfeasibleError, UsageError
from core.majorization import check_nonincreasing, majorizes
from core.numeric import Tolerances, spectrum_of, symmetry_defect
from core.report import VerificationReport
from eigensteps.sampling import parametrize_inner
from eigensteps.tables import inner_to_outer
from eigensteps.topkill import topkill_table
from frames.framebuild import ProbePolicy, build_frame

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SelfAdjointMatrix:
    entries: np.ndarray
    tol: Tolerances = Tolerances()

    def __post_init__(self):
        G = np.array(self.entries, dtype=float)
        if G.ndim != 2 or G.shape[0] != G.shape[1]:
            raise ContractViolation(f"a self-adjoint matrix must be square, got shape {G.shape}")
        defect = symmetry_defect(G)
        if defect > self.tol.feas_tol:
            raise ContractViolation(f"matrix is not symmetric (max |G - G^T| = {defect:.3g})")
        G.setflags(write=False)
        object.__setattr__(self, "entries", G)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries).copy()

    def to_dict(self) -> dict:
        return {"M": self.N, "N": self.N, "entries": self.entries.tolist()}


def build_schur_horn(
    lam_hat,
    mu_hat,
    alpha: float | None = None,
    t=None,
    probe_policy: ProbePolicy | None = None,
    tol: Tolerances | None = None,
) -> SelfAdjointMatrix:
    tol = tol or Tolerances()
    lam_hat = check_nonincreasing(lam_hat, tol, "spectrum", nonnegative=False)
    mu_hat = check_nonincreasing(mu_hat, tol, "diagonal", nonnegative=False)
    if lam_hat.size != mu_hat.size or lam_hat.size == 0:
        raise UsageError(f"spectrum and diagonal must have the same nonzero length, got {lam_hat.size} and {mu_hat.size}")
    report = majorizes(lam_hat, mu_hat, tol)
    if not report.holds:
        raise InfeasibleError(
            f"spectrum does not majorize the diagonal (worst partial slack {report.worst_partial_slack:.3g}, "
            f"trace gap {report.trace_gap:.3g})",
            report,
        )
    floor = float(lam_hat[-1])
    alpha = floor if alpha is None else float(alpha)
    if alpha > floor + tol.feas_tol:
        raise UsageError(f"alpha={alpha!r} exceeds the smallest eigenvalue {floor!r}")

    # the shifted data is nonnegative up to rounding
    lam = np.maximum(lam_hat - alpha, 0.0)
    mu = np.maximum(mu_hat - alpha, 0.0)
    N = lam.size
    table = topkill_table(lam, mu, tol) if t is None else parametrize_inner(lam, mu, t, tol)
    F = build_frame(inner_to_outer(table, N, tol), probe_policy, tol).entries
    G = F.T @ F + alpha * np.eye(N)
    logger.info("schur-horn N=%d alpha=%r", N, alpha)
    return SelfAdjointMatrix((G + G.T) / 2.0, tol)


def verify_schur_horn(G, lam_hat, mu_hat, tol: Tolerances | None = None) -> VerificationReport:
    tol = tol or Tolerances()
    G = G.entries if isinstance(G, SelfAdjointMatrix) else np.asarray(G, dtype=float)
    lam_hat = np.sort(np.asarray(lam_hat, dtype=float))[::-1]
    mu_hat = np.asarray(mu_hat, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] != lam_hat.size or mu_hat.size != lam_hat.size:
        raise UsageError(
            f"need an N x N matrix with N={lam_hat.size} eigenvalues and diagonal entries, "
            f"got shape {G.shape} and {mu_hat.size} diagonal entries"
        )
    residuals = {
        "symmetry": symmetry_defect(G),
        "spectrum": float(np.max(np.abs(spectrum_of(G) - lam_hat), initial=0.0)),
        "diagonal": float(np.max(np.abs(np.diag(G) - mu_hat), initial=0.0)),
    }
    limits = {"symmetry": tol.feas_tol, "spectrum": tol.spectrum_tol, "diagonal": tol.length_tol}
    return VerificationReport(residuals, limits)
