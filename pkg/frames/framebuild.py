"""Frame synthesis: turn an outer eigenstep table into frame vectors, one column at a time.

Column n+1 is split across the eigenspaces of F_n F_n^T. Its squared component
in the lambda-eigenspace is the negated limit of (x - lambda) p_{n+1}(x) / p_n(x),
where p_n has the roots of outer row n. The limit is evaluated on grouped root
multisets with the (x - lambda) factors cancelled, so no numerical limit is taken.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from core.errors import GroupingToleranceError, InfeasibleError, InterlacingViolation, UsageError
from core.majorization import as_array
from core.numeric import RootMultiset, Tolerances, eigh_descending, spectrum_of
from core.report import VerificationReport
from eigensteps.tables import OuterEigenstepTable, validate_outer

logger = logging.getLogger(__name__)

PROBE_FLOOR = 1e-8

# (orthonormal eigenspace basis as columns, eigenvalue, n) -> direction inside that eigenspace
ProbePolicy = Callable[[np.ndarray, float, int], np.ndarray]


@dataclass(frozen=True, eq=False)
class FrameMatrix:
    entries: np.ndarray

    def __post_init__(self):
        F = np.array(self.entries, dtype=float)
        if F.ndim != 2:
            raise UsageError(f"a frame is an M x N matrix, got shape {F.shape}")
        F.setflags(write=False)
        object.__setattr__(self, "entries", F)

    @property
    def M(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    def columns(self, n: int) -> np.ndarray:
        """F_n: the first n columns."""
        return self.entries[:, :n]

    def frame_operator(self, n: int | None = None) -> np.ndarray:
        F = self.entries if n is None else self.columns(n)
        return F @ F.T

    def gram(self) -> np.ndarray:
        return self.entries.T @ self.entries

    def squared_norms(self) -> np.ndarray:
        return np.sum(self.entries**2, axis=0)

    def to_dict(self) -> dict:
        return {"M": self.M, "N": self.N, "entries": self.entries.tolist()}


@dataclass(frozen=True)
class ProjectionWeights:
    """Weights for adding column n+1 to F_n: one (eigenvalue, multiplicity, weight) per distinct root of row n."""

    n: int
    entries: tuple[tuple[float, int, float], ...]

    @property
    def total(self) -> float:
        return float(sum(w for _, _, w in self.entries))

    def to_dict(self) -> dict:
        return {"n": self.n, "weights": [[v, a, w] for v, a, w in self.entries], "total": self.total}


@dataclass(frozen=True)
class FrameSynthesis:
    frame: FrameMatrix
    weights: tuple[ProjectionWeights, ...]


def _values(row) -> list[float]:
    return list(row.expand()) if isinstance(row, RootMultiset) else [float(v) for v in row]


def _shared_groups(p_values, q_values, tol: Tolerances) -> list[tuple[list[float], list[float]]]:
    """Group the roots of both rows together, chaining neighbours within eq_tol.

    Each group is (roots from row n, roots from row n+1), groups descending.
    """
    tagged = sorted([(v, 0) for v in p_values] + [(v, 1) for v in q_values], key=lambda t: -t[0])
    groups: list[tuple[list[float], list[float]]] = []
    last = None
    for v, side in tagged:
        if last is None or last - v > tol.eq_tol:
            groups.append(([], []))
        groups[-1][side].append(v)
        last = v
    return groups


def limit_weights(row_n, row_n1, tol: Tolerances | None = None, n: int = 0) -> ProjectionWeights:
    """Squared eigenspace components of f_{n+1}, from the roots of p_n (row_n) and p_{n+1} (row_n1)."""
    tol = tol or Tolerances()
    p_values, q_values = _values(row_n), _values(row_n1)
    if len(p_values) != len(q_values):
        raise UsageError(f"rows must have the same degree M, got {len(p_values)} and {len(q_values)}")
    groups = _shared_groups(p_values, q_values, tol)
    out = []
    for i, (p_roots, q_roots) in enumerate(groups):
        a, b = len(p_roots), len(q_roots)
        if a == 0:
            continue
        lam = float(np.mean(p_roots))
        if b >= a:
            out.append((lam, a, 0.0))
            continue
        if b < a - 1:
            raise InterlacingViolation(
                f"root {lam!r} drops from multiplicity {a} to {b} between rows {n} and {n + 1}; the limit diverges"
            )
        # the a-1 shared factors of (x - lam) cancel inside the group
        others = [g for j, g in enumerate(groups) if j != i]
        num = float(np.prod([lam - nu for _, qs in others for nu in qs]))
        den = float(np.prod([lam - nu for ps, _ in others for nu in ps]))
        w = -num / den
        if w < 0:
            if w < -tol.weight_clamp:
                raise InterlacingViolation(f"negative weight {w!r} at eigenvalue {lam!r} (row {n})")
            w = 0.0
        out.append((lam, a, w))
    weights = ProjectionWeights(n, tuple(out))
    logger.debug("weights n=%d: %r", n, weights.entries)
    return weights


def _unit_in(basis: np.ndarray, v: np.ndarray) -> np.ndarray | None:
    p = basis @ (basis.T @ v)
    norm = np.linalg.norm(p)
    return p / norm if norm >= PROBE_FLOOR else None


class CanonicalProbe:
    """Project e_1, e_2, ... onto the eigenspace and keep the first that does not vanish.

    The result depends on the eigenspace only, not on the eigenvector basis the solver returned.
    """

    def __call__(self, basis: np.ndarray, value: float, n: int) -> np.ndarray:
        M = basis.shape[0]
        for j in range(M):
            u = _unit_in(basis, np.eye(M)[:, j])
            if u is not None:
                return u
        return basis[:, 0]


class RandomProbe:
    """A Gaussian direction inside each eigenspace."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def __call__(self, basis: np.ndarray, value: float, n: int) -> np.ndarray:
        return basis @ self.rng.standard_normal(basis.shape[1])


def next_vector(
    F_n: FrameMatrix | np.ndarray,
    weights: ProjectionWeights,
    eig: tuple[np.ndarray, np.ndarray] | None = None,
    probe_policy: ProbePolicy | None = None,
    tol: Tolerances | None = None,
) -> np.ndarray:
    """f_{n+1} = sum over eigenvalues of sqrt(w) times a unit vector in that eigenspace of F_n F_n^T."""
    tol = tol or Tolerances()
    probe = probe_policy or CanonicalProbe()
    F = F_n.entries if isinstance(F_n, FrameMatrix) else np.asarray(F_n, dtype=float)
    M = F.shape[0]
    values, vectors = eig if eig is not None else eigh_descending(F @ F.T, tol)
    if sum(a for _, a, _ in weights.entries) != M:
        raise UsageError(f"weights cover {sum(a for _, a, _ in weights.entries)} eigenvalues, expected M={M}")
    slack = max(tol.eq_tol, tol.spectrum_tol * (1.0 + float(np.max(np.abs(values), initial=0.0))))
    f = np.zeros(M)
    start = 0
    # computed eigenvalues and table roots are both descending, so blocks line up by position
    for lam, a, w in weights.entries:
        block = slice(start, start + a)
        start += a
        if w <= 0.0:
            continue
        drift = float(np.max(np.abs(values[block] - lam)))
        if drift > slack:
            raise GroupingToleranceError(
                f"no eigenspace of F_{weights.n} F_{weights.n}^T near {lam!r} "
                f"(closest computed eigenvalues off by {drift:.3g})"
            )
        basis = vectors[:, block]
        u = _unit_in(basis, np.asarray(probe(basis, lam, weights.n), dtype=float))
        if u is None:
            raise UsageError(f"probe returned a direction outside the {lam!r}-eigenspace")
        f += np.sqrt(w) * u
    return f


def synthesize(
    outer: OuterEigenstepTable,
    probe_policy: ProbePolicy | None = None,
    tol: Tolerances | None = None,
) -> FrameSynthesis:
    tol = tol or Tolerances()
    report = validate_outer(outer, tol)
    if not report.holds:
        raise InfeasibleError(f"eigenstep table is not valid: {report.summary()}", report)
    probe = probe_policy or CanonicalProbe()
    M, N = outer.M, outer.N
    F = np.zeros((M, 0))
    history = []
    for n in range(N):
        weights = limit_weights(outer.row(n), outer.row(n + 1), tol, n=n)
        eig = eigh_descending(F @ F.T, tol)
        f = next_vector(F, weights, eig, probe, tol)
        F = np.column_stack([F, f])
        history.append(weights)
    logger.info("synthesized a %dx%d frame", M, N)
    return FrameSynthesis(FrameMatrix(F), tuple(history))


def build_frame(
    outer: OuterEigenstepTable,
    probe_policy: ProbePolicy | None = None,
    tol: Tolerances | None = None,
) -> FrameMatrix:
    return synthesize(outer, probe_policy, tol).frame


def _spectrum_gap(S: np.ndarray, target) -> float:
    got = spectrum_of(S)
    want = np.sort(as_array(target))[::-1]
    size = max(got.size, want.size)
    got = np.pad(got, (0, size - got.size))
    want = np.pad(want, (0, size - want.size))
    return float(np.max(np.abs(got - want), initial=0.0))


def verify_frame(
    F: FrameMatrix | np.ndarray,
    lam,
    mu,
    outer: OuterEigenstepTable | None = None,
    tol: Tolerances | None = None,
) -> VerificationReport:
    """Residuals of spectrum(F F^T) against lam and of the squared column norms against mu.

    A shorter or longer lam is compared after padding the shorter side with zeros.
    """
    tol = tol or Tolerances()
    frame = F if isinstance(F, FrameMatrix) else FrameMatrix(F)
    mu = as_array(mu)
    if mu.size != frame.N:
        raise UsageError(f"frame has {frame.N} columns but {mu.size} lengths were given")
    residuals = {
        "spectrum": _spectrum_gap(frame.frame_operator(), lam),
        "lengths": float(np.max(np.abs(frame.squared_norms() - mu), initial=0.0)),
    }
    limits = {"spectrum": tol.spectrum_tol, "lengths": tol.length_tol}
    details = {}
    if outer is not None:
        if outer.N != frame.N or outer.M != frame.M:
            raise UsageError(
                f"eigenstep table is {outer.M}x{outer.N} but the frame is {frame.M}x{frame.N}"
            )
        gaps = [_spectrum_gap(frame.frame_operator(n), outer.row(n)) for n in range(1, frame.N + 1)]
        worst = int(np.argmax(gaps)) if gaps else 0
        residuals["partial_spectra"] = gaps[worst] if gaps else 0.0
        limits["partial_spectra"] = tol.spectrum_tol
        details["partial_spectra_worst_n"] = worst + 1
    return VerificationReport(residuals, limits, details)
