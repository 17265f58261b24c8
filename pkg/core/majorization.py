from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from core.errors import UsageError
from core.numeric import Tolerances

logger = logging.getLogger(__name__)


def as_array(values) -> np.ndarray:
    if isinstance(values, _Sorted):
        values = values.values
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise UsageError(f"expected a flat sequence, got shape {arr.shape}")
    return arr


def check_nonincreasing(values, tol: Tolerances, name: str, nonnegative: bool = True) -> np.ndarray:
    arr = as_array(values)
    if not np.all(np.isfinite(arr)):
        raise UsageError(f"{name} contains non-finite entries")
    drops = np.diff(arr)
    if drops.size and np.max(drops) > tol.feas_tol:
        i = int(np.argmax(drops))
        raise UsageError(f"{name} must be nonincreasing: entry {i + 2} exceeds entry {i + 1}")
    if nonnegative and arr.size and arr[-1] < -tol.feas_tol:
        raise UsageError(f"{name} must be nonnegative, smallest entry is {arr[-1]!r}")
    return arr


@dataclass(frozen=True)
class _Sorted:
    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    @classmethod
    def of(cls, values, tol: Tolerances | None = None):
        tol = tol or Tolerances()
        return cls(tuple(check_nonincreasing(values, tol, cls.__name__)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)


class Spectrum(_Sorted):
    """Nonnegative nonincreasing eigenvalues {lambda_m}."""


class LengthSequence(_Sorted):
    """Nonnegative nonincreasing squared norms {mu_n}."""


@dataclass(frozen=True)
class MajorizationReport:
    holds: bool
    worst_partial_slack: float
    trace_gap: float
    first_failure: int | None = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "worst_partial_slack": self.worst_partial_slack,
            "trace_gap": self.trace_gap,
            "first_failure": self.first_failure,
        }


def majorizes(lam, mu, tol: Tolerances | None = None) -> MajorizationReport:
    """Does lam majorize mu?  Both must have the same length; pad lam with zero_pad first."""
    tol = tol or Tolerances()
    a, b = as_array(lam), as_array(mu)
    if a.size != b.size:
        raise UsageError(f"majorization compares equal lengths, got {a.size} and {b.size}")
    if a.size == 0:
        return MajorizationReport(True, 0.0, 0.0)
    slack = np.cumsum(a) - np.cumsum(b)
    gap = float(slack[-1])
    worst = float(np.min(slack))
    failing = np.nonzero(slack < -tol.feas_tol)[0]
    first = int(failing[0]) + 1 if failing.size else None
    holds = worst >= -tol.feas_tol and abs(gap) <= tol.feas_tol
    if first is None and not holds:
        first = int(a.size)
    return MajorizationReport(holds, worst, gap, first)


def zero_pad(lam, N: int) -> Spectrum:
    values = as_array(lam)
    if N < values.size:
        raise UsageError(f"cannot zero-pad a length-{values.size} spectrum to length {N}")
    return Spectrum(tuple(values) + (0.0,) * (N - values.size))


def t_transform(values, i: int, j: int, fraction: float) -> np.ndarray:
    """Robin-Hood move: shift fraction/2 of the gap from entry i (larger) to entry j (smaller).

    The result is majorized by the input; i and j keep their relative order.
    """
    out = as_array(values).copy()
    if out[i] < out[j]:
        i, j = j, i
    if not 0.0 <= fraction <= 1.0:
        raise UsageError(f"T-transform fraction must lie in [0, 1], got {fraction}")
    d = fraction * (out[i] - out[j]) / 2.0
    out[i] -= d
    out[j] += d
    return out


def random_t_transforms(values, rng: np.random.Generator, count: int) -> np.ndarray:
    out = np.sort(as_array(values))[::-1].copy()
    if out.size < 2:
        return out
    for _ in range(count):
        i, j = sorted(rng.choice(out.size, size=2, replace=False))
        out = np.sort(t_transform(out, int(i), int(j), float(rng.uniform())))[::-1].copy()
    return out


def random_majorized_pair(
    N: int,
    rng_seed: int,
    rank: int | None = None,
    zero: bool = False,
) -> tuple[Spectrum, LengthSequence]:
    """Draw lam >= 0 nonincreasing, then mu from lam by random T-transforms.

    `rank` keeps only the first `rank` entries of lam nonzero (an M < N instance).
    """
    if N < 1:
        raise UsageError(f"N must be at least 1, got {N}")
    rank = N if rank is None else rank
    if not 1 <= rank <= N:
        raise UsageError(f"rank must lie in [1, {N}], got {rank}")
    rng = np.random.default_rng(rng_seed)
    lam = np.zeros(N)
    if not zero:
        lam[:rank] = np.sort(rng.uniform(0.1, 2.0, size=rank))[::-1]
    mu = random_t_transforms(lam, rng, count=3 * N)
    logger.debug("random pair N=%d rank=%d seed=%d", N, rank, rng_seed)
    return Spectrum(tuple(lam)), LengthSequence(tuple(mu))
