"""Scalar policy shared by every module: tolerances, the symmetric eigensolver
contract, and grouping of near-equal roots into multisets.

Everything here is real-valued and immutable.
"""
from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from core.errors import ContractViolation, UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Tolerances:
    eq_tol: float = 1e-9
    feas_tol: float = 1e-9
    weight_clamp: float = 1e-9
    spectrum_tol: float = 1e-7
    length_tol: float = 1e-8

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise UsageError(f"tolerance {f.name} must be strictly positive, got {value!r}")

    def replace(self, **overrides) -> "Tolerances":
        given = {k: float(v) for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **given) if given else self

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass(frozen=True)
class RootMultiset:
    """Distinct values (descending) with multiplicities: the roots of one p_n."""

    entries: tuple[tuple[float, int], ...] = ()

    @property
    def degree(self) -> int:
        return sum(mult for _, mult in self.entries)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for v, _ in self.entries)

    def expand(self) -> tuple[float, ...]:
        return tuple(v for v, mult in self.entries for _ in range(mult))

    def multiplicity(self, value: float, tol: "Tolerances") -> int:
        for v, mult in self.entries:
            if abs(v - value) <= tol.eq_tol:
                return mult
        return 0

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def group_roots(values: Iterable[float], tol: Tolerances | None = None) -> RootMultiset:
    """Merge values lying within eq_tol of their sorted neighbour; each group becomes its mean.

    Groups are separated by gaps larger than eq_tol, so group means are too.
    """
    tol = tol or Tolerances()
    ordered = sorted((float(v) for v in values), reverse=True)
    groups: list[list[float]] = []
    for v in ordered:
        if groups and groups[-1][-1] - v <= tol.eq_tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return RootMultiset(tuple((float(np.mean(g)), len(g)) for g in groups))


def symmetry_defect(S: np.ndarray) -> float:
    S = np.asarray(S, dtype=float)
    if S.size == 0:
        return 0.0
    return float(np.max(np.abs(S - S.T)))


def eigh_descending(S: Sequence[Sequence[float]] | np.ndarray, tol: Tolerances | None = None):
    """Eigen-decomposition of a real symmetric matrix, eigenvalues nonincreasing.

    Returns (eigenvalues, eigenvectors) with eigenvectors as orthonormal columns.
    """
    tol = tol or Tolerances()
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ContractViolation(f"eigh_descending needs a square matrix, got shape {S.shape}")
    defect = symmetry_defect(S)
    if defect > tol.feas_tol:
        raise ContractViolation(f"matrix is not symmetric (max |S - S^T| = {defect:.3g})")
    if S.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    w, V = scipy.linalg.eigh((S + S.T) / 2.0)
    return w[::-1].copy(), V[:, ::-1].copy()


def spectrum_of(S: np.ndarray) -> np.ndarray:
    """Eigenvalues of the symmetric part of S, nonincreasing.

    Verifiers use this on untrusted matrices; they report asymmetry themselves.
    """
    S = np.asarray(S, dtype=float)
    if S.size == 0:
        return np.zeros(S.shape[0] if S.ndim == 2 else 0)
    return scipy.linalg.eigvalsh((S + S.T) / 2.0)[::-1].copy()
