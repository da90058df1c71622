"""Split regular eigenvalues into finite and infinite ones using gamma and gaps."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .pencil import EPS, ProjectiveValue


class FlagReason(str, enum.Enum):
    NONE = "none"
    LINE2 = "line2"
    LINE3 = "line3"
    EXACT_INFINITY = "exact_infinity"


@dataclass(frozen=True)
class ClassifierConfig:
    delta1: float = float(np.sqrt(EPS))
    delta2: float = float(100 * EPS)
    xi1: float = 0.95
    xi2: float = 0.01

    def __post_init__(self):
        if not 0 < self.delta2 < self.delta1 < 1:
            raise ValueError("need 0 < delta2 < delta1 < 1")
        if not 0 < self.xi2 < self.xi1 <= 1:
            raise ValueError("need 0 < xi2 < xi1 <= 1")


@dataclass(frozen=True)
class EntryReport:
    value: ProjectiveValue
    gamma: float
    gap: float
    reason: FlagReason

    @property
    def finite(self) -> bool:
        return self.reason is FlagReason.NONE


@dataclass(frozen=True)
class FiniteInfiniteReport:
    per_entry: list[EntryReport]

    @property
    def finite(self) -> list[ProjectiveValue]:
        return [e.value for e in self.per_entry if e.finite]

    @property
    def infinite_count(self) -> int:
        return sum(not e.finite for e in self.per_entry)


def compute_gaps(values: list[ProjectiveValue]) -> list[float]:
    """Relative distance of each eigenvalue to its nearest neighbour.

    ``gap_i = min_{j != i} |lam_j - lam_i| / sqrt(1 + |lam_i|^2)``. Infinite
    neighbours never realise the minimum of a finite value; an infinite value
    has gap 1 against finite neighbours and 0 against another infinity. A lone
    value (or a finite value among only infinities) gets gap 1.
    """
    r = len(values)
    if r <= 1:
        return [1.0] * r
    inf = np.array([v.is_infinite for v in values])
    lam = np.array([0j if v.is_infinite else v.value for v in values])
    gaps = []
    for i in range(r):
        others = np.arange(r) != i
        if inf[i]:
            gaps.append(0.0 if np.any(inf & others) else 1.0)
            continue
        fin = others & ~inf
        if not np.any(fin):
            gaps.append(1.0)
            continue
        d = np.abs(lam[fin] - lam[i]).min()
        gaps.append(float(d / np.sqrt(1 + abs(lam[i]) ** 2)))
    return gaps


def extract_finite(entries, cfg: ClassifierConfig | None = None) -> FiniteInfiniteReport:
    """Flag infinite eigenvalues among ``(value, gamma)`` pairs; keep the rest finite.

    Numerically infinite values are flagged up front. Otherwise a value is
    infinite when ``gamma < delta1`` with ``gap > xi1``, or when
    ``gamma < delta2`` with ``gap > xi2``.
    """
    cfg = cfg or ClassifierConfig()
    entries = list(entries)
    values = [v for v, _ in entries]
    gaps = compute_gaps(values)
    out = []
    for (v, gamma), gap in zip(entries, gaps):
        if gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if v.is_infinite:
            reason = FlagReason.EXACT_INFINITY
        elif gamma < cfg.delta1 and gap > cfg.xi1:
            reason = FlagReason.LINE2
        elif gamma < cfg.delta2 and gap > cfg.xi2:
            reason = FlagReason.LINE3
        else:
            reason = FlagReason.NONE
        out.append(EntryReport(v, float(gamma), float(gap), reason))
    return FiniteInfiniteReport(out)


def classify_spectrum(spectrum, cfg: ClassifierConfig | None = None) -> FiniteInfiniteReport:
    """Run the finite/infinite split on the true entries of a solver result."""
    return extract_finite(((e.value, e.gamma_i) for e in spectrum.true_entries), cfg)
