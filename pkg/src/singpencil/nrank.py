"""Normal rank estimation and detection of a wrongly guessed rank."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .pencil import EPS, Pencil, ZeroMatrix, one_norm_scale
from .solvers import ClassifiedSpectrum, EigClass, Method


@dataclass(frozen=True)
class RankEstimate:
    nrank: int
    trials: int
    sample_points: list[complex]
    per_trial_ranks: list[int]


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    LIKELY_UNDERESTIMATE = "likely_underestimate"
    POSSIBLE_OVERESTIMATE = "possible_overestimate"


@dataclass(frozen=True)
class RankDiagnosis:
    verdict: Verdict
    evidence: dict = field(default_factory=dict)


def numerical_rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > max(M.shape) * EPS * s[0]))


def estimate_normal_rank(p: Pencil, trials: int = 3,
                         rng: np.random.Generator | None = None) -> RankEstimate:
    """Max over ``trials`` of the numerical rank of ``A + eta*B`` at random ``eta``.

    The pencil is one-norm scaled first so that ``|eta| = 1`` sits away from
    eigenvalues clustered at zero or infinity.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng() if rng is None else rng
    try:
        q, _, _ = one_norm_scale(p)
    except ZeroMatrix:
        q = p
    etas, ranks = [], []
    for _ in range(trials):
        z = complex(rng.standard_normal(), rng.standard_normal())
        eta = z / abs(z) if z != 0 else 1.0 + 0j
        etas.append(eta)
        ranks.append(numerical_rank(q.A + eta * q.B))
    return RankEstimate(max(ranks), trials, etas, ranks)


def _expected_prescribed(method: Method, k_used: int) -> int:
    if method in (Method.PROJECT, Method.PROJECT_PERM):
        return 0
    if method in (Method.AUGMENT, Method.AUGMENT_SIMPLE):
        return 2 * k_used
    return k_used


def diagnose_rank(results: ClassifiedSpectrum, method: Method | str | None = None,
                  k_used: int | None = None, expected_regular: int | None = None
                  ) -> RankDiagnosis:
    """Judge whether the ``k`` a solver ran with matches the true normal rank.

    Prescribed-type eigenvalues beyond what the method injects point to an
    underestimated normal rank. If every eigenvalue passes the true test and
    either the solved pencil was numerically singular or more true values came
    back than the known regular-part size, the rank was probably overestimated.
    """
    method = Method(method) if method is not None else results.method
    k_used = results.k if k_used is None else k_used
    delta = results.config.delta
    prescribed = results.count(EigClass.PRESCRIBED)
    all_small = all(max(e.alpha_i, e.beta_i) < delta for e in results.entries)
    evidence = {
        "prescribed_count": prescribed,
        "expected_prescribed": _expected_prescribed(method, k_used),
        "true_count": results.regular_count,
        "degenerate_pairs": results.degenerate_pairs,
        "all_alpha_beta_small": all_small,
    }
    if prescribed > evidence["expected_prescribed"]:
        return RankDiagnosis(Verdict.LIKELY_UNDERESTIMATE, evidence)
    too_many = expected_regular is not None and results.regular_count > expected_regular
    if all_small and results.entries and (too_many or results.degenerate_pairs > 0):
        return RankDiagnosis(Verdict.POSSIBLE_OVERESTIMATE, evidence)
    return RankDiagnosis(Verdict.CONSISTENT, evidence)
