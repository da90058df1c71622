"""Eigentriplets of a regular square pencil through LAPACK's QZ driver."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg
from threadpoolctl import threadpool_limits

from .pencil import EigenTriplet, Pencil, PencilError, ProjectiveValue


class BackendFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumResult:
    triplets: list[EigenTriplet]
    # Raw (unnormalized) QZ pairs; both entries tiny signals a singular input.
    raw_alpha: np.ndarray
    raw_beta: np.ndarray

    def __len__(self):
        return len(self.triplets)

    @property
    def values(self) -> list[ProjectiveValue]:
        return [t.value for t in self.triplets]

    @property
    def right(self) -> np.ndarray:
        return np.column_stack([t.right for t in self.triplets]) if self.triplets else np.zeros((0, 0))

    @property
    def left(self) -> np.ndarray:
        return np.column_stack([t.left for t in self.triplets]) if self.triplets else np.zeros((0, 0))


def _unit_columns(X: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(X, axis=0)
    nrm[nrm == 0] = 1.0
    return X / nrm


def eig_triplets(p: Pencil) -> SpectrumResult:
    """All eigenvalues with unit right and left eigenvectors of a square pencil.

    The left eigenvector ``y`` satisfies ``y^* (beta_h A - alpha_h B) = 0``.
    Eigenvalue order is whatever LAPACK produces; it is deterministic for a
    fixed input because the call runs on a single BLAS thread.
    """
    if not p.is_square:
        raise PencilError(f"eig_triplets needs a square pencil, got {p.shape}")
    n = p.n
    if n == 0:
        return SpectrumResult([], np.zeros(0, complex), np.zeros(0, complex))
    try:
        with threadpool_limits(limits=1):
            w, vl, vr = linalg.eig(
                p.A, p.B, left=True, right=True, homogeneous_eigvals=True,
                check_finite=False,
            )
    except (linalg.LinAlgError, ValueError) as exc:
        raise BackendFailure(f"QZ did not converge: {exc}") from exc
    alpha, beta = w[0].astype(complex), w[1].astype(complex)
    vr = _unit_columns(vr.astype(complex))
    vl = _unit_columns(vl.astype(complex))
    triplets = []
    for i in range(n):
        a, b = alpha[i], beta[i]
        if a == 0 and b == 0:
            # Exactly singular input; keep a placeholder value so lengths match.
            a = 1.0
        triplets.append(EigenTriplet(ProjectiveValue(a, b), vr[:, i], vl[:, i]))
    return SpectrumResult(triplets, alpha, beta)


def degenerate_pairs(spec: SpectrumResult, p: Pencil, tol: float = 1e-11) -> int:
    """Count QZ pairs with both ``|alpha|`` and ``|beta|`` negligible.

    Such pairs are the usual numerical footprint of a singular square pencil.
    """
    if len(spec) == 0:
        return 0
    nA = np.linalg.norm(p.A, "fro")
    nB = np.linalg.norm(p.B, "fro")
    small_a = np.abs(spec.raw_alpha) <= tol * max(nA, np.finfo(float).tiny)
    small_b = np.abs(spec.raw_beta) <= tol * max(nB, np.finfo(float).tiny)
    return int(np.count_nonzero(small_a & small_b))
