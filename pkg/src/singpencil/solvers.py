"""Extraction of regular eigenvalues from a singular pencil.

Three routes are provided: projection onto the normal rank
(:func:`project_solve`, :func:`project_solve_permutation`), a bordered
pencil (:func:`augment_solve`) and a rank-completing perturbation
(:func:`perturb_solve`). Each returns a :class:`ClassifiedSpectrum` whose
entries carry the diagnostics ``alpha_i``, ``beta_i`` and ``gamma_i`` and a
class tag.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .backend import SpectrumResult, degenerate_pairs, eig_triplets
from .pencil import (EPS, Pencil, PencilError, ProjectiveValue, haar_unitary, norm2,
                     one_norm_scale, pad_to_square)

# Augmentation: a prescribed eigenvector has alpha_i or beta_i equal to one.
PRESCRIBED_UNIT_TOL = 1e-6


class InvalidRank(PencilError):
    pass


class DegenerateSelection(RuntimeError):
    pass


class MissingVectors(ValueError):
    pass


class Method(str, enum.Enum):
    PROJECT = "project"
    PROJECT_PERM = "project-perm"
    AUGMENT = "augment"
    AUGMENT_SIMPLE = "augment-simple"
    PERTURB = "perturb"


class EigClass(str, enum.Enum):
    TRUE = "true"
    RANDOM_LEFT = "random_left"
    RANDOM_RIGHT = "random_right"
    PRESCRIBED = "prescribed"


@dataclass(frozen=True)
class SolverConfig:
    delta: float = float(np.sqrt(EPS))
    tau: float = 1e-2
    method: Method = Method.PROJECT
    seed: int = 0
    k_override: int | None = None
    keep_vectors: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.method is Method.PERTURB and self.tau == 0:
            raise ValueError("tau must be nonzero for the perturbation method")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class ProjectionFrame:
    W: np.ndarray
    W_perp: np.ndarray
    Zhat: np.ndarray
    Zhat_perp: np.ndarray
    m: int

    @property
    def Z(self) -> np.ndarray:
        return self.Zhat[:self.m]

    @property
    def Z_perp(self) -> np.ndarray:
        return self.Zhat_perp[:self.m]


@dataclass(frozen=True)
class AugmentationData:
    U: np.ndarray
    V: np.ndarray
    T_A: np.ndarray
    T_B: np.ndarray
    S_A: np.ndarray
    S_B: np.ndarray


@dataclass(frozen=True)
class PerturbationData:
    U: np.ndarray
    V: np.ndarray
    D_A: np.ndarray
    D_B: np.ndarray
    tau: float


@dataclass(frozen=True)
class RawEigenvalue:
    value: ProjectiveValue
    alpha_i: float
    beta_i: float
    gamma_i: float
    kind: EigClass
    right: np.ndarray | None = None
    left: np.ndarray | None = None


@dataclass(frozen=True)
class ClassifiedSpectrum:
    entries: list[RawEigenvalue]
    method: Method
    k: int
    n: int
    m: int
    config: SolverConfig
    # QZ pairs of the solved regular pencil with alpha and beta both negligible
    degenerate_pairs: int = 0
    data: object = field(default=None, repr=False)

    @property
    def regular_count(self) -> int:
        return sum(e.kind is EigClass.TRUE for e in self.entries)

    def of_kind(self, kind: EigClass) -> list[RawEigenvalue]:
        return [e for e in self.entries if e.kind is kind]

    @property
    def true_entries(self) -> list[RawEigenvalue]:
        return self.of_kind(EigClass.TRUE)

    def count(self, kind: EigClass) -> int:
        return len(self.of_kind(kind))


def _split_kind(a: float, b: float, delta: float) -> EigClass:
    small_a, small_b = a < delta, b < delta
    if small_a and small_b:
        return EigClass.TRUE
    if small_a:
        return EigClass.RANDOM_RIGHT
    if small_b:
        return EigClass.RANDOM_LEFT
    return EigClass.PRESCRIBED


def _rng(cfg: SolverConfig, rng):
    return cfg.rng() if rng is None else rng


def _finish(entries, cfg: SolverConfig) -> list[RawEigenvalue]:
    if cfg.keep_vectors:
        return entries
    return [replace(e, right=None, left=None) for e in entries]


# --------------------------------------------------------------------------
# projection

def random_frame(n: int, m: int, k: int, rng: np.random.Generator) -> ProjectionFrame:
    """Two independent Haar unitary matrices split after ``n - k`` columns."""
    Wfull = haar_unitary(n, rng)
    Zfull = haar_unitary(n, rng)
    r = n - k
    return ProjectionFrame(Wfull[:, :r], Wfull[:, r:], Zfull[:, :r], Zfull[:, r:], m)


def permutation_frame(n: int, m: int, k: int, rows, cols) -> ProjectionFrame:
    rows = [int(i) for i in rows]
    cols = [int(j) for j in cols]
    r = n - k
    if len(rows) != r or len(cols) != r:
        raise InvalidRank(f"need {r} selected rows and columns")
    if len(set(rows)) != r or len(set(cols)) != r:
        raise ValueError("selected rows and columns must be distinct")
    if any(not 0 <= i < n for i in rows) or any(not 0 <= j < m for j in cols):
        raise ValueError("selected column out of range (columns must come from the first m)")
    I = np.eye(n)
    rest_rows = [i for i in range(n) if i not in set(rows)]
    rest_cols = [j for j in range(n) if j not in set(cols)]
    return ProjectionFrame(I[:, rows], I[:, rest_rows], I[:, cols], I[:, rest_cols], m)


def _check_projection(p: Pencil, k: int):
    n, m = p.shape
    if n < m:
        raise InvalidRank("projection needs a tall pencil (n >= m); apply to_tall first")
    if k < 0 or k > n or n - k > m:
        raise InvalidRank(f"k={k} is invalid for a {n}x{m} pencil")


def _project_with_frame(p: Pencil, k: int, frame: ProjectionFrame, cfg: SolverConfig,
                        method: Method) -> tuple[ClassifiedSpectrum, SpectrumResult, Pencil]:
    A, B = p.A, p.B
    W, Wp, Z, Zp = frame.W, frame.W_perp, frame.Z, frame.Z_perp
    AZ, BZ = A @ Z, B @ Z
    WA, WB = W.conj().T @ A, W.conj().T @ B
    small = Pencil(W.conj().T @ AZ, W.conj().T @ BZ)
    spec = eig_triplets(small)
    N = len(spec)
    X, Y = spec.right, spec.left
    if N:
        rA = Wp.conj().T @ AZ @ X
        rB = Wp.conj().T @ BZ @ X
        sA = Y.conj().T @ WA @ Zp
        sB = Y.conj().T @ WB @ Zp
        g = np.einsum("ij,ij->j", Y.conj(), small.B @ X)
    nA, nB = norm2(A), norm2(B)
    tiny = np.finfo(float).tiny
    entries = []
    for i, t in enumerate(spec.triplets):
        v = t.value
        if v.is_infinite:
            den = max(nB, tiny)
            a = np.linalg.norm(rB[:, i]) / den
            b = np.linalg.norm(sB[i]) / den
        else:
            lam = v.value
            den = max(nA + abs(lam) * nB, tiny)
            a = np.linalg.norm(rA[:, i] - lam * rB[:, i]) / den
            b = np.linalg.norm(sA[i] - lam * sB[i]) / den
        gamma = abs(g[i]) * v.weight
        entries.append(RawEigenvalue(v, float(a), float(b), float(gamma),
                                     _split_kind(a, b, cfg.delta), t.right, t.left))
    result = ClassifiedSpectrum(_finish(entries, cfg), method, k, p.n, p.m, cfg,
                                degenerate_pairs(spec, small), frame)
    return result, spec, small


def project_solve(p: Pencil, k: int, cfg: SolverConfig | None = None,
                  rng: np.random.Generator | None = None,
                  frame: ProjectionFrame | None = None) -> ClassifiedSpectrum:
    """Regular eigenvalues via projection onto an ``(n-k) x (n-k)`` pencil.

    The reported ``alpha_i`` and ``beta_i`` are the residual norms
    ``||W_perp^*(A - lam B) Z x||`` and ``||y^* W^*(A - lam B) Z_perp||``
    divided by ``||A|| + |lam| ||B||`` (``||B||`` alone for infinite ``lam``),
    so an eigenvalue is true exactly when both fall below ``delta``.
    """
    cfg = cfg or SolverConfig()
    _check_projection(p, k)
    if frame is None:
        frame = random_frame(p.n, p.m, k, _rng(cfg, rng))
    return _project_with_frame(p, k, frame, cfg, Method.PROJECT)[0]


def project_solve_permutation(p: Pencil, k: int, cfg: SolverConfig | None = None,
                              rng: np.random.Generator | None = None,
                              rows=None, cols=None) -> ClassifiedSpectrum:
    """Projection where the frames are columns of permutation matrices.

    The projected pencil is a plain ``(n-k) x (n-k)`` submatrix selection of
    ``A - lambda*B``; columns are taken from the first ``m`` only. Raises
    :class:`DegenerateSelection` when that submatrix pencil is singular.
    """
    cfg = cfg or SolverConfig()
    _check_projection(p, k)
    n, m = p.shape
    if rows is None or cols is None:
        g = _rng(cfg, rng)
        if rows is None:
            rows = np.sort(g.permutation(n)[:n - k])
        if cols is None:
            cols = np.sort(g.permutation(m)[:n - k])
    frame = permutation_frame(n, m, k, rows, cols)
    result, spec, small = _project_with_frame(p, k, frame, cfg, Method.PROJECT_PERM)
    all_null_gamma = all(e.gamma_i == 0 for e in result.entries)
    if result.degenerate_pairs or (result.entries and all_null_gamma
                                   and result.regular_count == 0):
        raise DegenerateSelection("the selected subpencil is singular; use project_solve")
    return result


# --------------------------------------------------------------------------
# augmentation

def random_augmentation(n: int, k: int, rng: np.random.Generator,
                        simple: bool = False) -> AugmentationData:
    U = haar_unitary(n, rng)[:, :k]
    V = haar_unitary(n, rng)[:, :k]
    if simple:
        I, O = np.eye(k), np.zeros((k, k))
        return AugmentationData(U, V, I, O, I, O)
    T_A, T_B, S_A, S_B = (np.diag(rng.uniform(1.0, 2.0, k)) for _ in range(4))
    return AugmentationData(U, V, T_A, T_B, S_A, S_B)


def augmented_pencil(p: Pencil, data: AugmentationData) -> Pencil:
    k = data.U.shape[1]
    O = np.zeros((k, k))
    Vh = data.V.conj().T
    Aa = np.block([[p.A, data.U @ data.T_A], [data.S_A @ Vh, O]])
    Ba = np.block([[p.B, data.U @ data.T_B], [data.S_B @ Vh, O]])
    return Pencil(Aa, Ba)


def augment_solve(p: Pencil, k: int, cfg: SolverConfig | None = None,
                  rng: np.random.Generator | None = None, simple: bool = False,
                  data: AugmentationData | None = None) -> ClassifiedSpectrum:
    """Regular eigenvalues from the ``(n+k) x (n+k)`` bordered pencil.

    With ``simple=True`` the border is ``[A U; V^* 0] - lambda [B 0; 0 0]``
    and all ``2k`` prescribed eigenvalues sit at infinity. Rectangular
    pencils are padded with zero columns or rows first.
    """
    cfg = cfg or SolverConfig()
    p = pad_to_square(p)
    n = p.n
    if k <= 0 or k >= n:
        raise InvalidRank(f"augmentation needs 0 < k < n, got k={k}, n={n}")
    if data is None:
        data = random_augmentation(n, k, _rng(cfg, rng), simple)
    aug = augmented_pencil(p, data)
    spec = eig_triplets(aug)
    entries = []
    for t in spec.triplets:
        x1, x2 = t.right[:n], t.right[n:]
        y1, y2 = t.left[:n], t.left[n:]
        a, b = float(np.linalg.norm(x2)), float(np.linalg.norm(y2))
        gamma = abs(np.vdot(y1, p.B @ x1)) * t.value.weight
        if max(a, b) < cfg.delta:
            kind = EigClass.TRUE
        elif abs(a - 1) <= PRESCRIBED_UNIT_TOL or abs(b - 1) <= PRESCRIBED_UNIT_TOL:
            kind = EigClass.PRESCRIBED
        else:
            kind = _split_kind(a, b, cfg.delta)
        entries.append(RawEigenvalue(t.value, a, b, float(gamma), kind, t.right, t.left))
    method = Method.AUGMENT_SIMPLE if simple else Method.AUGMENT
    return ClassifiedSpectrum(_finish(entries, cfg), method, k, n, n, cfg,
                              degenerate_pairs(spec, aug), data)


# --------------------------------------------------------------------------
# rank-completing perturbation

def random_perturbation(n: int, k: int, rng: np.random.Generator,
                        tau: float = 1e-2) -> PerturbationData:
    U = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2)
    V = (rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))) / np.sqrt(2)
    d = rng.uniform(1.0, 2.0, k)
    return PerturbationData(U, V, np.diag(d), np.eye(k), tau)


def perturbed_pencil(p: Pencil, data: PerturbationData) -> Pencil:
    Vh = data.V.conj().T
    return Pencil(p.A + data.tau * data.U @ data.D_A @ Vh,
                  p.B + data.tau * data.U @ data.D_B @ Vh)


def perturb_solve(p: Pencil, k: int, cfg: SolverConfig | None = None,
                  rng: np.random.Generator | None = None,
                  data: PerturbationData | None = None) -> ClassifiedSpectrum:
    """Regular eigenvalues of ``A - lambda*B + tau*U(D_A - lambda*D_B)V^*``.

    ``A`` and ``B`` are first scaled to unit 1-norm; returned eigenvalues are
    mapped back to the original pencil and ``gamma_i`` uses the original ``B``.
    """
    cfg = cfg or SolverConfig(method=Method.PERTURB)
    p = pad_to_square(p)
    n = p.n
    if k < 0 or k > n:
        raise InvalidRank(f"perturbation needs 0 <= k <= n, got k={k}, n={n}")
    if data is None:
        data = random_perturbation(n, k, _rng(cfg, rng), cfg.tau)
    if data.tau == 0:
        raise ValueError("tau must be nonzero")
    scaled, sA, sB = one_norm_scale(p)
    pert = perturbed_pencil(scaled, data)
    spec = eig_triplets(pert)
    Vh, Uh = data.V.conj().T, data.U.conj().T
    entries = []
    for t in spec.triplets:
        a = float(np.linalg.norm(Vh @ t.right))
        b = float(np.linalg.norm(Uh @ t.left))
        v = ProjectiveValue(t.value.alpha_h * sA, t.value.beta_h * sB)
        gamma = abs(np.vdot(t.left, p.B @ t.right)) * v.weight
        entries.append(RawEigenvalue(v, a, b, float(gamma), _split_kind(a, b, cfg.delta),
                                     t.right, t.left))
    return ClassifiedSpectrum(_finish(entries, cfg), Method.PERTURB, k, n, n, cfg,
                              degenerate_pairs(spec, pert), data)


def reducing_subspace_basis(spectrum: ClassifiedSpectrum) -> tuple[np.ndarray, np.ndarray]:
    """Bases of the minimal right and left reducing subspaces.

    Right basis: right eigenvectors ``x`` whose left partner has ``U^*y != 0``
    (prescribed eigenvalues and random ones from right singular blocks).
    Left basis: left eigenvectors ``y`` with ``V^*x != 0``.
    """
    if spectrum.method is not Method.PERTURB:
        raise ValueError("reducing subspaces are read off a perturbation solve")
    if any(e.right is None or e.left is None for e in spectrum.entries):
        raise MissingVectors("spectrum was computed without eigenvectors")
    delta = spectrum.config.delta
    n = spectrum.n
    right = [e.right for e in spectrum.entries if e.beta_i >= delta]
    left = [e.left for e in spectrum.entries if e.alpha_i >= delta]
    R = np.column_stack(right) if right else np.zeros((n, 0), complex)
    L = np.column_stack(left) if left else np.zeros((n, 0), complex)
    return R, L


def untranspose(spectrum: ClassifiedSpectrum) -> ClassifiedSpectrum:
    """Map a spectrum of ``(A^*, B^*)`` back to the original wide pencil."""
    swap = {EigClass.RANDOM_LEFT: EigClass.RANDOM_RIGHT,
            EigClass.RANDOM_RIGHT: EigClass.RANDOM_LEFT}
    entries = [
        replace(e, value=e.value.conjugate(), alpha_i=e.beta_i, beta_i=e.alpha_i,
                kind=swap.get(e.kind, e.kind), right=e.left, left=e.right)
        for e in spectrum.entries
    ]
    return replace(spectrum, entries=entries, n=spectrum.m, m=spectrum.n)


def solve(p: Pencil, k: int, cfg: SolverConfig, rng: np.random.Generator | None = None
          ) -> ClassifiedSpectrum:
    """Dispatch on ``cfg.method``."""
    method = cfg.method
    if method is Method.PROJECT:
        return project_solve(p, k, cfg, rng)
    if method is Method.PROJECT_PERM:
        return project_solve_permutation(p, k, cfg, rng)
    if method is Method.AUGMENT:
        return augment_solve(p, k, cfg, rng, simple=False)
    if method is Method.AUGMENT_SIMPLE:
        return augment_solve(p, k, cfg, rng, simple=True)
    return perturb_solve(p, k, cfg, rng)
