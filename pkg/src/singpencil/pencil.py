"""Pencil container, projective eigenvalues and small matrix helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS = np.finfo(float).eps
# |beta_h| <= INF_TOL * |alpha_h| marks a value as numerically infinite.
INF_TOL = 100 * EPS


class PencilError(ValueError):
    pass


class ZeroMatrix(PencilError):
    pass


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2:
        raise PencilError(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.issubdtype(M.dtype, np.complexfloating):
        M = M.astype(float)
    if not np.all(np.isfinite(M)):
        raise PencilError("matrix entries must be finite")
    return M


@dataclass(frozen=True)
class Pencil:
    """The matrix pencil ``A - lambda*B`` with ``A``, ``B`` of equal shape ``(n, m)``.

    Empty dimensions are allowed so that canonical blocks such as ``L_0``
    (a single zero column) can be represented.
    """

    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = _as_matrix(self.A)
        B = _as_matrix(self.B)
        if A.shape != B.shape:
            raise PencilError(f"A and B differ in shape: {A.shape} vs {B.shape}")
        A.flags.writeable = False
        B.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.A.shape[1]

    @property
    def is_square(self) -> bool:
        return self.n == self.m

    def at(self, lam: complex) -> np.ndarray:
        return self.A - lam * self.B


@dataclass(frozen=True)
class ProjectiveValue:
    """Eigenvalue stored homogeneously as ``alpha_h / beta_h``.

    The pair is normalized to unit Euclidean length with ``beta_h`` real and
    nonnegative, which makes the representation unique.
    """

    alpha_h: complex
    beta_h: complex

    def __post_init__(self):
        a, b = complex(self.alpha_h), complex(self.beta_h)
        r = np.hypot(abs(a), abs(b))
        if r == 0.0 or not np.isfinite(r):
            raise PencilError("(alpha_h, beta_h) must be finite and not both zero")
        a, b = a / r, b / r
        if b != 0:
            phase = abs(b) / b
            a, b = a * phase, abs(b)
        elif a != 0:
            a = abs(a)
        object.__setattr__(self, "alpha_h", complex(a))
        object.__setattr__(self, "beta_h", complex(b))

    @classmethod
    def from_value(cls, lam: complex) -> "ProjectiveValue":
        lam = complex(lam)
        if np.isinf(lam.real) or np.isinf(lam.imag):
            return cls(1.0, 0.0)
        return cls(lam, 1.0)

    @classmethod
    def infinity(cls) -> "ProjectiveValue":
        return cls(1.0, 0.0)

    @property
    def is_infinite(self) -> bool:
        return abs(self.beta_h) <= INF_TOL * abs(self.alpha_h)

    @property
    def value(self) -> complex:
        """``alpha_h / beta_h``; complex infinity when ``beta_h`` is exactly zero."""
        if self.beta_h == 0:
            return complex(np.inf, 0.0)
        return self.alpha_h / self.beta_h

    @property
    def weight(self) -> float:
        """``(1 + |lambda|^2)^(-1/2)``, which equals ``|beta_h|`` after normalization."""
        return abs(self.beta_h)

    def conjugate(self) -> "ProjectiveValue":
        return ProjectiveValue(np.conj(self.alpha_h), np.conj(self.beta_h))

    def __repr__(self):
        if self.is_infinite:
            return "ProjectiveValue(inf)"
        return f"ProjectiveValue({self.value:.10g})"


@dataclass(frozen=True)
class EigenTriplet:
    value: ProjectiveValue
    right: np.ndarray
    left: np.ndarray


def chordal_distance(x: ProjectiveValue, y: ProjectiveValue) -> float:
    """Chordal distance on the Riemann sphere; well defined at infinity."""
    num = abs(x.alpha_h * y.beta_h - y.alpha_h * x.beta_h)
    den = np.hypot(abs(x.alpha_h), abs(x.beta_h)) * np.hypot(abs(y.alpha_h), abs(y.beta_h))
    return float(num / den)


def match_multisets(xs, ys, tol: float) -> bool:
    """Greedy closest-pair matching of two projective multisets in chordal metric."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        return False
    if not xs:
        return True
    D = np.array([[chordal_distance(x, y) for y in ys] for x in xs])
    used_r, used_c = set(), set()
    for flat in np.argsort(D, axis=None, kind="stable"):
        i, j = divmod(int(flat), len(ys))
        if i in used_r or j in used_c:
            continue
        if D[i, j] > tol:
            return False
        used_r.add(i)
        used_c.add(j)
    return True


def kron(P, Q) -> np.ndarray:
    return np.kron(np.asarray(P), np.asarray(Q))


def to_tall(p: Pencil) -> tuple[Pencil, bool]:
    """Return a pencil with at least as many rows as columns.

    Wide pencils are replaced by ``(A^*, B^*)``; its eigenvalues are the complex
    conjugates of the original ones, so callers must conjugate results back.
    """
    if p.n >= p.m:
        return p, False
    return Pencil(p.A.conj().T, p.B.conj().T), True


def one_norm_scale(p: Pencil) -> tuple[Pencil, float, float]:
    """Scale to ``||A||_1 = ||B||_1 = 1``.

    Eigenvalues of the scaled pencil map back as ``lam = (sA / sB) * lam_scaled``.
    """
    sA = float(np.linalg.norm(p.A, 1)) if p.A.size else 0.0
    sB = float(np.linalg.norm(p.B, 1)) if p.B.size else 0.0
    if sA == 0.0 or sB == 0.0:
        raise ZeroMatrix("cannot one-norm scale a pencil with a zero matrix")
    return Pencil(p.A / sA, p.B / sB), sA, sB


def pad_to_square(p: Pencil) -> Pencil:
    """Append zero columns (or rows) so the pencil becomes square."""
    n, m = p.shape
    if n == m:
        return p
    s = max(n, m)
    A = np.zeros((s, s), dtype=np.result_type(p.A, p.B))
    B = np.zeros_like(A)
    A[:n, :m] = p.A
    B[:n, :m] = p.B
    return Pencil(A, B)


def norm2(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary matrix from QR of a complex Gaussian."""
    G = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R)
    ph = np.where(d == 0, 1.0, d / np.abs(np.where(d == 0, 1.0, d)))
    return Q * ph
