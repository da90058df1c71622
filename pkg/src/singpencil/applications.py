"""Problems that reduce to singular pencils: bivariate polynomial systems,
double eigenvalues of ``A + lam B`` and transmission zeros of a linear system.

Both two-parameter constructions go through the operator determinants of
``(A1 + lam B1 + mu C1) x1 = 0``, ``(A2 + lam B2 + mu C2) x2 = 0``::

    Delta1 = C1 (x) A2 - A1 (x) C2,    Delta0 = B1 (x) C2 - C1 (x) B2,

whose pencil ``Delta1 - lam Delta0`` has the lambda-parts of the solutions as
finite regular eigenvalues.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .classify import ClassifierConfig, classify_spectrum
from .nrank import estimate_normal_rank
from .pencil import Pencil, PencilError, ProjectiveValue, chordal_distance, kron, to_tall
from .solvers import ClassifiedSpectrum, SolverConfig, project_solve, untranspose

MU_MATCH_TOL = 1e-6
MU_INF_TOL = 1e-8


class ShapeMismatch(PencilError):
    pass


class NoCommonMu(RuntimeError):
    pass


class DegenerateRep(PencilError):
    pass


@dataclass(frozen=True)
class DeterminantalRep:
    """Matrices with ``p_i(lam, mu) = det(A_i + lam B_i + mu C_i)``.

    ``degree`` is set when the matrices come from :func:`uniform_rep` (or
    follow the same layout); it fixes the expected normal rank of the
    operator-determinant pencil.
    """

    A1: np.ndarray
    B1: np.ndarray
    C1: np.ndarray
    A2: np.ndarray
    B2: np.ndarray
    C2: np.ndarray
    degree: int | None = None

    def __post_init__(self):
        for name in ("A1", "B1", "C1", "A2", "B2", "C2"):
            M = np.asarray(getattr(self, name))
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise ShapeMismatch(f"{name} must be a square matrix, got shape {M.shape}")
            object.__setattr__(self, name, M)
        if not self.A1.shape == self.B1.shape == self.C1.shape:
            raise ShapeMismatch("A1, B1, C1 must have equal shapes")
        if not self.A2.shape == self.B2.shape == self.C2.shape:
            raise ShapeMismatch("A2, B2, C2 must have equal shapes")
        if self.degree is not None and self.degree < 1:
            raise ValueError("degree must be positive")

    def matrix(self, i: int, lam: complex, mu: complex) -> np.ndarray:
        if i == 1:
            return self.A1 + lam * self.B1 + mu * self.C1
        if i == 2:
            return self.A2 + lam * self.B2 + mu * self.C2
        raise ValueError("i must be 1 or 2")

    def to_dict(self) -> dict:
        out = {}
        for name in ("A1", "B1", "C1", "A2", "B2", "C2"):
            M = getattr(self, name)
            out[name] = M.real.tolist()
            if np.iscomplexobj(M) and np.any(M.imag):
                out[name + "_imag"] = M.imag.tolist()
        if self.degree is not None:
            out["degree"] = self.degree
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DeterminantalRep":
        mats = {}
        for name in ("A1", "B1", "C1", "A2", "B2", "C2"):
            if name not in d:
                raise ShapeMismatch(f"missing matrix {name}")
            M = np.array(d[name], dtype=float)
            if name + "_imag" in d:
                M = M + 1j * np.array(d[name + "_imag"], dtype=float)
            mats[name] = M
        return cls(degree=d.get("degree"), **mats)


@dataclass(frozen=True)
class DeltaPencils:
    delta1: np.ndarray
    delta0: np.ndarray
    expected_nrank: int | None = None

    @property
    def size(self) -> int:
        return self.delta1.shape[0]

    @property
    def pencil(self) -> Pencil:
        return Pencil(self.delta1, self.delta0)

    @property
    def degenerate(self) -> bool:
        return not np.any(self.delta0) or not np.any(self.delta1)


@dataclass(frozen=True)
class Root2D:
    """A solution ``(lam, mu)`` with normalized determinant residuals."""

    lam: complex
    mu: complex
    residuals: tuple[float, float]


def _coefficient_degree(coeffs: dict) -> int:
    nonzero = [i + j for (i, j), c in coeffs.items() if c != 0]
    return max(nonzero, default=0)


def uniform_matrices(coeffs: dict, d: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(A, B, C)`` of size ``2d-1`` with ``det(A + lam B + mu C) = p(lam, mu)``.

    ``coeffs`` maps ``(i, j)`` to the coefficient of ``lam^i mu^j`` (total
    degree at most ``d``). The matrix has the block form ``[[T, L_lam],
    [L_mu, 0]]``: ``L_lam`` is ``d x (d-1)`` with ones on the diagonal and
    ``-lam`` below it, ``L_mu`` is ``(d-1) x d`` with ones on the diagonal and
    ``-mu`` above it. Its Schur complement pairs the entry ``T[d-1-a, d-1-b]``
    with ``lam^a mu^b``, so lower-degree terms sit there as constants, a top
    term with ``a >= 1`` is stored one row up as ``c*lam`` and ``mu^d`` as
    ``c*mu`` in the bottom-left corner. The border contributes a sign
    ``(-1)^(d-1)``, which is folded into ``T``.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if _coefficient_degree(coeffs) > d:
        raise ValueError(f"coefficients exceed total degree {d}")
    s = 2 * d - 1
    dtype = complex if any(np.iscomplexobj(c) or isinstance(c, complex)
                           for c in coeffs.values()) else float
    A = np.zeros((s, s), dtype=dtype)
    B = np.zeros((s, s), dtype=dtype)
    C = np.zeros((s, s), dtype=dtype)
    sign = (-1) ** (d - 1)
    for (a, b), c in coeffs.items():
        c = sign * c
        if a < 0 or b < 0:
            raise ValueError("exponents must be nonnegative")
        if a + b < d:
            A[d - 1 - a, d - 1 - b] += c
        elif a >= 1:
            B[d - a, d - 1 - b] += c
        else:
            C[d - 1, 0] += c
    for i in range(d - 1):
        A[i, d + i] = 1.0
        B[i + 1, d + i] = -1.0
        A[d + i, i] = 1.0
        C[d + i, i + 1] = -1.0
    return A, B, C


def uniform_rep(p1: dict, p2: dict, degree: int | None = None) -> DeterminantalRep:
    """Determinantal representation of two bivariate polynomials of degree ``d``."""
    d = degree or max(_coefficient_degree(p1), _coefficient_degree(p2), 1)
    A1, B1, C1 = uniform_matrices(p1, d)
    A2, B2, C2 = uniform_matrices(p2, d)
    return DeterminantalRep(A1, B1, C1, A2, B2, C2, degree=d)


def evaluate_poly(coeffs: dict, lam: complex, mu: complex) -> complex:
    return complex(sum(c * lam ** i * mu ** j for (i, j), c in coeffs.items()))


def build_delta_pencils(rep: DeterminantalRep) -> DeltaPencils:
    """Operator determinants ``Delta1 = C1 (x) A2 - A1 (x) C2`` and
    ``Delta0 = B1 (x) C2 - C1 (x) B2``.

    For a rep of total degree ``d`` built as in :func:`uniform_rep` the normal
    rank is ``(2d-1)^2 - (d-1)^2``.
    """
    delta1 = kron(rep.C1, rep.A2) - kron(rep.A1, rep.C2)
    delta0 = kron(rep.B1, rep.C2) - kron(rep.C1, rep.B2)
    expected = None
    if rep.degree is not None:
        d = rep.degree
        if rep.A1.shape[0] == rep.A2.shape[0] == 2 * d - 1:
            expected = delta1.shape[0] - (d - 1) ** 2
    return DeltaPencils(delta1, delta0, expected)


def _mu_values(M0: np.ndarray, C: np.ndarray) -> list[ProjectiveValue]:
    # M0 + mu C = 0  <=>  M0 x = mu (-C) x
    a, b = scipy.linalg.eigvals(M0, -C, homogeneous_eigvals=True)
    out = []
    for ah, bh in zip(a, b):
        v = ProjectiveValue(complex(ah), complex(bh))
        if v.weight > MU_INF_TOL:
            out.append(v)
    return out


def _mu_pencil_singular(M0: np.ndarray, C: np.ndarray, tol: float = 1e-10) -> bool:
    # M0 + mu C rank deficient at two fixed points on the unit circle
    nM, nC = np.linalg.norm(M0, 1), np.linalg.norm(C, 1)
    if nM == 0 or nC == 0:
        return nM == 0 and nC == 0
    for eta in (np.exp(0.7j), np.exp(2.3j)):
        sv = np.linalg.svd(M0 / nM + eta * C / nC, compute_uv=False)
        if sv[-1] > tol * sv[0]:
            return False
    return True


def recover_mu(rep: DeterminantalRep, lam: complex, tol: float = MU_MATCH_TOL) -> list[complex]:
    """Values ``mu`` for which both ``A_i + lam B_i + mu C_i`` are singular.

    The finite eigenvalues ``mu`` of the two one-parameter pencils are matched
    greedily, closest chordal pair first, and accepted within ``tol``. The
    midpoint of each matched pair is returned. If one pencil is singular for
    every ``mu`` (``lam`` lies on a curve component ``p_i(lam, .) = 0``), the
    finite eigenvalues of the other pencil are returned as they are.
    """
    if not np.isfinite(lam):
        raise ValueError("lam must be finite")
    M1, M2 = rep.A1 + lam * rep.B1, rep.A2 + lam * rep.B2
    sing1, sing2 = _mu_pencil_singular(M1, rep.C1), _mu_pencil_singular(M2, rep.C2)
    if sing1 and sing2:
        raise NoCommonMu(f"both pencils are singular for every mu at lam={lam}")
    if sing1 or sing2:
        out = [v.value for v in (_mu_values(M2, rep.C2) if sing1 else _mu_values(M1, rep.C1))]
        if not out:
            raise NoCommonMu(f"no finite mu for lam={lam}")
        return out
    m1 = _mu_values(M1, rep.C1)
    m2 = _mu_values(M2, rep.C2)
    pairs = sorted((chordal_distance(x, y), i, j)
                   for i, x in enumerate(m1) for j, y in enumerate(m2))
    used1, used2, out = set(), set(), []
    for dist, i, j in pairs:
        if dist > tol:
            break
        if i in used1 or j in used2:
            continue
        used1.add(i)
        used2.add(j)
        out.append(0.5 * (m1[i].value + m2[j].value))
    if not out:
        raise NoCommonMu(f"no common mu for lam={lam}")
    return out


def det_residual(M0: np.ndarray, B: np.ndarray, C: np.ndarray, lam: complex, mu: complex) -> float:
    """``|det(M0 + lam B + mu C)| / (||M0|| + |lam| ||B|| + |mu| ||C||)^s`` (Frobenius)."""
    M = M0 + lam * B + mu * C
    scale = (np.linalg.norm(M0) + abs(lam) * np.linalg.norm(B)
             + abs(mu) * np.linalg.norm(C))
    if scale == 0:
        return 0.0
    sign, logdet = np.linalg.slogdet(M / scale)
    return float(abs(sign) * np.exp(logdet))


def finite_true_values(spectrum: ClassifiedSpectrum,
                       ccfg: ClassifierConfig | None = None) -> list[complex]:
    """Finite true eigenvalues of a solver result after the gamma/gap filter."""
    return [v.value for v in classify_spectrum(spectrum, ccfg).finite]


def _cluster(values: list[complex], tol: float = MU_MATCH_TOL) -> list[list[complex]]:
    """Group values whose chordal distance to a group's first member is within ``tol``."""
    groups: list[list[complex]] = []
    for z in values:
        pz = ProjectiveValue.from_value(z)
        for g in groups:
            if chordal_distance(ProjectiveValue.from_value(g[0]), pz) <= tol:
                g.append(z)
                break
        else:
            groups.append([z])
    return groups


def _resolve_k(pencils: DeltaPencils, nrank: int | None, rng) -> int:
    if nrank is None:
        nrank = pencils.expected_nrank
    if nrank is None:
        nrank = estimate_normal_rank(pencils.pencil, rng=rng).nrank
    return pencils.size - nrank


def solve_bivariate(rep: DeterminantalRep, cfg: SolverConfig | None = None,
                    ccfg: ClassifierConfig | None = None, nrank: int | None = None
                    ) -> tuple[list[Root2D], ClassifiedSpectrum]:
    """Roots of the system together with the projected spectrum they came from."""
    cfg = cfg or SolverConfig()
    pencils = build_delta_pencils(rep)
    if pencils.degenerate:
        raise DegenerateRep("an operator determinant vanishes identically")
    rng = cfg.rng()
    k = _resolve_k(pencils, nrank, rng)
    spectrum = project_solve(pencils.pencil, k, cfg, rng)
    roots = []
    for group in _cluster(finite_true_values(spectrum, ccfg)):
        center = complex(np.mean(group))
        try:
            mus = recover_mu(rep, center)
        except NoCommonMu:
            warnings.warn(f"dropping lam={center:.6g}: no common mu", RuntimeWarning)
            continue
        # one root per copy of lam; copies share the recovered mu values in order
        for i, lam in enumerate(group):
            mu = mus[i % len(mus)]
            res = (det_residual(rep.A1, rep.B1, rep.C1, lam, mu),
                   det_residual(rep.A2, rep.B2, rep.C2, lam, mu))
            roots.append(Root2D(complex(lam), complex(mu), res))
    return roots, spectrum


def solve_bivariate_lambda(rep: DeterminantalRep, cfg: SolverConfig | None = None,
                           ccfg: ClassifierConfig | None = None,
                           nrank: int | None = None) -> list[Root2D]:
    """Solve ``det(A_i + lam B_i + mu C_i) = 0``, ``i = 1, 2``.

    ``lam`` comes from projecting ``Delta1 - lam Delta0`` onto its normal rank
    and ``mu`` from :func:`recover_mu`. The rank is ``nrank`` if given, else
    the rep's expected rank, else a random-sample estimate.
    """
    return solve_bivariate(rep, cfg, ccfg, nrank)[0]


def build_double_eig_pencil(A, B) -> DeltaPencils:
    """Operator determinants locating ``lam`` where ``A + lam B`` has a Jordan block.

    Pairs ``(A + lam B - mu I) x = 0`` with the ``2n x 2n`` problem that asks
    for a Jordan chain of length two at ``mu``. The pencil has size ``2n^2``
    and normal rank ``2n^2 - n``.
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise ShapeMismatch("A and B must be square with equal shapes")
    n = A.shape[0]
    I = np.eye(n)
    Z = np.zeros((n, n))
    A2 = np.block([[A, Z], [-I, A]])
    B2 = np.block([[B, Z], [Z, B]])
    rep = DeterminantalRep(A, B, -I, A2, B2, -np.eye(2 * n))
    pencils = build_delta_pencils(rep)
    return DeltaPencils(pencils.delta1, pencils.delta0, 2 * n * n - n)


def find_double_eigs(A, B, cfg: SolverConfig | None = None,
                     ccfg: ClassifierConfig | None = None) -> list[complex]:
    """Values ``lam`` at which ``A + lam B`` has a non-semisimple double eigenvalue.

    A generic pair has ``n(n-1)`` of them. Semisimple double eigenvalues do
    not show up in this formulation.
    """
    return double_eig_spectrum(A, B, cfg, ccfg)[0]


def double_eig_spectrum(A, B, cfg: SolverConfig | None = None,
                        ccfg: ClassifierConfig | None = None
                        ) -> tuple[list[complex], ClassifiedSpectrum]:
    cfg = cfg or SolverConfig()
    pencils = build_double_eig_pencil(A, B)
    n = np.asarray(A).shape[0]
    if pencils.degenerate:
        return [], None
    spectrum = project_solve(pencils.pencil, n, cfg, cfg.rng())
    return finite_true_values(spectrum, ccfg), spectrum


def system_pencil(Asys, Bsys, Csys, Dsys) -> Pencil:
    """``S(lam) = [lam I - A, B; -C, D]`` written as ``X - lam Y``."""
    Asys, Bsys, Csys, Dsys = (np.atleast_2d(np.asarray(M)) for M in (Asys, Bsys, Csys, Dsys))
    n = Asys.shape[0]
    if Asys.shape != (n, n):
        raise ShapeMismatch("A must be square")
    p = Bsys.shape[1]
    q = Csys.shape[0]
    if Bsys.shape != (n, p) or Csys.shape != (q, n) or Dsys.shape != (q, p):
        raise ShapeMismatch(
            f"incompatible shapes A{Asys.shape} B{Bsys.shape} C{Csys.shape} D{Dsys.shape}")
    X = np.block([[-Asys, Bsys], [-Csys, Dsys]])
    Y = np.zeros((n + q, n + p))
    Y[:n, :n] = -np.eye(n)
    return Pencil(X, Y)


def transmission_spectrum(Asys, Bsys, Csys, Dsys, cfg: SolverConfig | None = None,
                          ccfg: ClassifierConfig | None = None,
                          nrank: int | None = None) -> tuple[list[complex], ClassifiedSpectrum]:
    cfg = cfg or SolverConfig()
    S = system_pencil(Asys, Bsys, Csys, Dsys)
    rng = cfg.rng()
    tall, transposed = to_tall(S)
    if nrank is None:
        nrank = estimate_normal_rank(tall, rng=rng).nrank
    spectrum = project_solve(tall, tall.n - nrank, cfg, rng)
    if transposed:
        spectrum = untranspose(spectrum)
    return finite_true_values(spectrum, ccfg), spectrum


def transmission_zeros(Asys, Bsys, Csys, Dsys, cfg: SolverConfig | None = None,
                       ccfg: ClassifierConfig | None = None,
                       nrank: int | None = None) -> list[complex]:
    """Finite true eigenvalues of the system pencil ``[lam I - A, B; -C, D]``."""
    return transmission_spectrum(Asys, Bsys, Csys, Dsys, cfg, ccfg, nrank)[0]
