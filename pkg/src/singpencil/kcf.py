"""Pencils with prescribed Kronecker structure, hidden by random equivalence."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .pencil import Pencil, ProjectiveValue


class SingularTransform(RuntimeError):
    pass


@dataclass(frozen=True)
class KcfSpec:
    """Block structure of a pencil in Kronecker canonical form.

    ``jordan_blocks`` holds ``(eigenvalue, size)`` pairs and ``infinite_blocks``
    the sizes of the nilpotent blocks ``I - lambda*N``.
    """

    right_minimal_indices: tuple[int, ...] = ()
    left_minimal_indices: tuple[int, ...] = ()
    jordan_blocks: tuple[tuple[complex, int], ...] = ()
    infinite_blocks: tuple[int, ...] = ()

    def __post_init__(self):
        right = tuple(int(v) for v in self.right_minimal_indices)
        left = tuple(int(v) for v in self.left_minimal_indices)
        jordan = tuple((complex(ev), int(d)) for ev, d in self.jordan_blocks)
        inf = tuple(int(v) for v in self.infinite_blocks)
        if any(v < 0 for v in right + left):
            raise ValueError("minimal indices must be nonnegative")
        if any(d < 1 for _, d in jordan) or any(v < 1 for v in inf):
            raise ValueError("Jordan and infinite block sizes must be positive")
        if not np.all(np.isfinite([ev for ev, _ in jordan])):
            raise ValueError("Jordan eigenvalues must be finite")
        object.__setattr__(self, "right_minimal_indices", right)
        object.__setattr__(self, "left_minimal_indices", left)
        object.__setattr__(self, "jordan_blocks", jordan)
        object.__setattr__(self, "infinite_blocks", inf)

    @property
    def regular_size(self) -> int:
        return sum(d for _, d in self.jordan_blocks) + sum(self.infinite_blocks)

    @property
    def n_rows(self) -> int:
        return (sum(self.right_minimal_indices)
                + sum(v + 1 for v in self.left_minimal_indices)
                + self.regular_size)

    @property
    def n_cols(self) -> int:
        return (sum(v + 1 for v in self.right_minimal_indices)
                + sum(self.left_minimal_indices)
                + self.regular_size)

    @property
    def nrank(self) -> int:
        return (sum(self.right_minimal_indices) + sum(self.left_minimal_indices)
                + self.regular_size)

    def true_eigenvalues(self) -> list[tuple[ProjectiveValue, int]]:
        """Regular-part eigenvalues with algebraic multiplicities."""
        counts: Counter = Counter()
        for ev, d in self.jordan_blocks:
            counts[ev] += d
        out = [(ProjectiveValue.from_value(ev), mult) for ev, mult in counts.items()]
        n_inf = sum(self.infinite_blocks)
        if n_inf:
            out.append((ProjectiveValue.infinity(), n_inf))
        return out

    def to_dict(self) -> dict:
        return {
            "right": list(self.right_minimal_indices),
            "left": list(self.left_minimal_indices),
            "jordan": [[ev.real, ev.imag, d] for ev, d in self.jordan_blocks],
            "infinite": list(self.infinite_blocks),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KcfSpec":
        jordan = []
        for item in d.get("jordan", []):
            if len(item) == 2:
                ev, size = item
                ev = complex(ev) if not isinstance(ev, list) else complex(*ev)
            else:
                ev, size = complex(item[0], item[1]), item[2]
            jordan.append((ev, size))
        return cls(
            right_minimal_indices=d.get("right", []),
            left_minimal_indices=d.get("left", []),
            jordan_blocks=jordan,
            infinite_blocks=d.get("infinite", []),
        )


@dataclass(frozen=True)
class GeneratedPencil:
    pencil: Pencil
    spec: KcfSpec
    nrank: int
    true_eigenvalues: list = field(default_factory=list)


def _jordan(ev: complex, d: int):
    J = ev * np.eye(d, dtype=complex) + np.eye(d, k=1)
    return J, np.eye(d)


def _nilpotent(d: int):
    return np.eye(d), np.eye(d, k=1)


def _L(j: int):
    # L_j(lambda) = [0 I_j] - lambda [I_j 0], of size j x (j+1)
    A = np.hstack([np.zeros((j, 1)), np.eye(j)])
    B = np.hstack([np.eye(j), np.zeros((j, 1))])
    return A, B


def build_canonical(spec: KcfSpec) -> Pencil:
    """Block-diagonal canonical pencil.

    Block order: Jordan blocks, infinite blocks, right blocks ``L_m``, left
    blocks ``L_n^T``, each in the order given by ``spec``.
    """
    blocks = [_jordan(ev, d) for ev, d in spec.jordan_blocks]
    blocks += [_nilpotent(d) for d in spec.infinite_blocks]
    blocks += [_L(j) for j in spec.right_minimal_indices]
    blocks += [(A.T, B.T) for A, B in (_L(j) for j in spec.left_minimal_indices)]
    n, m = spec.n_rows, spec.n_cols
    A = np.zeros((n, m), dtype=complex)
    B = np.zeros((n, m), dtype=complex)
    r = c = 0
    for Ab, Bb in blocks:
        h, w = Ab.shape
        A[r:r + h, c:c + w] = Ab
        B[r:r + h, c:c + w] = Bb
        r += h
        c += w
    if not np.any(A.imag) and not np.any(B.imag):
        A, B = A.real, B.real
    return Pencil(A, B)


def _random_transform(size, rng, complex_, max_cond, attempts):
    for _ in range(attempts):
        M = rng.standard_normal((size, size))
        if complex_:
            M = M + 1j * rng.standard_normal((size, size))
        if size == 0 or np.linalg.cond(M) <= max_cond:
            return M
    raise SingularTransform(
        f"no transform of size {size} with condition number <= {max_cond:g} "
        f"in {attempts} attempts")


def generate(spec: KcfSpec, rng: np.random.Generator, complex_transforms: bool = False,
             max_cond: float = 1e8, attempts: int = 10) -> GeneratedPencil:
    """Hide the canonical pencil of ``spec`` behind random Gaussian ``P``, ``Q``.

    Returns ``P A0 Q - lambda P B0 Q``. The left transform is drawn first.
    """
    canon = build_canonical(spec)
    P = _random_transform(spec.n_rows, rng, complex_transforms, max_cond, attempts)
    Q = _random_transform(spec.n_cols, rng, complex_transforms, max_cond, attempts)
    pencil = Pencil(P @ canon.A @ Q, P @ canon.B @ Q)
    return GeneratedPencil(pencil, spec, spec.nrank, spec.true_eigenvalues())


def kcf_18x18_spec() -> KcfSpec:
    """``L_1, L_2, L_1^T, L_2^T, J_4(1), J_2(1), J_1(1), N_2, N_1``; 18 x 18, nrank 16."""
    return KcfSpec(
        right_minimal_indices=(1, 2),
        left_minimal_indices=(1, 2),
        jordan_blocks=((1.0, 4), (1.0, 2), (1.0, 1)),
        infinite_blocks=(2, 1),
    )
