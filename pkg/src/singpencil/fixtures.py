"""Worked-example matrices used by tests, the acceptance suite and the CLI."""

import numpy as np

from .pencil import Pencil


def pencil_7x7() -> Pencil:
    """7 x 7 pencil of normal rank 6 with blocks J1(1/2), J1(1/3), N1, L1, L2^T."""
    A = np.array([
        [-1, -1, -1, -1, -1, -1, -1],
        [1, 0, 0, 0, 0, 0, 0],
        [1, 2, 1, 1, 1, 1, 1],
        [1, 2, 3, 3, 3, 3, 3],
        [1, 2, 3, 2, 2, 2, 2],
        [1, 2, 3, 4, 3, 3, 3],
        [1, 2, 3, 4, 5, 5, 4],
    ], dtype=float)
    B = np.array([
        [-2, -2, -2, -2, -2, -2, -2],
        [2, -1, -1, -1, -1, -1, -1],
        [2, 5, 5, 5, 5, 5, 5],
        [2, 5, 5, 4, 4, 4, 4],
        [2, 5, 5, 6, 5, 5, 5],
        [2, 5, 5, 6, 7, 7, 7],
        [2, 5, 5, 6, 7, 6, 6],
    ], dtype=float)
    return Pencil(A, B)


def pencil_5x5() -> Pencil:
    """5 x 5 pencil with blocks L0^T, L2, J1(1), J1(2); plain QZ fails on it."""
    A = np.array([
        [1, -2, 100, 0, 0],
        [1, 0, -1, 0, 0],
        [0, 0, 0, 1, -75],
        [0, 0, 0, 0, 2],
        [0, 0, 0, 0, 0],
    ], dtype=float)
    B = np.diag(np.ones(4), 1)
    return Pencil(A, B)


def bivariate_rep_matrices() -> dict:
    """``A_i + lam B_i + mu C_i`` (5 x 5) whose determinants are the cubics

    p1 = 1 + 2l + 3m + 4l^2 + 5lm + 6m^2 + 7l^3 + 8l^2m + 9lm^2 + 10m^3,
    p2 = 10 + 9l + 8m + 7l^2 + 6lm + 5m^2 + 4l^3 + 3l^2m + 2lm^2 + m^3.
    """
    A1 = np.array([
        [0, 0, 4, 1, 0],
        [0, 5, 2, 0, 1],
        [6, 3, 1, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ], dtype=float)
    B1 = np.array([
        [0, 0, 7, 0, 0],
        [0, 8, 0, -1, 0],
        [9, 0, 0, 0, -1],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ], dtype=float)
    C1 = np.array([
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [10, 0, 0, 0, 0],
        [0, -1, 0, 0, 0],
        [0, 0, -1, 0, 0],
    ], dtype=float)
    A2 = np.array([
        [0, 0, 7, 1, 0],
        [0, 6, 9, 0, 1],
        [5, 8, 10, 0, 0],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
    ], dtype=float)
    B2 = np.array([
        [0, 0, 4, 0, 0],
        [0, 3, 0, -1, 0],
        [2, 0, 0, 0, -1],
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
    ], dtype=float)
    C2 = np.array([
        [0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0],
        [0, -1, 0, 0, 0],
        [0, 0, -1, 0, 0],
    ], dtype=float)
    return dict(A1=A1, B1=B1, C1=C1, A2=A2, B2=B2, C2=C2)


def bivariate_coefficients() -> tuple[dict, dict]:
    """Coefficients ``{(i, j): c}`` of ``lam^i mu^j`` for the two cubics above."""
    mons = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0), (2, 1), (1, 2), (0, 3)]
    p1 = {mon: float(c) for mon, c in zip(mons, range(1, 11))}
    p2 = {mon: float(c) for mon, c in zip(mons, range(10, 0, -1))}
    return p1, p2


def control_system() -> dict:
    """State-space system with 5 states, 2 inputs and 3 outputs.

    The system pencil ``[lam I - A, B; -C, D]`` drops rank at 4 and -3. Negating
    ``A`` moves the zeros to 3 and -4.
    """
    A = np.array([
        [-2, -6, 3, -7, 6],
        [0, -5, 4, -4, 8],
        [0, 2, 0, 2, -2],
        [0, 6, -3, 5, -6],
        [0, -2, 2, -2, 5],
    ], dtype=float)
    B = np.array([[-2, 7], [-8, -5], [-3, 0], [1, 5], [-8, 0]], dtype=float)
    C = np.array([
        [0, -1, 2, -1, -1],
        [1, 1, 1, 0, -1],
        [0, 3, -2, 3, -1],
    ], dtype=float)
    D = np.zeros((3, 2))
    return dict(A=A, B=B, C=C, D=D)
