"""Seeded random matrices for identity checks and searches."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .linalg import EXACT, FLOAT, Matrix
from .scalars import GaussianRational


def _rational(rng: np.random.Generator, bound: int, denom: int) -> Fraction:
    return Fraction(int(rng.integers(-bound * denom, bound * denom + 1)), denom)


def random_hermitian(rng: np.random.Generator, n: int, mode: str = EXACT, complex_entries: bool = False,
                     bound: int = 2, denom: int = 4) -> Matrix:
    """Hermitian matrix with entries ``k/denom`` in ``[-bound, bound]`` (real and imaginary parts)."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = _rational(rng, bound, denom)
        for j in range(i + 1, n):
            re = _rational(rng, bound, denom)
            im = _rational(rng, bound, denom) if complex_entries else Fraction(0)
            rows[i][j] = GaussianRational.make(re, im)
            rows[j][i] = GaussianRational.make(re, -im)
    A = Matrix(tuple(tuple(r) for r in rows), EXACT)
    return A if mode == EXACT else A.as_float()


def random_square(rng: np.random.Generator, n: int, mode: str = EXACT, bound: int = 2, denom: int = 4) -> Matrix:
    """Arbitrary (generally non-Hermitian) rational matrix."""
    rows = tuple(tuple(_rational(rng, bound, denom) for _ in range(n)) for _ in range(n))
    A = Matrix(rows, EXACT)
    return A if mode == EXACT else A.as_float()


def random_gram(rng: np.random.Generator, n: int, rank: int | None = None, mode: str = EXACT,
                bound: int = 2, denom: int = 4) -> Matrix:
    """PSD matrix ``V V^T`` with rational ``V`` of shape ``n x rank``."""
    rank = n if rank is None else rank
    V = [[_rational(rng, bound, denom) for _ in range(rank)] for _ in range(n)]
    rows = tuple(tuple(sum((V[i][t] * V[j][t] for t in range(rank)), Fraction(0)) for j in range(n))
                 for i in range(n))
    A = Matrix(rows, EXACT)
    return A if mode == EXACT else A.as_float()


def random_contraction(rng: np.random.Generator, n: int) -> Matrix:
    """Float PSD matrix with spectrum in ``[0, 1]``."""
    G = rng.standard_normal((n, n))
    Q, _ = np.linalg.qr(G)
    lam = rng.uniform(0.0, 1.0, n)
    M = (Q * lam) @ Q.T
    M = (M + M.T) / 2
    return Matrix.from_rows(M.tolist(), FLOAT)
