"""Square matrices in exact (Gaussian-rational) or float mode.

Two principal-submatrix conventions are used throughout the package:

* ``submatrix_removed(A, S)`` deletes the rows/columns in ``S`` (written A_S).
* ``submatrix_kept(A, S)`` keeps only the rows/columns in ``S`` (written A(S));
  ``S`` may be a multiset, in which case rows are repeated.

Indices are 0-based.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NotAboveRootsError
from .poly import MultilinearPoly, UniPoly, indices_of, max_root
from .scalars import GaussianRational, conj, is_exact, parse_exact

EXACT = "exact"
FLOAT = "float"
HERMITIAN_TOL = 1e-12


def _normalize_entry(x, mode: str):
    if mode == EXACT:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, GaussianRational):
            return GaussianRational.make(x.re, x.im)
        if isinstance(x, complex):
            return GaussianRational.make(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, float):
            return Fraction(x)
        raise TypeError(f"cannot use {x!r} as an exact entry")
    if isinstance(x, (complex, GaussianRational)):
        c = complex(x)
        return c.real if c.imag == 0 else c
    return float(x)


@dataclass(frozen=True)
class Matrix:
    """Dense square matrix; ``entries`` is a tuple of row tuples."""

    entries: tuple
    mode: str = EXACT

    def __post_init__(self):
        rows = tuple(tuple(_normalize_entry(x, self.mode) for x in row) for row in self.entries)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("matrix must be square")
        for row in rows:
            for x in row:
                if not is_exact(x) and not all(map(math.isfinite, (complex(x).real, complex(x).imag))):
                    raise ValueError("matrix entries must be finite")
        object.__setattr__(self, "entries", rows)
        if self.mode not in (EXACT, FLOAT):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def rows(self):
        return self.entries

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], mode: str | None = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if mode is None:
            mode = EXACT if all(is_exact(x) for r in rows for x in r) else FLOAT
        return cls(tuple(tuple(r) for r in rows), mode)

    @classmethod
    def zeros(cls, n: int, mode: str = EXACT) -> "Matrix":
        return cls(tuple(tuple(0 for _ in range(n)) for _ in range(n)), mode)

    @classmethod
    def identity(cls, n: int, mode: str = EXACT) -> "Matrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), mode)

    @classmethod
    def diag(cls, values: Sequence, mode: str | None = None) -> "Matrix":
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], mode)

    @classmethod
    def ones(cls, n: int, mode: str = EXACT) -> "Matrix":
        return cls(tuple(tuple(1 for _ in range(n)) for _ in range(n)), mode)

    def is_hermitian(self, tol: float | None = None) -> bool:
        tol = 0 if self.mode == EXACT else (HERMITIAN_TOL if tol is None else tol)
        for i in range(self.n):
            for j in range(i, self.n):
                d = self.entries[i][j] - conj(self.entries[j][i])
                if (d != 0) if tol == 0 else abs(d) > tol:
                    return False
        return True

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(x) for x in row] for row in self.entries], dtype=complex).reshape(self.n, self.n)

    def as_float(self) -> "Matrix":
        return Matrix(self.entries, FLOAT)

    def map(self, f) -> "Matrix":
        return Matrix(tuple(tuple(f(x) for x in row) for row in self.entries), self.mode)

    def __add__(self, other: "Matrix") -> "Matrix":
        mode = EXACT if self.mode == other.mode == EXACT else FLOAT
        return Matrix(tuple(tuple(a + b for a, b in zip(r1, r2))
                            for r1, r2 in zip(self.entries, other.entries)), mode)

    def __neg__(self) -> "Matrix":
        return self.map(lambda x: -x)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        return self.map(lambda x: c * x)

    def shift(self, c) -> "Matrix":
        """``A + c*I``."""
        return Matrix(tuple(tuple(x + c if i == j else x for j, x in enumerate(row))
                            for i, row in enumerate(self.entries)), self.mode)

    def matmul(self, other: "Matrix") -> "Matrix":
        n = self.n
        rows = []
        for i in range(n):
            rows.append(tuple(sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), 0)
                              for j in range(n)))
        mode = EXACT if self.mode == other.mode == EXACT else FLOAT
        return Matrix(tuple(rows), mode)

    def conj_transpose(self) -> "Matrix":
        return Matrix(tuple(tuple(conj(self.entries[j][i]) for j in range(self.n))
                            for i in range(self.n)), self.mode)

    def permuted(self, perm: Sequence[int]) -> "Matrix":
        """``B[i][j] = A[perm[i]][perm[j]]``."""
        return Matrix(tuple(tuple(self.entries[perm[i]][perm[j]] for j in range(self.n))
                            for i in range(self.n)), self.mode)

    def diagonal(self) -> list:
        return [self.entries[i][i] for i in range(self.n)]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)


def hermitian(rows, mode: str | None = None) -> Matrix:
    """Build a matrix and check it is Hermitian (exactly in exact mode)."""
    A = rows if isinstance(rows, Matrix) else Matrix.from_rows(rows, mode)
    if not A.is_hermitian():
        raise ValueError("matrix is not Hermitian")
    return A


# ---------------------------------------------------------------------------
# index sets


def _check_indices(n: int, idx: Iterable[int]):
    for i in idx:
        if not (0 <= i < n):
            raise IndexError(f"index {i} out of range for dimension {n}")


def submatrix_removed(A: Matrix, S: Iterable[int]) -> Matrix:
    """A_S: delete the rows and columns listed in ``S``; survivors keep their order."""
    S = set(S)
    _check_indices(A.n, S)
    keep = [i for i in range(A.n) if i not in S]
    return Matrix(tuple(tuple(A.entries[i][j] for j in keep) for i in keep), A.mode)


def multiset_order(S) -> list[int]:
    """Row order for a kept multiset: ascending index, repeats adjacent."""
    if isinstance(S, Mapping):
        return [i for i in sorted(S) for _ in range(S[i])]
    return sorted(S)


def submatrix_kept(A: Matrix, S) -> Matrix:
    """A(S): rows/columns from the (multi)set ``S``.

    ``S`` may be an iterable with repeats or a mapping ``index -> multiplicity``.
    Repeated rows are ordered by (index, repeat count) ascending.
    """
    order = multiset_order(S)
    _check_indices(A.n, order)
    return Matrix(tuple(tuple(A.entries[i][j] for j in order) for i in order), A.mode)


def multiset_counts(S) -> Counter:
    if isinstance(S, Mapping):
        return Counter({i: m for i, m in S.items() if m})
    return Counter(S)


# ---------------------------------------------------------------------------
# pavings


@dataclass(frozen=True)
class Paving:
    """Ordered partition of ``range(n)`` into ``r`` labelled blocks."""

    r: int
    assign: tuple

    def __post_init__(self):
        assign = tuple(int(b) for b in self.assign)
        if self.r < 1:
            raise ValueError("block count must be positive")
        if any(not (0 <= b < self.r) for b in assign):
            raise ValueError("block label out of range")
        object.__setattr__(self, "assign", assign)

    @property
    def n(self) -> int:
        return len(self.assign)

    @classmethod
    def from_blocks(cls, n: int, blocks: Sequence[Iterable[int]]) -> "Paving":
        assign = [None] * n
        for k, block in enumerate(blocks):
            for i in block:
                if assign[i] is not None:
                    raise ValueError(f"index {i} appears in two blocks")
                assign[i] = k
        if any(a is None for a in assign):
            raise ValueError("blocks do not cover every index")
        return cls(len(blocks), tuple(assign))

    def blocks(self) -> list[list[int]]:
        out = [[] for _ in range(self.r)]
        for i, b in enumerate(self.assign):
            out[b].append(i)
        return out

    def block_masks(self) -> list[int]:
        out = [0] * self.r
        for i, b in enumerate(self.assign):
            out[b] |= 1 << i
        return out

    def to_json(self) -> list[int]:
        return list(self.assign)


def pinch(A: Matrix, X: Paving) -> Matrix:
    """Zero every entry whose row and column lie in different blocks."""
    if X.n != A.n:
        raise ValueError("paving and matrix dimensions differ")
    a = X.assign
    return Matrix(tuple(tuple(x if a[i] == a[j] else 0 for j, x in enumerate(row))
                        for i, row in enumerate(A.entries)), A.mode)


# ---------------------------------------------------------------------------
# determinants and characteristic polynomials


def det(A: Matrix):
    """Determinant by fraction-exact Gaussian elimination (partial pivoting in float mode)."""
    n = A.n
    if n == 0:
        return Fraction(1) if A.mode == EXACT else 1.0
    if A.mode == FLOAT:
        d = np.linalg.det(A.to_numpy())
        return d.real if abs(d.imag) <= 1e-13 * max(1.0, abs(d)) and A.is_hermitian() else complex(d)
    m = [list(row) for row in A.entries]
    out = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            out = -out
        piv = m[c][c]
        out = out * piv
        for r in range(c + 1, n):
            if m[r][c] == 0:
                continue
            f = m[r][c] / piv
            row_r, row_c = m[r], m[c]
            for k in range(c, n):
                row_r[k] = row_r[k] - f * row_c[k]
    return out


def char_poly(A: Matrix) -> UniPoly:
    """det(xI - A) as a monic UniPoly.

    Exact mode uses the Faddeev-LeVerrier recursion over Q(i); float mode
    builds the polynomial from eigenvalues (Hermitian) or numpy.poly.
    """
    n = A.n
    if A.mode == FLOAT:
        M = A.to_numpy()
        if n == 0:
            return UniPoly([1.0])
        if A.is_hermitian():
            c = np.poly(np.linalg.eigvalsh(M))
            return UniPoly(float(v) for v in c[::-1])
        c = np.poly(M)
        return UniPoly(complex(v) if abs(v.imag) > 0 else float(v.real) for v in c[::-1])
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    if n == 0:
        return UniPoly(coeffs)
    rows = A.entries
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
        AM = [[sum((rows[i][t] * M[t][j] for t in range(n)), Fraction(0)) for j in range(n)]
              for i in range(n)]
        for i in range(n):
            AM[i][i] = AM[i][i] + coeffs[n - k + 1]
        M = AM
        tr = sum((sum((rows[i][t] * M[t][i] for t in range(n)), Fraction(0)) for i in range(n)),
                 Fraction(0))
        coeffs[n - k] = -tr / k
    return UniPoly(coeffs)


def max_eigenvalue(A: Matrix) -> float:
    """Largest eigenvalue of a Hermitian matrix.

    Exact mode isolates the largest root of the characteristic polynomial;
    float mode calls LAPACK.
    """
    if A.n == 0:
        raise ValueError("empty matrix has no eigenvalues")
    if A.mode == EXACT:
        return max_root(char_poly(A))
    return float(np.linalg.eigvalsh(A.to_numpy())[-1])


def min_eigenvalue(A: Matrix) -> float:
    if A.mode == EXACT:
        from .poly import real_roots
        return real_roots(char_poly(A))[0][0]
    return float(np.linalg.eigvalsh(A.to_numpy())[0])


def eigenvalues(A: Matrix) -> np.ndarray:
    return np.linalg.eigvalsh(A.to_numpy())


def inverse(A: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan in exact mode; numpy otherwise."""
    n = A.n
    if A.mode == FLOAT:
        return Matrix.from_rows(np.linalg.inv(A.to_numpy()).tolist(), FLOAT)
    m = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A.entries)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return Matrix(tuple(tuple(row[n:]) for row in m), EXACT)


def resolvent_diagonal(A: Matrix, b, i: int):
    """``e_i^* (bI - A)^{-1} e_i`` for ``b`` above the spectrum of Hermitian ``A``."""
    _check_indices(A.n, [i])
    if not b > max_eigenvalue(A):
        raise NotAboveRootsError("b is not above roots (spectrum) of A")
    if A.mode == EXACT and is_exact(b):
        # Cramer: det of (bI-A) with row/col i removed over det(bI-A)
        M = A.scale(-1).shift(b)
        v = det(submatrix_removed(M, [i])) / det(M)
        return v.re if isinstance(v, GaussianRational) else v
    M = b * np.eye(A.n) - A.to_numpy()
    e = np.zeros(A.n)
    e[i] = 1.0
    return float(np.real(np.linalg.solve(M, e)[i]))


def harmonic_projection(n: int, k: int, centered: bool = False) -> Matrix:
    """Rank-k projection onto k discrete Fourier frequencies of length n.

    ``P[a][b] = (1/n) * sum_f w**(f*(a-b))`` with ``w = exp(2*pi*i/n)`` and
    ``f = 0..k-1``; every diagonal entry equals k/n. The result is exact when
    every power of ``w`` is a Gaussian integer (n in {1, 2, 4}).

    ``centered=True`` shifts the frequencies to ``f - (k-1)/2``. That is a
    conjugation by a diagonal unitary, which changes neither pinched spectra
    nor any det_r, and makes the matrix real symmetric:
    ``P[a][b] = (1/n) * sum_f cos(2*pi*f*(a-b)/n)``. It is returned exactly
    whenever all those cosines are rational (k = 1, and e.g. n = 6, k = 3).
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if centered:
        exact = _centered_exact(n, k)
        if exact is not None:
            return exact
        freqs = np.arange(k) - (k - 1) / 2
        d = np.subtract.outer(np.arange(n), np.arange(n))
        P = np.cos(2 * np.pi * np.multiply.outer(d, freqs) / n).sum(axis=-1) / n
        return Matrix.from_rows(((P + P.T) / 2).tolist(), FLOAT)
    if n in (1, 2, 4):
        unit = {1: [1], 2: [1, -1], 4: [1, GaussianRational(0, 1), -1, GaussianRational(0, -1)]}[n]
        rows = []
        for a in range(n):
            row = []
            for b in range(n):
                s = sum((unit[(f * (a - b)) % n] for f in range(k)), Fraction(0))
                row.append(s * Fraction(1, n))
            rows.append(row)
        return Matrix.from_rows(rows, EXACT)
    idx = np.arange(n)
    F = np.exp(2j * np.pi * np.outer(idx, np.arange(k)) / n) / np.sqrt(n)
    P = F @ F.conj().T
    P = (P + P.conj().T) / 2
    return Matrix.from_rows(P.tolist(), FLOAT)


# cos(2*pi*t) for the rational t where it is rational (t taken mod 1)
_RATIONAL_COS = {Fraction(0): Fraction(1), Fraction(1, 2): Fraction(-1), Fraction(1, 3): Fraction(-1, 2),
                 Fraction(2, 3): Fraction(-1, 2), Fraction(1, 4): Fraction(0), Fraction(3, 4): Fraction(0),
                 Fraction(1, 6): Fraction(1, 2), Fraction(5, 6): Fraction(1, 2)}


def _centered_exact(n: int, k: int) -> Matrix | None:
    half = Fraction(k - 1, 2)
    rows = []
    for a in range(n):
        row = []
        for b in range(n):
            s = Fraction(0)
            for f in range(k):
                c = _RATIONAL_COS.get(((f - half) * (a - b) / n) % 1)
                if c is None:
                    return None
                s += c
            row.append(s / n)
        rows.append(row)
    return Matrix.from_rows(rows, EXACT)


# ---------------------------------------------------------------------------
# JSON


def matrix_to_json(A: Matrix) -> dict:
    rows = []
    for row in A.entries:
        out = []
        for x in row:
            if A.mode == EXACT:
                if isinstance(x, GaussianRational):
                    out.append([str(x.re), str(x.im)])
                else:
                    out.append([str(Fraction(x)), "0"])
            else:
                c = complex(x)
                out.append([c.real, c.imag])
        rows.append(out)
    return {"n": A.n, "mode": A.mode, "entries": rows}


def matrix_from_json(data: dict) -> Matrix:
    try:
        n = int(data["n"])
        mode = data.get("mode", EXACT)
        entries = data["entries"]
        if len(entries) != n or any(len(row) != n for row in entries):
            raise ValueError("entries shape does not match n")
        rows = []
        for row in entries:
            out = []
            for cell in row:
                re, im = (cell, 0) if not isinstance(cell, (list, tuple)) else cell
                if mode == EXACT:
                    out.append(GaussianRational.make(parse_exact(re), parse_exact(im)))
                else:
                    out.append(complex(float(re), float(im)))
            rows.append(out)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad matrix JSON: {exc}") from exc
    return Matrix.from_rows(rows, mode)


MULTILINEAR_DET_LIMIT = 14


def multilinear_det(A: Matrix) -> MultilinearPoly:
    """``det(Z - A)`` expanded around ``Z = xI``: the w^S coefficient of ``det((xI + W) - A)``.

    Each coefficient is a UniPoly in ``x`` and equals ``char_poly(A_S)``
    (removed convention). It is computed from the principal minors
    ``c_T = det((-A)_T)`` of ``det(Z - A) = sum_T z^T c_T`` by substituting
    ``z_i = x + w_i``, so that check is not circular.
    """
    n = A.n
    if n > MULTILINEAR_DET_LIMIT:
        raise ValueError(f"multilinear_det limited to n <= {MULTILINEAR_DET_LIMIT}")
    full = (1 << n) - 1
    negA = A.scale(-1)
    one = Fraction(1) if A.mode == EXACT else 1.0
    minors = {}
    for T in range(1 << n):
        keep = indices_of(full & ~T)
        minors[T] = det(submatrix_kept(negA, keep)) if keep else one
    coeffs = {}
    for S in range(1 << n):
        rest = full & ~S
        c = [0] * (n - bin(S).count("1") + 1)
        extra = rest
        while True:
            k = bin(extra).count("1")
            c[k] = c[k] + minors[S | extra]
            if extra == 0:
                break
            extra = (extra - 1) & rest
        coeffs[S] = UniPoly(c)
    return MultilinearPoly(n, coeffs)
