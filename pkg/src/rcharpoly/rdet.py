"""The r-determinant and the r-characteristic polynomial.

``det_r(A) = sum_sigma sign(sigma) * r**cycles(sigma) * prod_i A[i][sigma(i)]``
is computed three ways, each independent of the others:

* ``det_r_perm``: direct enumeration of permutations (any real r, any
  commutative ring of entries);
* ``det_r_derivative``: coefficient of ``prod z_i**(r-1)`` in ``det(A+Z)**r``
  (positive integer r);
* ``det_r_macmahon``: top coefficient of ``det(I - ZA)**r`` in the ring
  ``z_i**2 = 0`` (any real r).

``chi_r(A, r) = det_r(xI - A)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

from .errors import SizeLimitError
from .linalg import (
    EXACT,
    Matrix,
    det,
    inverse,
    min_eigenvalue,
    multiset_counts,
    submatrix_kept,
    submatrix_removed,
)
from .poly import (
    MultiPoly,
    MultilinearPoly,
    TruncatedMultilinear,
    UniPoly,
    indices_of,
    mask_of,
    truncated_power,
)
from .scalars import GaussianRational

PERM_LIMIT = 10
DERIVATIVE_LIMIT = (8, 4)
MACMAHON_LIMIT = 12
MIXED_LIMIT = 10 ** 6
MULTILINEARIZATION_LIMIT = 6
PSD_TOL = 1e-10

METHODS = ("perm-cycle", "derivative", "macmahon")


def _rows(A) -> Sequence[Sequence]:
    return A.entries if isinstance(A, Matrix) else A


def _as_exact_r(r):
    if isinstance(r, (int, Fraction)):
        return Fraction(r)
    if isinstance(r, float) and r.is_integer():
        return Fraction(int(r))
    return r


def is_integer_r(r) -> bool:
    return (isinstance(r, int) or (isinstance(r, Fraction) and r.denominator == 1)
            or (isinstance(r, float) and r.is_integer()))


def _cycle_count(sigma: Sequence[int]) -> int:
    n = len(sigma)
    seen = [False] * n
    c = 0
    for i in range(n):
        if not seen[i]:
            c += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
    return c


def _permutation_terms(rows):
    """Yield ``(prod_i rows[i][sigma(i)], cycles(sigma))`` for every sigma with a nonzero product."""
    n = len(rows)
    sigma = [0] * n
    used = [False] * n

    def rec(i, acc):
        if i == n:
            yield acc, _cycle_count(sigma)
            return
        row = rows[i]
        for j in range(n):
            if used[j]:
                continue
            x = row[j]
            if x == 0:
                continue
            used[j] = True
            sigma[i] = j
            yield from rec(i + 1, x if acc is None else acc * x)
            used[j] = False

    if n == 0:
        yield None, 0
        return
    yield from rec(0, None)


def det_r_perm(A, r, limit: int = PERM_LIMIT):
    """det_r by enumerating all permutations of ``range(n)``.

    Entries may be scalars or ring elements (UniPoly, MultilinearPoly).
    ``r = 1`` gives the ordinary determinant.
    """
    rows = _rows(A)
    n = len(rows)
    if n > limit:
        raise SizeLimitError(f"permutation expansion limited to n <= {limit}")
    r = _as_exact_r(r)
    weights = [(-1) ** (n - c) * r ** c for c in range(n + 1)]
    total = 0
    for prod_, c in _permutation_terms(rows):
        w = weights[c]
        if prod_ is None:
            total = total + w
        else:
            total = total + prod_ * w
    if n == 0:
        return Fraction(1)
    return total


def _removed_minors(A: Matrix) -> dict[int, object]:
    """``{mask: det(A with rows/cols in mask removed)}`` for every mask."""
    n = A.n
    full = (1 << n) - 1
    out = {}
    for m in range(1 << n):
        keep = indices_of(full & ~m)
        out[m] = det(submatrix_kept(A, keep)) if keep else Fraction(1)
    return out


def _kept_minors(A: Matrix) -> dict[int, object]:
    n = A.n
    return {m: (det(submatrix_kept(A, indices_of(m))) if m else Fraction(1)) for m in range(1 << n)}


def det_r_derivative(A: Matrix, r: int):
    """det_r via ``(1/(r-1)!)**n * d^{(r-1)n}/dz_1^{r-1}..dz_n^{r-1} det(A+Z)**r`` at z = 0.

    ``det(A+Z)`` is expanded as ``sum_S z^S det(A_S)`` and raised to the r-th
    power with every exponent above r-1 discarded, since those monomials are
    killed by the derivative.
    """
    if not is_integer_r(r) or int(r) < 1:
        raise ValueError("derivative method needs a positive integer r")
    r = int(r)
    n = A.n
    if n > DERIVATIVE_LIMIT[0] or r > DERIVATIVE_LIMIT[1]:
        raise SizeLimitError(f"derivative method limited to n <= {DERIVATIVE_LIMIT[0]}, "
                             f"r <= {DERIVATIVE_LIMIT[1]}")
    if n == 0:
        return Fraction(1)
    minors = _removed_minors(A)
    base = MultiPoly(n, {tuple((m >> i) & 1 for i in range(n)): v for m, v in minors.items()})
    q = base.pow(r, max_deg=r - 1)
    for i in range(n):
        q = q.diff(i, r - 1)
    value = q.coefficient((0,) * n)
    norm = math.factorial(r - 1) ** n
    return value * Fraction(1, norm) if A.mode == EXACT else value / norm


def det_r_macmahon(A: Matrix, r):
    """det_r via MacMahon's master theorem: ``(-1)**n [z_1..z_n] det(I - ZA)**r``.

    The ``(-1)**n`` factor is needed for agreement with the permutation
    definition (check n = 1: ``(1 - z a)**r`` has z-coefficient ``-r a``).
    """
    n = A.n
    if n > MACMAHON_LIMIT:
        raise SizeLimitError(f"MacMahon method limited to n <= {MACMAHON_LIMIT}")
    if n == 0:
        return Fraction(1)
    r = _as_exact_r(r)
    kept = _kept_minors(A)
    # coefficient of z^S in det(I + Z M) is det(M(S)); here M = -A
    f = TruncatedMultilinear(n, {m: (-1) ** len(indices_of(m)) * v for m, v in kept.items()})
    g = truncated_power(f, r)
    return (-1) ** n * g[(1 << n) - 1]


@dataclass(frozen=True)
class RDetResult:
    value: object
    method: str
    r: object
    n: int


def det_r(A: Matrix, r, method: str = "perm-cycle") -> RDetResult:
    if method == "perm-cycle":
        v = det_r_perm(A, r)
    elif method == "derivative":
        v = det_r_derivative(A, r)
    elif method == "macmahon":
        v = det_r_macmahon(A, r)
    else:
        raise ValueError(f"unknown method {method!r}")
    return RDetResult(v, method, r, A.n)


# ---------------------------------------------------------------------------
# r-characteristic polynomial


def x_minus(A: Matrix) -> list[list[UniPoly]]:
    """The matrix ``xI - A`` with UniPoly entries."""
    n = A.n
    return [[UniPoly([-A[i, j], 1]) if i == j else UniPoly([-A[i, j]]) for j in range(n)]
            for i in range(n)]


def chi_r(A: Matrix, r, method: str = "auto") -> UniPoly:
    """``det_r(xI - A)`` as a polynomial of degree n with leading coefficient ``r**n``.

    Integer r: det_r_perm evaluated at x = 0..n and interpolated.
    Other r (or ``method="macmahon"``): ``[z_1..z_n] det(I + Z(xI - A))**r``
    computed with UniPoly coefficients, whose z^S coefficient is
    ``char_poly(A(S))``.
    """
    from .linalg import char_poly

    n = A.n
    if method == "auto":
        method = "interpolate" if is_integer_r(r) else "macmahon"
    r = _as_exact_r(r)
    if method == "interpolate":
        if n > PERM_LIMIT:
            raise SizeLimitError(f"interpolation via permutations limited to n <= {PERM_LIMIT}")
        nodes = [Fraction(k) if A.mode == EXACT else float(k) for k in range(n + 1)]
        values = [det_r_perm(A.scale(-1).shift(t), r) for t in nodes]
        p = UniPoly.interpolate(nodes, values)
    elif method == "macmahon":
        if n > MACMAHON_LIMIT:
            raise SizeLimitError(f"MacMahon method limited to n <= {MACMAHON_LIMIT}")
        if n == 0:
            return UniPoly([1])
        f = TruncatedMultilinear(n, {m: char_poly(submatrix_kept(A, indices_of(m))) if m else UniPoly([1])
                                     for m in range(1 << n)})
        p = truncated_power(f, r)[(1 << n) - 1]
        if not isinstance(p, UniPoly):
            p = UniPoly([p])
    else:
        raise ValueError(f"unknown method {method!r}")
    return _real_coeffs(p, A.mode)


def _real_coeffs(p: UniPoly, mode: str) -> UniPoly:
    """Drop round-off imaginary parts (relative to the largest coefficient) in float mode."""
    if mode == EXACT or not any(isinstance(c, complex) for c in p.coeffs):
        return p
    scale = max(1.0, max(abs(c) for c in p.coeffs))
    if all(abs(complex(c).imag) <= 1e-9 * scale for c in p.coeffs):
        return UniPoly([complex(c).real for c in p.coeffs])
    return p


# ---------------------------------------------------------------------------
# mixed determinant


def _generic_det(rows):
    if isinstance(rows, Matrix):
        return det(rows)
    return det_r_perm(rows, 1)


def _kept_rows(rows, idx):
    return [[rows[i][j] for j in idx] for i in idx]


def mixed_determinant(matrices: Sequence):
    """``D(A_1..A_k) = sum over ordered partitions S_1..S_k of [n] of prod_i det(A_i(S_i))``.

    Matrices may be :class:`Matrix` objects or nested lists of ring elements.
    """
    k = len(matrices)
    if k == 0:
        raise ValueError("need at least one matrix")
    n = len(_rows(matrices[0]))
    if any(len(_rows(M)) != n for M in matrices):
        raise ValueError("all matrices must be n x n")
    if k ** n > MIXED_LIMIT:
        raise SizeLimitError(f"k**n = {k ** n} partitions exceeds {MIXED_LIMIT}")
    minors = []
    for M in matrices:
        rows = _rows(M)
        table = {}
        for m in range(1 << n):
            idx = indices_of(m)
            if not idx:
                table[m] = 1
            elif isinstance(M, Matrix):
                table[m] = det(submatrix_kept(M, idx))
            else:
                table[m] = _generic_det(_kept_rows(rows, idx))
        minors.append(table)
    total = 0
    for assign in product(range(k), repeat=n):
        masks = [0] * k
        for i, b in enumerate(assign):
            masks[b] |= 1 << i
        term = minors[0][masks[0]]
        for b in range(1, k):
            term = term * minors[b][masks[b]]
        total = total + term
    return total


# ---------------------------------------------------------------------------
# identity residuals


def thompson_residual(A: Matrix, r) -> UniPoly:
    """``r * sum_i chi_r(A_i) - chi_r(A)'``; identically zero."""
    lhs = UniPoly()
    for i in range(A.n):
        lhs = lhs + chi_r(submatrix_removed(A, [i]), r)
    return lhs * _as_exact_r(r) - chi_r(A, r).derivative()


def defect_k_residual(A: Matrix, r, k: int) -> UniPoly:
    """``r**k * k! * sum_{|S|=k} chi_r(A_S) - chi_r(A)^{(k)}``; identically zero."""
    if not 0 <= k <= A.n:
        raise ValueError("need 0 <= k <= n")
    r = _as_exact_r(r)
    lhs = UniPoly()
    for S in combinations(range(A.n), k):
        lhs = lhs + chi_r(submatrix_removed(A, S), r)
    return lhs * (r ** k * math.factorial(k)) - chi_r(A, r).derivative(k)


def _z_plus(A: Matrix) -> list[list[MultilinearPoly]]:
    n = A.n
    return [[MultilinearPoly(n, {0: A[i, j]}) + (MultilinearPoly.variable(n, i) if i == j else 0)
             for j in range(n)] for i in range(n)]


def multilinearization_sides(A: Matrix, r) -> tuple[MultilinearPoly, MultilinearPoly]:
    """Both sides of ``det_r(Z + A) = sum_S z^S r**|S| det_r(A_S)``."""
    n = A.n
    if n > MULTILINEARIZATION_LIMIT:
        raise SizeLimitError(f"multilinearization limited to n <= {MULTILINEARIZATION_LIMIT}")
    r = _as_exact_r(r)
    lhs = det_r_perm(_z_plus(A), r)
    if not isinstance(lhs, MultilinearPoly):
        lhs = MultilinearPoly(n, {0: lhs})
    rhs = MultilinearPoly(n, {m: r ** len(indices_of(m)) * det_r_perm(submatrix_removed(A, indices_of(m)), r)
                              for m in range(1 << n)})
    return lhs, rhs


def multilinearization_residual(A: Matrix, r):
    """Largest coefficient discrepancy between the two multilinear expansions."""
    lhs, rhs = multilinearization_sides(A, r)
    return (lhs - rhs).max_abs_coeff()


def _check_multiplicities(S, cap: int):
    counts = multiset_counts(S)
    if any(m > cap for m in counts.values()):
        raise ValueError(f"multiplicities above {cap} are not allowed")
    return counts


def pd_det_sides(A: Matrix, z: Sequence, S) -> tuple[object, object]:
    """Both sides of ``d^S det(Z-A)**2 = det(Z-A)**2 * det_2((Z-A)^{-1}(S))`` at the point ``z``.

    ``S`` is a multiset with multiplicities at most 2. The left side is
    obtained by expanding ``det(Z-A)`` around ``z`` in the touched variables.
    """
    counts = _check_multiplicities(S, 2)
    n = A.n
    if len(z) != n:
        raise ValueError("point dimension mismatch")
    B = Matrix.diag(list(z), A.mode).__sub__(A)
    if A.mode == EXACT and any(isinstance(t, float) for t in z):
        raise ValueError("exact mode needs an exact evaluation point")
    touched = sorted(counts)
    doubles = [i for i in touched if counts[i] == 2]
    singles = [i for i in touched if counts[i] == 1]

    def c(U) -> object:
        return det(submatrix_removed(B, U)) if len(U) < n else 1

    lhs = 0
    for k in range(len(singles) + 1):
        for part in combinations(singles, k):
            U = doubles + list(part)
            V = doubles + [i for i in singles if i not in part]
            lhs = lhs + c(U) * c(V)
    lhs = lhs * 2 ** len(doubles)
    d = det(B)
    if d == 0 or (A.mode != EXACT and abs(d) < 1e-300):
        raise ZeroDivisionError("Z - A is singular")
    Binv = inverse(B)
    rhs = d * d * det_r_perm(submatrix_kept(Binv, dict(counts)), 2)
    return lhs, rhs


def pd_det_residual(A: Matrix, z: Sequence, S):
    lhs, rhs = pd_det_sides(A, z, S)
    return lhs - rhs


def vere_jones_vanishing(B: Matrix, S):
    """``det_2(B(S))`` for a multiset ``S``; zero whenever a multiplicity is at least 3."""
    return det_r_perm(submatrix_kept(B, dict(multiset_counts(S))), 2)


def koteljanskii_residual(A: Matrix, r, S: Iterable[int], T: Iterable[int]):
    """``det_r(A_S) det_r(A_T) - det_r(A_{S&T}) det_r(A_{S|T})`` for PSD ``A`` (removed convention)."""
    if not A.is_hermitian() or min_eigenvalue(A) < -PSD_TOL:
        raise ValueError("matrix is not positive semidefinite")
    S, T = set(S), set(T)

    def d(U):
        v = det_r_perm(submatrix_removed(A, U), r)
        if isinstance(v, complex):
            v = v.real
        elif isinstance(v, GaussianRational):
            v = v.re
        return v

    return d(S) * d(T) - d(S & T) * d(S | T)


def det_r_all(A: Matrix, r, tol: float = 1e-9) -> dict:
    """Evaluate every applicable method and report whether they agree."""
    results = {}
    results["perm-cycle"] = det_r_perm(A, r)
    if is_integer_r(r) and int(r) >= 1 and A.n <= DERIVATIVE_LIMIT[0] and int(r) <= DERIVATIVE_LIMIT[1]:
        results["derivative"] = det_r_derivative(A, r)
    results["macmahon"] = det_r_macmahon(A, r)
    vals = list(results.values())
    if A.mode == EXACT and all(not isinstance(v, float) for v in vals):
        agree = all(v == vals[0] for v in vals)
    else:
        scale = max(1.0, max(abs(complex(v)) for v in vals))
        agree = all(abs(complex(v) - complex(vals[0])) <= tol * scale for v in vals)
    return {"values": results, "agreement": agree}


__all__ = [
    "METHODS", "RDetResult", "det_r", "det_r_perm", "det_r_derivative", "det_r_macmahon",
    "chi_r", "mixed_determinant", "thompson_residual", "defect_k_residual",
    "multilinearization_residual", "multilinearization_sides", "pd_det_residual", "pd_det_sides",
    "vere_jones_vanishing", "koteljanskii_residual", "det_r_all", "x_minus", "mask_of",
]
