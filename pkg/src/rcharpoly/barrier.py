"""Barrier potentials and root bounds for r-characteristic polynomials.

For ``p = det(Z - A)**r`` the potential in direction ``i`` at ``Z = bI`` is
``r * e_i^* (bI - A)^{-1} e_i``. Shifting the barrier by ``(r-1)**2/(r*Phi)``
in every direction gives

    max root chi_r(A) <= inf_{b > lambda_max} b - ((r-1)/r)**2 / max_i R_i(b),

with ``R_i(b)`` the resolvent diagonal. Bounding ``R_i`` through the largest
diagonal entry ``delta`` of a positive contraction yields the closed forms in
:func:`closed_form_bound`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Sequence

import numpy as np

from .errors import NotAboveRootsError, SizeLimitError
from .linalg import (
    EXACT,
    Matrix,
    det,
    matrix_to_json,
    max_eigenvalue,
    resolvent_diagonal,
    submatrix_kept,
    submatrix_removed,
)
from .poly import MultiPoly, UniPoly, max_root, real_roots
from .rdet import chi_r, det_r_perm
from .scalars import GaussianRational

GOLDEN_BRACKET = (1e-9, 10.0)
GOLDEN_TOL = 1e-10
SHIFT_RULES = {"half": Fraction(1, 2), "four-thirds": Fraction(4, 3), "nine-fourths": Fraction(9, 4)}
SHIFT_OFFSETS = (0.05, 0.1, 0.25, 0.5, 1.0, 2.0)
THRESHOLDS = {2: Fraction(1, 4), 3: Fraction(4, 9), 4: Fraction(9, 16)}


def shift_constant(r: int) -> Fraction:
    """``((r-1)/r)**2``: the fraction of ``1/R`` the barrier can be moved by."""
    return Fraction(r - 1, r) ** 2


def phi(A: Matrix, r, b, i: int):
    """Potential ``d_i p / p`` of ``p = det(Z - A)**r`` at ``Z = bI``."""
    try:
        return r * resolvent_diagonal(A, b, i)
    except ValueError as exc:
        raise NotAboveRootsError(str(exc)) from None


def phi_diagonal_bound(delta, b):
    """Upper bound ``delta/(b-1) + (1-delta)/b`` for the resolvent diagonal of a
    positive contraction whose diagonal entries are at most ``delta``."""
    if not b > 1:
        raise ValueError("need b > 1")
    if not 0 <= delta <= 1:
        raise ValueError("need 0 <= delta <= 1")
    return delta / (b - 1) + (1 - delta) / b


@dataclass(frozen=True)
class BoundReport:
    r: int
    delta: float | None
    b_star: float | None
    bound: float
    certified_max_root: float | None = None
    method: str = "resolvent"

    def to_json(self) -> dict:
        return {"r": self.r, "delta": self.delta, "b_star": self.b_star, "bound": self.bound,
                "certified_max_root": self.certified_max_root, "method": self.method}


def golden_section(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> tuple[float, float]:
    """Minimiser and minimum of a unimodal ``f`` on ``[lo, hi]``."""
    g = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    x = (a + b) / 2
    candidates = [(f(x), x), (f(lo), lo), (f(hi), hi)]
    v, x = min(candidates)
    return x, v


def _resolvent_max(A: Matrix):
    """``b -> max_i e_i^*(bI - A)^{-1} e_i`` through one eigendecomposition."""
    lam, U = np.linalg.eigh(A.to_numpy())
    W = np.abs(U) ** 2

    def R(b: float) -> float:
        return float(np.max(W @ (1.0 / (b - lam))))

    return float(lam[-1]), R


def root_bound(A: Matrix, r: int = 2, certify: bool | None = None,
               bracket: tuple[float, float] = GOLDEN_BRACKET) -> BoundReport:
    """``inf_b b - ((r-1)/r)**2 / max_i R_i(b)`` over ``b`` in ``(lmax + lo, lmax + hi]``.

    With ``certify`` (default: when n <= 6) the largest root of
    ``chi_r(A, r)`` is computed for comparison.
    """
    if r < 2:
        raise ValueError("need r >= 2")
    lmax, R = _resolvent_max(A)
    c = float(shift_constant(r))
    b_star, value = golden_section(lambda b: b - c / R(b), lmax + bracket[0], lmax + bracket[1])
    delta = max(float(complex(x).real) for x in A.diagonal())
    cert = None
    if certify is None:
        certify = A.n <= 6
    if certify:
        cert = max_root(chi_r(A, r))
    return BoundReport(r, delta, b_star, value, cert, "resolvent")


def root_bound_2(A: Matrix, certify: bool | None = None) -> BoundReport:
    return root_bound(A, 2, certify)


def closed_form_bound(delta, r: int) -> float:
    """Analytic value of ``inf_{b>=1} b - ((r-1)/r)**2 / phi_diagonal_bound(delta, b)``.

    r=2: ``(sqrt(3(1-d)) + sqrt(d))**2 / 4`` for ``d <= 1/4``;
    r=3: ``(sqrt(5(1-d)) + 2 sqrt(d))**2 / 9`` for ``d <= 4/9``;
    r=4: ``(sqrt(7(1-d)) + 3 sqrt(d))**2 / 16`` for ``d <= 9/16``.
    Past the threshold the infimum sits at ``b = 1`` and the bound is 1.
    """
    if r not in THRESHOLDS:
        raise ValueError("closed forms exist for r in {2, 3, 4}")
    if not 0 <= delta <= 1:
        raise ValueError("need 0 <= delta <= 1")
    if delta > THRESHOLDS[r]:
        return 1.0
    d = float(delta)
    return (math.sqrt((2 * r - 1) * (1 - d)) + (r - 1) * math.sqrt(d)) ** 2 / r ** 2


def diagonal_bound_numeric(delta: float, r: int, hi: float = 20.0) -> tuple[float, float]:
    """Numerical infimum over ``b >= 1`` of the same objective; returns ``(b_star, value)``."""
    c = float(shift_constant(r))

    def f(b):
        if b <= 1:
            # limit b -> 1+: the pole term vanishes unless delta = 0
            return 1.0 if delta > 0 else 1.0 - c
        return b - c / phi_diagonal_bound(delta, b)

    return golden_section(f, 1.0, hi, 1e-12)


def conjectured_bound(delta: float, r: int) -> dict:
    """Two conjectured r-paving values; these are never used as certified bounds."""
    if r < 2:
        raise ValueError("need r >= 2")
    d = float(delta)
    first = (math.sqrt(1 - d) + math.sqrt((r - 1) * d)) ** 2 / r
    second = (math.sqrt((2 * r - 1) * (1 - d)) + (r - 1) * math.sqrt(d)) ** 2 / r ** 2
    return {"label": "conjecture", "r": r, "delta": d, "first": first, "second": second}


# ---------------------------------------------------------------------------
# reduced trace inequalities


def trace_inequality(k: int, lam, x):
    """Reduced scalar forms of the degree-3 and degree-4 barrier inequalities.

    ``lam`` and ``x`` have ``k`` entries on their last axis (arrays are
    evaluated row-wise). For ``k = 3``::

        sum_i 2 l_i x_i [(l_j - l_k)**2 + l_i (l_j + l_k)]

    For ``k = 4``, with ``a, b, c`` the other three indices::

        sum_i 6 l_i x_i [l_a (l_b - l_c)**2 + l_b (l_a - l_c)**2
                         + l_c (l_a - l_b)**2 + l_i (l_a l_b + l_a l_c + l_b l_c)]

    Both are nonnegative on nonnegative inputs.
    """
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(x, dtype=float)
    if lam.shape != x.shape or lam.shape[-1] != k:
        raise ValueError(f"need {k} values of lambda and x")
    if k not in (3, 4):
        raise ValueError("k must be 3 or 4")
    if np.any(lam < 0) or np.any(x < 0):
        raise ValueError("inputs must be nonnegative")
    total = np.zeros(lam.shape[:-1])
    for i in range(k):
        o = [lam[..., j] for j in range(k) if j != i]
        li = lam[..., i]
        if k == 3:
            bracket = (o[0] - o[1]) ** 2 + li * (o[0] + o[1])
            total = total + 2 * li * x[..., i] * bracket
        else:
            a, b, c = o
            bracket = (a * (b - c) ** 2 + b * (a - c) ** 2 + c * (a - b) ** 2
                       + li * (a * b + a * c + b * c))
            total = total + 6 * li * x[..., i] * bracket
    return total if total.ndim else float(total)


def trace_inequality_traces(k: int, lam, x):
    """The same inequalities before diagonal reduction, written with traces of
    ``X = diag(lam)`` and ``Y`` with diagonal ``x``."""
    lam = np.asarray(lam, dtype=float)
    x = np.asarray(x, dtype=float)
    T = [None] + [np.sum(lam ** p, axis=-1) for p in (1, 2, 3)]
    TY = [None] + [np.sum(lam ** p * x, axis=-1) for p in (1, 2, 3, 4)]
    if k == 3:
        return 4 * T[2] * TY[1] + 6 * T[1] * TY[2] - 2 * T[1] ** 2 * TY[1] - 8 * TY[3]
    if k == 4:
        return ((24 * T[1] * T[2] - 6 * T[1] ** 3 - 18 * T[3]) * TY[1]
                + (21 * T[1] ** 2 - 27 * T[2]) * TY[2] - 48 * T[1] * TY[3] + 54 * TY[4])
    raise ValueError("k must be 3 or 4")


# ---------------------------------------------------------------------------
# barrier shift on det(Z - A)**r


def det_z_minus(A: Matrix) -> MultiPoly:
    """``det(Z - A) = sum_T z^T det((-A)_T)`` as a MultiPoly."""
    n = A.n
    negA = A.scale(-1)
    terms = {}
    for T in range(1 << n):
        keep = [i for i in range(n) if not (T >> i) & 1]
        terms[tuple((T >> i) & 1 for i in range(n))] = det(submatrix_kept(negA, keep)) if keep else 1
    return MultiPoly(n, terms)


def _restrict(q: MultiPoly, i: int, point: Sequence) -> UniPoly:
    """``t -> q(point with coordinate i replaced by t)``."""
    coeffs = [0] * (q.degree_in(i) + 1)
    for e, c in q.terms.items():
        term = c
        for j, (z, k) in enumerate(zip(point, e)):
            if j != i and k:
                term = term * z ** k
        coeffs[e[i]] = coeffs[e[i]] + term
    return UniPoly(coeffs)


def _potential(q: MultiPoly, j: int, point: Sequence) -> float:
    return float(q.diff(j).evaluate(point) / q.evaluate(point))


@dataclass
class ShiftReport:
    passed: bool
    r: int
    rule: str
    S: list
    checks: list = field(default_factory=list)
    worst_margin: float = math.inf

    def to_json(self) -> dict:
        return {"passed": self.passed, "r": self.r, "rule": self.rule, "S": self.S,
                "worst_margin": self.worst_margin, "checks": self.checks}


def barrier_shift_check(A: Matrix, r: int, S: Sequence[int] = (), rule: str | None = None,
                        offsets: Sequence[float] = SHIFT_OFFSETS, tol: float = 1e-9) -> ShiftReport:
    """Check ``Phi^j_{d_i^{r-1} q}(z - delta e_i) <= Phi^j_q(z)`` numerically.

    ``q = prod_{s in S} d_s^{r-1} det(Z - A)**r`` (the state of the barrier
    argument after processing the indices in ``S``), ``z = b*1`` for
    ``b = lambda_max + offset``, ``delta = c / Phi^i_q(z)`` with ``c`` from
    ``rule`` (``half`` for r=2, ``four-thirds`` for r=3, ``nine-fourths``
    for r=4), every ``i`` outside ``S`` and every ``j`` outside ``S + {i}``.
    Each check also records whether ``z - delta e_i`` stays above the roots of
    the differentiated polynomial along direction ``i``.
    """
    n = A.n
    if n > 4 or r > 4:
        raise SizeLimitError("barrier shift check limited to n <= 4, r <= 4")
    if rule is None:
        rule = {2: "half", 3: "four-thirds", 4: "nine-fourths"}.get(r)
        if rule is None:
            raise ValueError("no default shift rule for this r")
    c = float(SHIFT_RULES[rule])
    S = sorted(set(S))
    q = det_z_minus(A).pow(r)
    for s in S:
        q = q.diff(s, r - 1)
    lmax = max_eigenvalue(A)
    report = ShiftReport(True, r, rule, S)
    for off in offsets:
        b = lmax + off
        z = [b] * n
        for i in range(n):
            if i in S:
                continue
            dq = q.diff(i, r - 1)
            phi_i = _potential(q, i, z)
            delta = c / phi_i
            zs = list(z)
            zs[i] = b - delta
            line = _restrict(dq, i, zs)
            roots = real_roots(line) if line.degree > 0 else []
            above = all(t < zs[i] + 1e-12 for t, _ in roots)
            for j in range(n):
                if j == i or j in S:
                    continue
                lhs = _potential(dq, j, zs)
                rhs = _potential(q, j, z)
                margin = rhs - lhs
                ok = margin >= -tol * max(1.0, abs(rhs))
                report.checks.append({"b": b, "i": i, "j": j, "delta": delta, "lhs": lhs, "rhs": rhs,
                                      "above_roots": above, "ok": ok})
                report.worst_margin = min(report.worst_margin, margin)
                report.passed = report.passed and ok and above
    return report


# ---------------------------------------------------------------------------
# counterexamples


def bivariate_counterexample() -> dict:
    """Potentials of ``p(x, y) = (7 + 8x + y)(8 + 4x + 4y)`` showing that the
    derivative's potential can grow after shifting by ``1/Phi``."""
    F = Fraction
    # MultiPoly in (x, y)
    f1 = MultiPoly(2, {(0, 0): F(7), (1, 0): F(8), (0, 1): F(1)})
    f2 = MultiPoly(2, {(0, 0): F(8), (1, 0): F(4), (0, 1): F(4)})
    p = f1 * f2
    point = (F(1), F(1))
    phi_x = p.diff(0).evaluate(point) / p.evaluate(point)
    phi_y = p.diff(1).evaluate(point) / p.evaluate(point)
    delta = 1 / phi_x
    dx = p.diff(0)

    def shifted(pt):
        return dx.diff(1).evaluate(pt) / dx.evaluate(pt)

    used = (point[0] - delta, point[1])
    alt = (F(-4, 3), F(1))
    value = shifted(used)
    return {
        "polynomial": "(7+8x+y)(8+4x+4y)",
        "phi_x": phi_x,
        "phi_y": phi_y,
        "delta": delta,
        "shift_point": used,
        "shifted_phi_y": value,
        "alternate_point": alt,
        "alternate_phi_y": shifted(alt),
        "printed_value": F(27, 73),
        "violation": value > phi_y,
    }


def bivariate_counterexample_json(rep: dict | None = None) -> dict:
    rep = rep or bivariate_counterexample()
    out = {}
    for k, v in rep.items():
        if isinstance(v, Fraction):
            out[k] = str(v)
        elif isinstance(v, tuple):
            out[k] = [str(t) for t in v]
        else:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# search for violations of the det_2 ratio inequality


def _perm_tables(m: int):
    perms = list(permutations(range(m)))
    idx = np.array(perms, dtype=np.intp).reshape(len(perms), m)
    cycles = []
    for p in perms:
        seen = [False] * m
        c = 0
        for s in range(m):
            if not seen[s]:
                c += 1
                t = s
                while not seen[t]:
                    seen[t] = True
                    t = p[t]
        cycles.append(c)
    weights = np.array([(-1) ** (m - c) * 2.0 ** c for c in cycles])
    return idx, weights


_TABLES: dict[int, tuple] = {}


def batched_det2(M: np.ndarray) -> np.ndarray:
    """det_2 of a stack of ``m x m`` matrices, shape ``(N, m, m)``."""
    m = M.shape[-1]
    if m == 0:
        return np.ones(M.shape[:-2])
    if m not in _TABLES:
        _TABLES[m] = _perm_tables(m)
    idx, w = _TABLES[m]
    rows = np.arange(m)
    prods = np.prod(M[:, rows[None, :], idx], axis=-1)
    return prods @ w


def statement_terms(B: Matrix, S: Sequence[int]) -> dict:
    """The six kept-submatrix det_2 values, exactly when ``B`` is exact.

    Keys name the multiset added to ``S``: ``""``, ``"1"``, ``"2"``,
    ``"11"``, ``"12"``, ``"112"`` (with ``1, 2`` the indices 0 and 1).
    """
    S = list(S)
    add = {"": [], "1": [0], "2": [1], "11": [0, 0], "12": [0, 1], "112": [0, 0, 1]}
    return {k: det_r_perm(submatrix_kept(B, S + v), 2) for k, v in add.items()}


def statement_sides(d: dict):
    """Left and right side of the inequality ``lhs <= rhs``."""
    d0 = d[""]
    lhs = (d["1"] * d["12"] + d["11"] * d["2"]) / (d0 * d0)
    rhs = d["1"] * d["1"] * d["2"] / (d0 * d0 * d0) + d["112"] / d0
    return lhs, rhs


def _real(v):
    if isinstance(v, GaussianRational):
        return v.re
    if isinstance(v, complex):
        return v.real
    return v


def _search_chunk(n: int, size: int, seed: int, chunk: int, denom: int, empty: bool, tol: float):
    rng = np.random.default_rng([seed, chunk])
    re = rng.integers(-2 * denom, 2 * denom + 1, (size, n, n)) / denom
    im = rng.integers(-2 * denom, 2 * denom + 1, (size, n, n)) / denom
    upper = np.triu(re + 1j * im, 1)
    diag = rng.integers(-2 * denom, 2 * denom + 1, (size, n)) / denom
    B = upper + np.conj(np.transpose(upper, (0, 2, 1)))
    B[:, np.arange(n), np.arange(n)] = diag
    s = np.full(size, -1) if empty else rng.integers(2, n, size)

    def kept(extra):
        if empty:
            idx = np.array(extra, dtype=np.intp)
            return B[:, idx[:, None], idx[None, :]]
        cols = [np.full(size, e) for e in extra] + [s]
        order = np.stack(cols, axis=1) if cols else np.zeros((size, 0), dtype=np.intp)
        order = np.sort(order, axis=1)
        ar = np.arange(size)[:, None, None]
        return B[ar, order[:, :, None], order[:, None, :]]

    d = {k: batched_det2(kept(v)) for k, v in
         {"": [], "1": [0], "2": [1], "11": [0, 0], "12": [0, 1], "112": [0, 0, 1]}.items()}
    d0 = d[""]
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = (d["1"] * d["12"] + d["11"] * d["2"]) / d0 ** 2
        rhs = d["1"] ** 2 * d["2"] / d0 ** 3 + d["112"] / d0
        lhs, rhs = lhs.real, rhs.real
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        ok_den = np.abs(d0) > 1e-9
        bad = ok_den & np.isfinite(lhs) & np.isfinite(rhs) & (lhs > rhs + tol * scale)
    hits = np.flatnonzero(bad)
    return [(int(t), B[t], (int(s[t]) if not empty else None)) for t in hits]


def _exact_matrix(M: np.ndarray, denom: int) -> Matrix:
    rows = []
    for row in M:
        rows.append([GaussianRational.make(Fraction(round(z.real * denom), denom),
                                           Fraction(round(z.imag * denom), denom)) for z in row])
    return Matrix.from_rows(rows, EXACT)


@dataclass
class SearchReport:
    n: int
    budget: int
    seed: int
    examined: int
    witness: dict | None
    empty_violations: int | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "budget": self.budget, "seed": self.seed, "examined": self.examined,
                "status": "witness" if self.witness else "exhausted", "witness": self.witness,
                "empty_set_violations": self.empty_violations}


def statement_counterexample_search(n: int, budget: int, seed: int, threads: int = 1,
                                    chunk_size: int = 10_000, denom: int = 8,
                                    empty_trials: int = 1000) -> SearchReport:
    """Search random Hermitian ``B`` (entries in ``(1/denom) Z``, range ``[-2, 2]``)
    and singleton ``S`` inside ``{2..n-1}`` for a violation of

        (d1 d12 + d11 d2) / d**2  <=  d1**2 d2 / d**3 + d112 / d,

    where ``dX = det_2(B(S + X))``. Float screening is followed by exact
    verification; the reported witness is the first exactly-verified one in
    the fixed chunk order, independent of ``threads``. The empty-``S`` case
    (which always holds) is swept over ``empty_trials`` matrices.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    if budget < 1:
        raise ValueError("budget must be positive")
    chunks = [(c, min(chunk_size, budget - c * chunk_size)) for c in range((budget + chunk_size - 1) // chunk_size)]
    witness = None
    examined = 0

    def run(item):
        c, size = item
        return _search_chunk(n, size, seed, c, denom, False, 1e-9)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for (c, size), hits in zip(chunks, pool.map(run, chunks)):
            for t, M, s in hits:
                B = _exact_matrix(M, denom)
                d = statement_terms(B, [s])
                if _real(d[""]) == 0:
                    continue
                lhs, rhs = map(_real, statement_sides(d))
                if lhs > rhs:
                    witness = {"matrix": matrix_to_json(B), "S": [s], "lhs": str(lhs), "rhs": str(rhs),
                               "chunk": c, "index": t}
                    break
            if witness:
                examined += witness["index"] + 1
                break
            examined += size
    empty_bad = None
    if empty_trials:
        empty_bad = len(_search_chunk(n, empty_trials, seed, -1 % (1 << 31), denom, True, 1e-9))
    return SearchReport(n, budget, seed, examined, witness, empty_bad)
