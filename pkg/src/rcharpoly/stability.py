"""Discrete measures on subsets, their generating polynomials, and a
randomized real-stability test for multiaffine polynomials."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import SizeLimitError
from .linalg import Matrix, min_eigenvalue, submatrix_removed
from .poly import MultiPoly, MultilinearPoly, indices_of
from .rdet import det_r_perm
from .scalars import GaussianRational

ZERO_TOL = 1e-10
DELTA_TOL = 1e-12
SR_LIMIT = 8
PAVING_MEASURE_LIMIT = 20
CHUNK = 256

STABLE = "stable"
UNSTABLE = "unstable"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class Verdict:
    status: str
    witness: tuple | None = None
    min_delta: float | None = None
    trials: int = 0

    def to_json(self) -> dict:
        w = None if self.witness is None else [[z.real, z.imag] for z in self.witness]
        return {"status": self.status, "witness": w, "min_delta": self.min_delta, "trials": self.trials}


@dataclass(frozen=True)
class DiscreteMeasure:
    """Nonnegative weights on subsets of ``range(n)``, keyed by bitmask."""

    n: int
    weights: dict
    normalized: bool = False
    verdict: Verdict | None = None

    def __post_init__(self):
        for m, w in self.weights.items():
            if m >> self.n:
                raise ValueError("atom outside the ground set")
            if _real(w) < 0:
                raise ValueError("weights must be nonnegative")
        if self.normalized:
            total = sum(self.weights.values())
            if (total != 1) if _all_exact(self.weights.values()) else abs(total - 1) > 1e-12:
                raise ValueError("normalized weights must sum to 1")

    def total(self):
        return sum(self.weights.values())

    def normalize(self) -> "DiscreteMeasure":
        t = self.total()
        if t == 0:
            raise ValueError("measure has zero mass")
        if _all_exact(self.weights.values()):
            t = Fraction(t)
        return DiscreteMeasure(self.n, {m: w / t for m, w in self.weights.items()}, True, self.verdict)

    def generating_polynomial(self) -> MultilinearPoly:
        """``sum_S mu(S) z^S``."""
        return MultilinearPoly(self.n, dict(self.weights))

    def to_json(self) -> dict:
        atoms = [{"set": indices_of(m), "w": _fmt(w)} for m, w in sorted(self.weights.items()) if w != 0]
        out = {"n": self.n, "atoms": atoms}
        if self.verdict is not None:
            out["verdict"] = self.verdict.to_json()
        return out


def _all_exact(vals) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in vals)


def _fmt(w) -> str:
    return str(w) if isinstance(w, (int, Fraction)) else repr(float(w))


def _real(v):
    if isinstance(v, GaussianRational):
        if v.im != 0:
            raise ValueError("weight is not real")
        return v.re
    if isinstance(v, complex):
        return v.real
    return v


# ---------------------------------------------------------------------------
# stability test


def _as_multiaffine(P) -> MultilinearPoly:
    if isinstance(P, MultilinearPoly):
        return P
    if isinstance(P, MultiPoly):
        coeffs = {}
        for e, c in P.terms.items():
            if max(e, default=0) > 1:
                raise ValueError("polynomial is not multiaffine")
            coeffs[sum(1 << i for i, k in enumerate(e) if k)] = c
        return MultilinearPoly(P.nvars, coeffs)
    raise TypeError("expected a MultilinearPoly or MultiPoly")


class _Evaluator:
    """Vectorised evaluation of a multiaffine polynomial at many points."""

    def __init__(self, P: MultilinearPoly):
        self.n = P.n
        items = sorted(P.coeffs.items())
        self.masks = np.array([[(m >> i) & 1 for i in range(P.n)] for m, _ in items], dtype=bool).reshape(
            len(items), P.n)
        self.coeffs = np.array([float(c) for _, c in items])

    def __call__(self, Z: np.ndarray) -> np.ndarray:
        if not len(self.coeffs):
            return np.zeros(Z.shape[0], dtype=Z.dtype)
        mons = np.where(self.masks[None, :, :], Z[:, None, :], 1).prod(axis=-1)
        return mons @ self.coeffs


def _chunk_scan(P: MultilinearPoly, ev, diffs, pairs, seed: int, chunk: int, size: int):
    """One fixed block of random trials: Delta values at real points and a zero search."""
    rng = np.random.default_rng([seed, chunk])
    n = P.n
    X = rng.normal(0.0, 2.0, (size, n))
    min_delta = np.inf
    for (i, j), (Pi, Pj, Pij) in zip(pairs, diffs):
        p, pi, pj, pij = ev["P"](X), Pi(X), Pj(X), Pij(X)
        delta = pi * pj - p * pij
        scale = np.maximum(1.0, np.abs(pi * pj) + np.abs(p * pij))
        min_delta = min(min_delta, float(np.min(delta / scale)))
    # zero search: random upper-half-plane values, solve the affine equation in one variable
    Z = rng.normal(0.0, 2.0, (size, n)) + 1j * rng.exponential(1.0, (size, n))
    k = rng.integers(0, n, size)
    Z0 = Z.copy()
    Z0[np.arange(size), k] = 0
    alpha = ev["P"](Z0)
    beta = np.array([0j] * size)
    for v in range(n):
        sel = k == v
        if np.any(sel):
            beta[sel] = ev["d"][v](Z0[sel])
    witness = None
    with np.errstate(divide="ignore", invalid="ignore"):
        zk = -alpha / beta
    ok = np.isfinite(zk) & (zk.imag > 1e-9)
    for t in np.flatnonzero(ok):
        w = Z[t].copy()
        w[k[t]] = zk[t]
        if abs(ev["P"](w[None, :])[0]) < ZERO_TOL:
            witness = tuple(complex(c) for c in w)
            break
    return min_delta, witness


def is_real_stable_multiaffine(P, trials: int = 1000, seed: int = 0, threads: int = 1) -> Verdict:
    """Three-valued real-stability verdict for a multiaffine real polynomial.

    * ``unstable`` with a witness point in the open upper half-plane where
      ``|P| < 1e-10`` (tried: the point ``(i, .., i)``, then random points
      with one coordinate solved for);
    * ``stable`` when no zero was found and
      ``Delta_ij = d_iP d_jP - P d_i d_jP`` is nonnegative (relative
      tolerance 1e-12) at ``trials`` random real points;
    * ``undetermined`` otherwise.

    Trials are split into fixed chunks seeded by ``(seed, chunk)`` so the
    verdict does not depend on ``threads``.
    """
    P = _as_multiaffine(P)
    for c in P.coeffs.values():
        if isinstance(c, complex) or (isinstance(c, GaussianRational) and c.im != 0):
            raise ValueError("coefficients must be real")
    P = MultilinearPoly(P.n, {m: _real(c) for m, c in P.coeffs.items()})
    n = P.n
    if n == 0 or not P.coeffs:
        return Verdict(STABLE if P.coeffs else UNDETERMINED, None, None, 0)
    ev = {"P": _Evaluator(P), "d": [_Evaluator(P.diff(v)) for v in range(n)]}
    ipoint = np.full((1, n), 1j)
    if abs(ev["P"](ipoint)[0]) < ZERO_TOL:
        return Verdict(UNSTABLE, tuple(complex(z) for z in ipoint[0]), None, 0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    diffs = [(_Evaluator(P.diff(i)), _Evaluator(P.diff(j)), _Evaluator(P.diff(i).diff(j))) for i, j in pairs]
    chunks = [(c, min(CHUNK, trials - c * CHUNK)) for c in range((trials + CHUNK - 1) // CHUNK)]

    def run(item):
        c, size = item
        return _chunk_scan(P, ev, diffs, pairs, seed, c, size)

    min_delta = np.inf
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(run, chunks))
    for md, witness in results:
        if witness is not None:
            return Verdict(UNSTABLE, witness, None, trials)
        min_delta = min(min_delta, md)
    md = None if not pairs else float(min_delta)
    if md is None or md >= -DELTA_TOL:
        return Verdict(STABLE, None, md, trials)
    return Verdict(UNDETERMINED, None, md, trials)


# ---------------------------------------------------------------------------
# measures built from matrices and pavings


def sr_measure_from_matrix(A: Matrix, r: int, trials: int = 1000, seed: int = 0,
                           threads: int = 1) -> DiscreteMeasure:
    """Normalised measure ``mu(S) proportional to r**|S| det_r(A_S)`` (removed convention)
    for PSD ``A``, with a stability verdict for its generating polynomial."""
    n = A.n
    if n > SR_LIMIT:
        raise SizeLimitError(f"measure construction limited to n <= {SR_LIMIT}")
    if not A.is_hermitian() or (n and min_eigenvalue(A) < -1e-10):
        raise ValueError("matrix is not positive semidefinite")
    weights = {}
    for m in range(1 << n):
        S = indices_of(m)
        w = _real(det_r_perm(submatrix_removed(A, S), r))
        w = w * r ** len(S)
        if w < 0:
            if isinstance(w, float) and w > -1e-10:
                w = 0.0
            else:
                raise ValueError(f"negative weight {w} on {S}")
        if w != 0:
            weights[m] = w
    mu = DiscreteMeasure(n, weights).normalize()
    verdict = is_real_stable_multiaffine(mu.generating_polynomial(), trials, seed, threads)
    return DiscreteMeasure(n, mu.weights, True, verdict)


def paving_generating_polynomial(n: int, r: int) -> MultilinearPoly:
    """``r**-n prod_m (d_{z_m^(0)} + .. + d_{z_m^(r-1)}) prod_all z``."""
    N = r * n
    f = MultilinearPoly(N, {(1 << N) - 1: Fraction(1)})
    for m in range(n):
        g = MultilinearPoly(N)
        for c in range(r):
            g = g + f.diff(c * n + m)
        f = g
    return f * Fraction(1, r ** n)


def paving_measure(n: int, r: int) -> DiscreteMeasure:
    """Uniform measure on ``[r*n]`` with one atom per ordered paving.

    The atom of paving ``X`` is the set of ``(copy c, index m)`` with
    ``m`` outside block ``X_c``; each of the ``r**n`` atoms has weight
    ``r**-n``. The generating polynomial is checked against the
    differential-operator construction.
    """
    if r * n > PAVING_MEASURE_LIMIT:
        raise SizeLimitError(f"paving measure limited to r*n <= {PAVING_MEASURE_LIMIT}")
    w = Fraction(1, r ** n)
    weights = {}
    for assign in product(range(r), repeat=n):
        mask = 0
        for m, b in enumerate(assign):
            for c in range(r):
                if c != b:
                    mask |= 1 << (c * n + m)
        weights[mask] = weights.get(mask, 0) + w
    mu = DiscreteMeasure(r * n, weights, True)
    if mu.generating_polynomial() != paving_generating_polynomial(n, r):
        raise AssertionError("paving measure disagrees with its differential formula")
    return mu
