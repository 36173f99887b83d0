"""Seeded identity suite: every structural identity checked on generated matrices."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .generators import random_gram, random_hermitian, random_square
from .linalg import EXACT, FLOAT, Matrix, det, matrix_to_json, max_eigenvalue, submatrix_removed
from .paving import paving_charpoly_sum
from .poly import UniPoly, interlaces, is_real_rooted
from .rdet import (
    chi_r,
    defect_k_residual,
    det_r_derivative,
    det_r_macmahon,
    det_r_perm,
    koteljanskii_residual,
    multilinearization_sides,
    pd_det_sides,
    thompson_residual,
    vere_jones_vanishing,
)

CHECKS = (
    ("paving-sum", "chiexp"),
    ("three-method", "det_r"),
    ("thompson", "thompson"),
    ("defect-k", "defect-k"),
    ("multilinearization", "multilinearization"),
    ("cauchy-interlacing", "cauchy-interlacing"),
    ("pddet", "PDdet"),
    ("vere-jones", "vere-jones"),
    ("koteljanskii", "koteljanskii"),
)
CHECK_NAMES = tuple(name for name, _ in CHECKS)


@dataclass
class CheckResult:
    name: str
    tag: str
    passed: bool
    instances: int
    failure: dict | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "tag": self.tag, "passed": self.passed, "instances": self.instances,
                "failure": self.failure}


@dataclass
class SuiteReport:
    seed: int
    mode: str
    tolerance: float
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"seed": self.seed, "mode": self.mode, "tolerance": self.tolerance, "passed": self.passed,
                "checks": [c.to_json() for c in self.checks]}


class _Ctx:
    def __init__(self, mode: str, tol: float, fault: str | None):
        self.mode, self.tol, self.fault = mode, tol, fault

    def zero(self, v, name: str, scale=1.0) -> bool:
        """True when ``v`` (scalar or UniPoly) vanishes: exactly, or within tolerance in float mode."""
        if self.fault == name:
            v = v + 1
        if isinstance(v, UniPoly):
            if self.mode == EXACT and v.exact:
                return v.is_zero()
            return v.max_abs_coeff() <= self.tol * max(1.0, scale)
        if self.mode == EXACT and not isinstance(v, (float, complex)):
            return v == 0
        return abs(v) <= self.tol * max(1.0, abs(scale))


def _fmt(v):
    if isinstance(v, UniPoly):
        return v.to_json()
    return str(v)


def _instances(seed: int, mode: str):
    """Hermitian matrices (real and complex), non-Hermitian matrices and PSD Gram matrices."""
    rng = np.random.default_rng(seed)
    herm = []
    for t in range(8):
        n = 2 + t % 3
        herm.append(random_hermitian(rng, n, mode, complex_entries=bool(t % 2)))
    square = [random_square(rng, n, mode) for n in (2, 3, 3)]
    psd = [random_gram(rng, 4, rank=int(rng.integers(1, 5)), mode=mode) for _ in range(6)]
    return herm, square, psd, rng


def _fail(A: Matrix, **detail) -> dict:
    out = {"matrix": matrix_to_json(A)}
    out.update({k: _fmt(v) if not isinstance(v, (int, list, str)) else v for k, v in detail.items()})
    return out


def _check_paving_sum(ctx, herm, square, psd, rng):
    count = 0
    for A in herm:
        for r in (2, 3):
            count += 1
            res = paving_charpoly_sum(A, r) - chi_r(A, r)
            if not ctx.zero(res, "paving-sum", r ** A.n):
                return count, _fail(A, r=r, residual=res)
    return count, None


def _check_three_method(ctx, herm, square, psd, rng):
    count = 0
    for A in herm + square:
        for r in (1, 2, 3):
            count += 1
            vals = [det_r_perm(A, r), det_r_derivative(A, r), det_r_macmahon(A, r)]
            if r == 1:
                vals.append(det(A))
            scale = max(abs(complex(v)) for v in vals)
            for v in vals[1:]:
                if not ctx.zero(v - vals[0], "three-method", scale):
                    return count, _fail(A, r=r, values=[str(x) for x in vals])
    return count, None


def _check_thompson(ctx, herm, square, psd, rng):
    count = 0
    for A in herm + square:
        for r in (2, 3):
            count += 1
            res = thompson_residual(A, r)
            if not ctx.zero(res, "thompson", r ** A.n):
                return count, _fail(A, r=r, residual=res)
    return count, None


def _check_defect(ctx, herm, square, psd, rng):
    count = 0
    for A in herm:
        for k in range(A.n + 1):
            count += 1
            res = defect_k_residual(A, 2, k)
            if not ctx.zero(res, "defect-k", 2 ** A.n * 24):
                return count, _fail(A, r=2, k=k, residual=res)
    return count, None


def _check_multilinearization(ctx, herm, square, psd, rng):
    count = 0
    for A in herm:
        if A.n > 3:
            continue
        for r in (2, 3):
            count += 1
            lhs, rhs = multilinearization_sides(A, r)
            res = (lhs - rhs).max_abs_coeff()
            if ctx.fault == "multilinearization":
                res += 1
            if (res != 0) if ctx.mode == EXACT else res > ctx.tol * max(1.0, lhs.max_abs_coeff()):
                return count, _fail(A, r=r, residual=res)
    return count, None


def _check_cauchy(ctx, herm, square, psd, rng):
    count = 0
    for A in herm:
        for r in (2, 3):
            p = chi_r(A, r)
            count += 1
            ok = is_real_rooted(p)
            for i in range(A.n):
                ok = ok and interlaces(p, chi_r(submatrix_removed(A, [i]), r))
            if ctx.fault == "cauchy-interlacing":
                ok = False
            if not ok:
                return count, _fail(A, r=r, chi_r=p)
    return count, None


def _check_pddet(ctx, herm, square, psd, rng):
    count = 0
    for A in herm:
        top = max_eigenvalue(A)
        for t in range(3):
            # every z_i above the spectrum keeps Z - A invertible
            base = int(np.ceil(top)) + 1
            z = [base + Fraction(int(rng.integers(0, 7)), 2) for _ in range(A.n)]
            if ctx.mode == FLOAT:
                z = [float(v) for v in z]
            counts = {i: int(rng.integers(0, 3)) for i in range(A.n)}
            S = {i: m for i, m in counts.items() if m}
            count += 1
            lhs, rhs = pd_det_sides(A, z, S)
            if not ctx.zero(lhs - rhs, "pddet", abs(complex(lhs))):
                return count, _fail(A, z=[str(v) for v in z], S=[[i, m] for i, m in sorted(S.items())],
                                    lhs=lhs, rhs=rhs)
    return count, None


def _check_vere_jones(ctx, herm, square, psd, rng):
    count = 0
    for B in herm + square:
        for i in range(B.n):
            for extra in ([], [(i + 1) % B.n]):
                S = [i, i, i] + extra
                count += 1
                v = vere_jones_vanishing(B, S)
                if not ctx.zero(v, "vere-jones"):
                    return count, _fail(B, S=S, value=v)
    return count, None


def _check_koteljanskii(ctx, herm, square, psd, rng):
    count = 0
    for A in psd:
        n = A.n
        subsets = [list(c) for k in range(n + 1) for c in combinations(range(n), k)]
        for _ in range(10):
            S = subsets[int(rng.integers(0, len(subsets)))]
            T = subsets[int(rng.integers(0, len(subsets)))]
            count += 1
            res = koteljanskii_residual(A, 2, S, T)
            if ctx.fault == "koteljanskii":
                res = -1
            if res < (0 if ctx.mode == EXACT else -ctx.tol):
                return count, _fail(A, r=2, S=S, T=T, residual=res)
    return count, None


_RUNNERS = {
    "paving-sum": _check_paving_sum,
    "three-method": _check_three_method,
    "thompson": _check_thompson,
    "defect-k": _check_defect,
    "multilinearization": _check_multilinearization,
    "cauchy-interlacing": _check_cauchy,
    "pddet": _check_pddet,
    "vere-jones": _check_vere_jones,
    "koteljanskii": _check_koteljanskii,
}


def run_suite(seed: int = 0, mode: str = EXACT, tolerance: float = 1e-9, threads: int = 1,
              fault: str | None = None) -> SuiteReport:
    """Run every identity check. Each check regenerates its own matrices from
    ``seed`` so results do not depend on ``threads`` or check order.

    ``fault`` names a check whose residual is deliberately perturbed, to
    exercise the failure path.
    """
    if fault is not None and fault not in _RUNNERS:
        raise ValueError(f"unknown fault {fault!r}; choose from {', '.join(CHECK_NAMES)}")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if threads < 1:
        raise ValueError("threads must be at least 1")
    ctx = _Ctx(mode, tolerance, fault)

    def run(item):
        k, (name, tag) = item
        herm, square, psd, _ = _instances(seed, mode)
        rng = np.random.default_rng([seed, k])
        count, failure = _RUNNERS[name](ctx, herm, square, psd, rng)
        return CheckResult(name, tag, failure is None, count, failure)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run, enumerate(CHECKS)))
    return SuiteReport(seed, mode, tolerance, results)
