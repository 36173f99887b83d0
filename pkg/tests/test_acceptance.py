"""Acceptance gate. Each criterion prints one PASS/FAIL line.

Under pytest the lines are printed in the terminal summary; ``python3
tests/test_acceptance.py`` prints them as it goes.
"""

import contextlib
import io
import math
import sys
import time
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from rcharpoly.barrier import (
    THRESHOLDS,
    bivariate_counterexample,
    closed_form_bound,
    statement_counterexample_search,
    statement_sides,
    statement_terms,
    trace_inequality,
)
from rcharpoly.cli import main
from rcharpoly.generators import random_gram, random_hermitian, random_square
from rcharpoly.linalg import FLOAT, Matrix, det, harmonic_projection, matrix_from_json, max_eigenvalue, submatrix_removed
from rcharpoly.paving import paving_charpoly_sum
from rcharpoly.poly import interlaces, is_real_rooted, max_root
from rcharpoly.rdet import (
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

SEED = 2024
LINES = []


def report(number, title, ok, detail="", echo=False):
    line = f"criterion {number:2d} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    LINES.append(line)
    if echo:
        print(line, flush=True)
    return ok


def hermitian_set():
    """50 seeded rational Hermitian matrices, n in {2, 3, 4}, entries in [-2, 2]."""
    rng = np.random.default_rng(SEED)
    return [random_hermitian(rng, 2 + t % 3, complex_entries=bool(t % 2)) for t in range(50)]


def criterion_1():
    start = time.perf_counter()
    bad = [(k, r) for k, A in enumerate(hermitian_set()) for r in (2, 3) if paving_charpoly_sum(A, r) != chi_r(A, r)]
    elapsed = time.perf_counter() - start
    return not bad and elapsed < 60, f"100 (matrix, r) pairs, {len(bad)} mismatches, {elapsed:.1f}s"


def criterion_2():
    rng = np.random.default_rng(SEED + 1)
    start = time.perf_counter()
    bad = 0
    for t in range(50):
        A = random_square(rng, 1 + t % 4)
        for r in (2, 3):
            if not det_r_perm(A, r) == det_r_derivative(A, r) == det_r_macmahon(A, r):
                bad += 1
        if det_r_perm(A, 1) != det(A):
            bad += 1
    elapsed = time.perf_counter() - start
    return bad == 0 and elapsed < 30, f"50 matrices, {bad} disagreements, {elapsed:.1f}s"


def criterion_3():
    bad = 0
    for A in hermitian_set():
        for r in (2, 3):
            p = chi_r(A, r)
            if not is_real_rooted(p) or not all(interlaces(p, chi_r(submatrix_removed(A, [i]), r))
                                                for i in range(A.n)):
                bad += 1
    return bad == 0, f"100 (matrix, r) pairs, {bad} failures"


def _multisets(rng, n):
    counts = rng.integers(0, 3, n)
    return [i for i in range(n) for _ in range(counts[i])]


def criterion_4():
    rng = np.random.default_rng(SEED + 4)
    bad = []
    worst = 0.0
    for k, A in enumerate(hermitian_set()):
        n = A.n
        for r in (2, 3):
            if not thompson_residual(A, r).is_zero():
                bad.append(("thompson", k, r))
            for d in range(n + 1):
                if not defect_k_residual(A, r, d).is_zero():
                    bad.append(("defect-k", k, r, d))
            lhs, rhs = multilinearization_sides(A, r)
            if lhs != rhs:
                bad.append(("multilinearization", k, r))
        base = math.ceil(max_eigenvalue(A)) + 1
        for _ in range(3):
            z = [base + Fraction(int(v), 3) for v in rng.integers(0, 7, n)]
            S = _multisets(rng, n)
            lhs, rhs = pd_det_sides(A, z, S)
            if lhs != rhs:
                bad.append(("pddet", k, S))
        for i in range(n):
            if vere_jones_vanishing(A, [i, i, i] + _multisets(rng, n)[:2]) != 0:
                bad.append(("vere-jones", k, i))
        F = A.as_float()
        for _ in range(5):
            z = list(max_eigenvalue(F) + rng.uniform(0.1, 3.0, n))
            lhs, rhs = pd_det_sides(F, z, _multisets(rng, n))
            rel = abs(complex(lhs) - complex(rhs)) / max(abs(complex(lhs)), 1e-300)
            worst = max(worst, rel)
    ok = not bad and worst < 1e-8
    return ok, f"{len(bad)} nonzero exact residuals, worst float PDdet relative residual {worst:.1e}"


def criterion_5():
    a = closed_form_bound(0.5, 4)
    # continuous from the right at 0; the deviation grows like sqrt(delta)
    b = max(abs(closed_form_bound(d, 2) - 0.75) for d in (0.0, 1e-20)) + 0.75
    c = closed_form_bound(0.25, 2)
    ok = abs(a - (3 + math.sqrt(7)) ** 2 / 32) < 1e-12 and abs(b - 0.75) < 1e-9 and abs(c - 1) < 1e-12
    return ok, f"r=4,d=1/2 -> {a:.12f}; r=2,d->0 -> {b:.12f}; r=2,d=1/4 -> {c:.12f}"


def criterion_6():
    start = time.perf_counter()
    rows, ok = [], True
    for n, k in ((4, 1), (8, 1), (8, 2), (6, 3)):
        P = harmonic_projection(n, k, centered=True)
        delta = Fraction(k, n)
        for r in (2, 3, 4):
            if delta > THRESHOLDS[r]:
                continue
            root = max_root(chi_r(P, r))
            bound = closed_form_bound(delta, r)
            ok = ok and root <= bound + 1e-8
            rows.append(f"({n},{k}) r={r} {root:.5f}<={bound:.5f}")
    elapsed = time.perf_counter() - start
    return ok and elapsed < 300, "; ".join(rows) + f"; {elapsed:.1f}s"


def criterion_7():
    biv = bivariate_counterexample()
    biv_ok = (biv["phi_x"] == Fraction(3, 4) and biv["phi_y"] == Fraction(5, 16)
              and biv["delta"] == Fraction(4, 3) and biv["shifted_phi_y"] > biv["phi_y"])
    J4 = Matrix.ones(4)
    j4_ok = all(is_real_rooted(chi_r(J4, r)) for r in (1, 2, 3)) and not is_real_rooted(chi_r(J4, Fraction(3, 2)))
    rep = statement_counterexample_search(4, 100_000, seed=1)
    w = rep.witness
    verified = False
    if w is not None:
        B = matrix_from_json(w["matrix"])
        lhs, rhs = statement_sides(statement_terms(B, w["S"]))
        verified = lhs > rhs
    ok = biv_ok and j4_ok and verified and rep.empty_violations == 0
    detail = (f"bivariate shifted potential {biv['shifted_phi_y']} > 5/16; J_4 real-rooted at r=1,2,3 and not at 3/2; "
              f"statement witness {'verified' if verified else 'missing'} after {rep.examined} matrices, "
              f"empty-S violations {rep.empty_violations}")
    return ok, detail


def criterion_8():
    rng = np.random.default_rng(SEED + 8)
    start = time.perf_counter()
    worst = {}
    for k in (3, 4):
        lam = rng.exponential(1.0, (100_000, k)) * (rng.random((100_000, k)) > 0.1)
        x = rng.exponential(1.0, (100_000, k)) * (rng.random((100_000, k)) > 0.1)
        worst[k] = float(np.min(trace_inequality(k, lam, x)))
    elapsed = time.perf_counter() - start
    ok = min(worst.values()) >= -1e-12 and elapsed < 10
    return ok, f"min residual k=3 {worst[3]:.2e}, k=4 {worst[4]:.2e}, {elapsed:.1f}s"


def criterion_9():
    rng = np.random.default_rng(SEED + 9)
    subsets = [list(c) for k in range(5) for c in combinations(range(4), k)]
    worst = math.inf
    for _ in range(1000):
        A = random_gram(rng, 4, rank=int(rng.integers(1, 5)))
        S = subsets[int(rng.integers(len(subsets)))]
        T = subsets[int(rng.integers(len(subsets)))]
        worst = min(worst, float(koteljanskii_residual(A, 2, S, T)))
    return worst >= -1e-9, f"1000 trials, min residual {worst:.3g}"


def _cli(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


def criterion_10():
    a = _cli("verify", "--seed", "3")
    b = _cli("verify", "--seed", "3")
    c = _cli("verify", "--seed", "3", "--threads", "4")
    d = _cli("verify", "--seed", "3", "--mode", FLOAT, "--tolerance", "1e-8", "--threads", "1")
    e = _cli("verify", "--seed", "3", "--mode", FLOAT, "--tolerance", "1e-8", "--threads", "4")
    ok = a == b == c and d == e and a[0] == 0 and d[0] == 0
    return ok, "repeat runs and threads 1 vs 4 byte-identical" if ok else "outputs differ"


CRITERIA = [
    (1, "paving sum equals chi_r", criterion_1),
    (2, "three-method det_r agreement", criterion_2),
    (3, "real-rootedness and interlacing", criterion_3),
    (4, "identity residuals", criterion_4),
    (5, "closed-form constants", criterion_5),
    (6, "bound certification on harmonic projections", criterion_6),
    (7, "counterexamples", criterion_7),
    (8, "trace inequalities", criterion_8),
    (9, "Koteljanskii analogue", criterion_9),
    (10, "determinism", criterion_10),
]


@pytest.mark.parametrize("number,title,check", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, check):
    ok, detail = check()
    assert report(number, title, ok, detail), detail


if __name__ == "__main__":
    results = [report(n, t, *c(), echo=True) for n, t, c in CRITERIA]
    sys.exit(0 if all(results) else 1)
