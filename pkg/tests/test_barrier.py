import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import mat
from rcharpoly.barrier import (
    barrier_shift_check,
    bivariate_counterexample,
    closed_form_bound,
    conjectured_bound,
    diagonal_bound_numeric,
    phi,
    phi_diagonal_bound,
    root_bound,
    root_bound_2,
    statement_counterexample_search,
    statement_sides,
    statement_terms,
    trace_inequality,
    trace_inequality_traces,
)
from rcharpoly.errors import NotAboveRootsError
from rcharpoly.generators import random_contraction, random_hermitian
from rcharpoly.linalg import Matrix, harmonic_projection, resolvent_diagonal
from rcharpoly.poly import max_root
from rcharpoly.rdet import chi_r

SWAP = [[0, 1], [1, 0]]


def test_phi_examples():
    assert phi(mat(SWAP), 2, 2, 0) == Fraction(4, 3)
    assert phi(Matrix.zeros(2), 2, 1, 1) == 2
    assert phi(Matrix.diag([Fraction(1, 2)]), 3, 1, 0) == 6
    with pytest.raises(NotAboveRootsError):
        phi(mat(SWAP), 2, 1, 0)


def test_phi_is_log_derivative():
    # d/dz_i log det(Z - A)**r at z = b*1, by central differences
    A = random_hermitian(np.random.default_rng(2), 3).as_float()
    M = A.to_numpy()
    b, r, eps = 4.0, 3, 1e-6

    def logp(z):
        return r * math.log(np.linalg.det(np.diag(z) - M).real)

    for i in range(3):
        zp, zm = [b] * 3, [b] * 3
        zp[i] += eps
        zm[i] -= eps
        assert phi(A, r, b, i) == pytest.approx((logp(zp) - logp(zm)) / (2 * eps), rel=1e-6)


def test_phi_diagonal_bound_examples():
    assert phi_diagonal_bound(Fraction(1, 2), 2) == Fraction(3, 4)
    assert resolvent_diagonal(Matrix.diag([Fraction(1, 2)] * 3), 2, 0) == Fraction(2, 3)
    assert phi_diagonal_bound(0, 2) == Fraction(1, 2)
    assert phi_diagonal_bound(1, 2) == 1
    with pytest.raises(ValueError):
        phi_diagonal_bound(Fraction(1, 2), 1)


@pytest.mark.parametrize("n,k", [(4, 1), (5, 2), (6, 3), (8, 2), (8, 5)])
def test_phi_diagonal_bound_dominates_on_projections(n, k):
    P = harmonic_projection(n, k)
    for b in np.arange(1.01, 3.0001, 0.01):
        bound = phi_diagonal_bound(k / n, b)
        assert max(phi(P, 1, b, i) for i in range(n)) <= bound * (1 + 1e-12)


def test_root_bound_examples():
    P = harmonic_projection(4, 1)
    rep = root_bound_2(P)
    assert rep.bound <= 1
    assert rep.certified_max_root <= rep.bound + 1e-8
    assert root_bound_2(Matrix.zeros(3)).bound <= 1e-6
    d = Fraction(1, 5)
    rep = root_bound_2(Matrix.diag([d] * 3))
    assert rep.certified_max_root == pytest.approx(float(d), abs=1e-9)
    assert rep.bound >= float(d)


def test_root_bound_certifies_random_contractions():
    g = np.random.default_rng(4)
    for _ in range(6):
        A = random_contraction(g, 4)
        for r in (2, 3, 4):
            rep = root_bound(A, r)
            assert rep.certified_max_root <= rep.bound + 1e-8


def test_root_bound_below_closed_form_on_constant_diagonal():
    for n, k in ((4, 1), (8, 1), (6, 1), (9, 2)):
        P = harmonic_projection(n, k)
        for r in (2, 3, 4):
            if k / n <= {2: 0.25, 3: 4 / 9, 4: 9 / 16}[r]:
                assert root_bound(P, r, certify=False).bound <= closed_form_bound(k / n, r) + 1e-8


def test_closed_form_examples():
    assert closed_form_bound(0, 2) == pytest.approx(0.75, abs=1e-12)
    assert closed_form_bound(1e-12, 2) == pytest.approx(0.75, abs=1e-5)
    assert closed_form_bound(0.5, 4) == pytest.approx((3 + math.sqrt(7)) ** 2 / 32, abs=1e-12)
    assert closed_form_bound(0.25, 2) == pytest.approx(1, abs=1e-12)
    assert closed_form_bound(0.3, 2) == 1.0
    with pytest.raises(ValueError):
        closed_form_bound(0.1, 5)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_closed_form_is_optimum_of_objective(r):
    for d in np.linspace(0, 1, 41):
        assert diagonal_bound_numeric(float(d), r)[1] == pytest.approx(closed_form_bound(float(d), r), abs=1e-9)


def test_conjectured_bound_examples():
    assert conjectured_bound(0.5, 2)["first"] == pytest.approx(1)
    for r in (2, 3, 7):
        assert conjectured_bound(0, r)["first"] == pytest.approx(1 / r)
    c = conjectured_bound(0.25, 2)
    assert c["second"] == pytest.approx(1) and c["label"] == "conjecture"


def test_trace_inequality_examples():
    assert trace_inequality(3, [1, 1, 1], [1, 1, 1]) == pytest.approx(12)
    for k in (3, 4):
        assert trace_inequality(k, [0.3] * k, [0] * k) == 0
    with pytest.raises(ValueError):
        trace_inequality(3, [1, -1, 1], [1, 1, 1])


@pytest.mark.parametrize("k", [3, 4])
def test_trace_inequality_matches_trace_form(k):
    g = np.random.default_rng(k)
    lam, x = g.uniform(0, 3, (2000, k)), g.uniform(0, 3, (2000, k))
    assert np.allclose(trace_inequality(k, lam, x), trace_inequality_traces(k, lam, x), rtol=1e-10, atol=1e-9)


def test_barrier_shift_examples():
    rep = barrier_shift_check(harmonic_projection(2, 1), 2)
    assert rep.passed and rep.rule == "half" and rep.checks
    assert barrier_shift_check(random_contraction(np.random.default_rng(0), 2), 3).passed
    rep = barrier_shift_check(Matrix.zeros(3), 2)
    assert rep.passed


def test_barrier_shift_with_processed_indices():
    P = harmonic_projection(4, 1)
    for r in (2, 3):
        assert barrier_shift_check(P, r, S=[0]).passed


def test_bivariate_counterexample():
    rep = bivariate_counterexample()
    assert rep["phi_x"] == Fraction(3, 4) and rep["phi_y"] == Fraction(5, 16)
    assert rep["delta"] == Fraction(4, 3)
    x, y = rep["shift_point"]
    # potential of d_x p in y is 36 / (92 + 64x + 36y)
    assert rep["shifted_phi_y"] == Fraction(36) / (92 + 64 * x + 36 * y)
    assert rep["shifted_phi_y"] > rep["phi_y"] and rep["violation"]


def test_statement_diagonal_never_violates():
    g = np.random.default_rng(9)
    for _ in range(20):
        B = Matrix.diag([Fraction(int(v), 4) for v in g.integers(1, 9, 4)])
        lhs, rhs = statement_sides(statement_terms(B, [2]))
        assert lhs <= rhs


def test_statement_search_small_budget_is_reproducible():
    a = statement_counterexample_search(4, 2000, seed=3, empty_trials=200)
    b = statement_counterexample_search(4, 2000, seed=3, threads=3, chunk_size=10_000, empty_trials=200)
    assert a.to_json() == b.to_json()
    assert a.empty_violations == 0
