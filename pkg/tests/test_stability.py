from fractions import Fraction

import numpy as np
import pytest

from rcharpoly.errors import SizeLimitError
from rcharpoly.generators import random_gram, random_hermitian
from rcharpoly.linalg import Matrix
from rcharpoly.paving import blockwise, sr_expected_charpoly
from rcharpoly.poly import MultiPoly, MultilinearPoly, is_real_rooted
from rcharpoly.rdet import chi_r
from rcharpoly.stability import (
    STABLE,
    UNDETERMINED,
    UNSTABLE,
    DiscreteMeasure,
    is_real_stable_multiaffine,
    paving_generating_polynomial,
    paving_measure,
    sr_measure_from_matrix,
)


def poly2(c0, c1, c2, c12):
    return MultilinearPoly(2, {0: c0, 1: c1, 2: c2, 3: c12})


def test_stability_examples():
    assert is_real_stable_multiaffine(poly2(0, 1, 1, 0)).status == STABLE
    v = is_real_stable_multiaffine(poly2(1, 0, 0, 1))
    assert v.status == UNSTABLE and v.witness == (1j, 1j)
    assert is_real_stable_multiaffine(poly2(-1, 0, 0, 1)).status == STABLE


def test_unstable_found_by_search():
    # 1 + z0 z1 + z1 z2 - z0 z2 has zeros away from (i, i, i)
    P = MultilinearPoly(3, {0: 1, 3: 1, 6: 1, 5: -1})
    v = is_real_stable_multiaffine(P, trials=2000)
    assert v.status in (UNSTABLE, UNDETERMINED)
    if v.witness is not None:
        z = v.witness
        val = 1 + z[0] * z[1] + z[1] * z[2] - z[0] * z[2]
        assert abs(val) < 1e-10 and all(t.imag > 0 for t in z)


def test_stability_verdict_independent_of_threads():
    P = MultilinearPoly(3, {0: 1, 1: 2, 2: 3, 4: 1, 7: Fraction(1, 2)})
    a = is_real_stable_multiaffine(P, trials=1500, seed=4, threads=1)
    b = is_real_stable_multiaffine(P, trials=1500, seed=4, threads=4)
    assert a == b


def test_stability_rejects_non_multiaffine():
    with pytest.raises(ValueError):
        is_real_stable_multiaffine(MultiPoly(1, {(2,): 1}))


def test_sr_measure_examples():
    mu = sr_measure_from_matrix(Matrix.zeros(3), 2)
    assert mu.weights == {7: 1}
    a, b = Fraction(1), Fraction(2)
    mu = sr_measure_from_matrix(Matrix.diag([a, b]), 2)
    # diagonal weights factor: index i contributes 2 if removed, 2 d_i if kept
    assert mu.weights == {0: Fraction(1, 3), 1: Fraction(1, 3), 2: Fraction(1, 6), 3: Fraction(1, 6)}
    assert mu.verdict.status == STABLE


def test_sr_measure_gram_is_stable():
    A = random_gram(np.random.default_rng(8), 3)
    mu = sr_measure_from_matrix(A, 2, trials=10_000)
    assert mu.verdict.status == STABLE
    assert sum(mu.weights.values()) == 1 and all(w >= 0 for w in mu.weights.values())


def test_sr_measure_rejects_indefinite():
    with pytest.raises(ValueError):
        sr_measure_from_matrix(Matrix.diag([1, -1]), 2)
    with pytest.raises(SizeLimitError):
        sr_measure_from_matrix(Matrix.zeros(9), 2)


def test_sr_measure_expected_charpoly_is_real_rooted():
    g = np.random.default_rng(13)
    for _ in range(3):
        mu = sr_measure_from_matrix(random_gram(g, 4, rank=2), 2, trials=500)
        H = random_hermitian(g, 4, complex_entries=True)
        assert is_real_rooted(sr_expected_charpoly(H, mu))


def test_paving_measure_examples():
    mu = paving_measure(1, 2)
    assert len(mu.weights) == 2
    mu = paving_measure(2, 2)
    assert sorted(mu.weights.values()) == [Fraction(1, 4)] * 4
    assert mu.generating_polynomial() == paving_generating_polynomial(2, 2)
    with pytest.raises(SizeLimitError):
        paving_measure(7, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_paving_measure_reproduces_chi_r(n):
    A = random_hermitian(np.random.default_rng(n), n, complex_entries=True)
    for r in (2, 3):
        if r * n > 9:
            continue
        expected = sr_expected_charpoly(blockwise(A, r), paving_measure(n, r))
        assert expected * r ** n == chi_r(A, r)


def test_discrete_measure_validation_and_json():
    with pytest.raises(ValueError):
        DiscreteMeasure(2, {1: -1})
    with pytest.raises(ValueError):
        DiscreteMeasure(2, {1: Fraction(1, 2)}, normalized=True)
    mu = DiscreteMeasure(2, {1: 1, 3: 3}).normalize()
    assert mu.to_json() == {"n": 2, "atoms": [{"set": [0], "w": "1/4"}, {"set": [0, 1], "w": "3/4"}]}
