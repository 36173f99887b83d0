from fractions import Fraction

import numpy as np
import pytest

from conftest import leibniz_det_r, mat
from rcharpoly.errors import SizeLimitError
from rcharpoly.generators import random_gram, random_hermitian, random_square
from rcharpoly.linalg import Matrix, det
from rcharpoly.poly import UniPoly, is_real_rooted
from rcharpoly.rdet import (
    chi_r,
    defect_k_residual,
    det_r,
    det_r_all,
    det_r_derivative,
    det_r_macmahon,
    det_r_perm,
    koteljanskii_residual,
    mixed_determinant,
    multilinearization_residual,
    pd_det_residual,
    thompson_residual,
    vere_jones_vanishing,
    x_minus,
)

X = UniPoly.x()
SWAP = [[0, 1], [1, 0]]
J4 = Matrix.ones(4)


def test_det_r_two_by_two_formula():
    a, b, c, d = (Fraction(v) for v in (3, -2, 5, 7))
    A = mat([[a, b], [c, d]])
    for r in (1, 2, 3, Fraction(1, 2)):
        assert det_r_perm(A, r) == r * r * a * d - r * b * c
    assert det_r_perm(mat(SWAP), 2) == -2


@pytest.mark.parametrize("n", [0, 1, 3, 5])
def test_det_r_identity(n):
    for r in (2, 3, Fraction(5, 2)):
        assert det_r_perm(Matrix.identity(n), r) == r ** n


def test_det_r_one_is_det(rng):
    for n in range(1, 6):
        A = random_square(rng, n)
        assert det_r_perm(A, 1) == det(A)
        assert det_r_macmahon(A, 1) == det(A)


def test_det_r_matches_bruteforce(rng):
    for n in range(1, 5):
        A = random_square(rng, n)
        for r in (2, 3, Fraction(3, 2)):
            assert det_r_perm(A, r) == leibniz_det_r(A.rows(), r)


def test_derivative_examples():
    a = Fraction(5, 3)
    assert det_r_derivative(mat([[a]]), 2) == 2 * a
    assert det_r_derivative(Matrix.identity(2), 2) == 4
    assert det_r_derivative(mat(SWAP), 2) == -2
    with pytest.raises(SizeLimitError):
        det_r_derivative(Matrix.identity(9), 2)


def test_macmahon_examples():
    a = Fraction(5, 3)
    assert det_r_macmahon(mat([[a]]), 2) == 2 * a
    assert det_r_macmahon(mat([[a]]), Fraction(1, 3)) == a / 3
    for n in (1, 3):
        assert det_r_macmahon(Matrix.zeros(n), 2) == 0


def test_three_methods_agree_complex(rng):
    for n in (2, 3, 4):
        A = random_hermitian(rng, n, complex_entries=True)
        for r in (2, 3, 4):
            vals = {det_r(A, r, m).value for m in ("perm-cycle", "derivative", "macmahon")}
            assert len(vals) == 1
    with pytest.raises(ValueError):
        det_r(A, 2, "nope")


def test_non_integer_r_perm_and_macmahon_agree(rng):
    for n in (2, 3, 4):
        A = random_square(rng, n)
        for r in (Fraction(1, 2), Fraction(3, 2), Fraction(7, 3)):
            assert det_r_perm(A, r) == det_r_macmahon(A, r)


def test_float_mode_agrees(rng):
    A = random_hermitian(rng, 4, complex_entries=True)
    exact = det_r_perm(A, 3)
    F = A.as_float()
    for m in ("perm-cycle", "derivative", "macmahon"):
        assert complex(det_r(F, 3, m).value) == pytest.approx(complex(exact), rel=1e-9)
    assert det_r_all(F, 3)["agreement"]


def test_size_limits():
    with pytest.raises(SizeLimitError):
        det_r_perm(Matrix.identity(11), 2)
    with pytest.raises(SizeLimitError):
        det_r_macmahon(Matrix.identity(13), 2)


def test_chi_r_examples():
    assert chi_r(Matrix.zeros(3), 2) == 8 * X ** 3
    assert chi_r(mat(SWAP), 2) == 4 * X * X - 2
    assert chi_r(J4, 1) == X ** 3 * (X - 4)


def test_chi_r_methods_agree(rng):
    for n in (2, 3, 4):
        A = random_hermitian(rng, n, complex_entries=n == 3)
        for r in (1, 2, 3):
            assert chi_r(A, r) == chi_r(A, r, method="macmahon")
            assert chi_r(A, r).leading == r ** n


def test_chi_r_j4_real_rootedness():
    for r in (1, 2, 3):
        assert is_real_rooted(chi_r(J4, r))
    assert not is_real_rooted(chi_r(J4, Fraction(3, 2)))


def test_mixed_determinant_examples(rng):
    a, b = Fraction(2), Fraction(-7)
    assert mixed_determinant([mat([[a]]), mat([[b]])]) == a + b
    A = random_hermitian(rng, 3)
    xm = x_minus(A)
    for r in (1, 2, 3):
        assert mixed_determinant([xm] * r) == chi_r(A, r)
    xI = [[X if i == j else UniPoly() for j in range(3)] for i in range(3)]
    minus = [[UniPoly([-A[i, j]]) for j in range(3)] for i in range(3)]
    assert mixed_determinant([xI, minus]) == chi_r(A, 1)


def test_mixed_determinant_of_copies_is_det_r(rng):
    A = random_square(rng, 3)
    for k in (2, 3, 4):
        assert mixed_determinant([A] * k) == det_r_perm(A, k)


def test_thompson_and_defect(rng):
    a = Fraction(3, 4)
    assert thompson_residual(mat([[a]]), 5).is_zero()
    for n in (3, 4):
        A = random_square(rng, n)
        for r in (2, 3):
            assert thompson_residual(A, r).is_zero()
        for k in range(n + 1):
            assert defect_k_residual(A, 2, k).is_zero()
    assert defect_k_residual(A, 3, 1) == thompson_residual(A, 3)
    with pytest.raises(ValueError):
        defect_k_residual(A, 2, n + 1)


def test_multilinearization(rng):
    assert multilinearization_residual(mat([[Fraction(2)]]), 3) == 0
    for r in (2, 3):
        assert multilinearization_residual(random_square(rng, 3), r) == 0


def test_pd_det(rng):
    A = random_hermitian(rng, 3)
    z = [Fraction(9), Fraction(19, 2), Fraction(10)]
    for S in ([], [1], [0, 2], [0, 0], [1, 1, 2], [0, 0, 1, 1, 2, 2]):
        assert pd_det_residual(A, z, S) == 0
    with pytest.raises(ValueError):
        pd_det_residual(A, z, [1, 1, 1])


def test_pd_det_single_index_is_log_derivative(rng):
    # d_i det(Z-A)**2 = 2 det(Z-A)**2 (Z-A)^{-1}_{ii}
    A = random_hermitian(rng, 3).as_float()
    z = [4.0, 4.5, 5.0]
    B = np.diag(z) - A.to_numpy()
    p = np.linalg.det(B).real ** 2
    eps = 1e-6
    zp = list(z)
    zp[1] += eps
    zm = list(z)
    zm[1] -= eps
    num = (np.linalg.det(np.diag(zp) - A.to_numpy()).real ** 2
           - np.linalg.det(np.diag(zm) - A.to_numpy()).real ** 2) / (2 * eps)
    assert num == pytest.approx(2 * p * np.linalg.inv(B)[1, 1].real, rel=1e-6)
    assert abs(pd_det_residual(A, z, [1])) <= 1e-8 * p


def test_vere_jones():
    g = np.random.default_rng(5)
    for _ in range(5):
        B = random_square(g, 3)
        assert vere_jones_vanishing(B, [0, 0, 0]) == 0
        assert vere_jones_vanishing(B, [2, 1, 2, 2]) == 0
    b = Fraction(3, 2)
    assert vere_jones_vanishing(mat([[b]]), [0, 0]) == 2 * b * b
    B = random_square(g, 3)
    assert vere_jones_vanishing(B, [0, 1]) == det_r_perm(mat([[B[0, 0], B[0, 1]], [B[1, 0], B[1, 1]]]), 2)


def test_koteljanskii(rng):
    D = Matrix.diag([1, 2, 3, 4])
    assert koteljanskii_residual(D, 2, {0, 1}, {1, 2}) == 0
    A = random_gram(rng, 4)
    assert koteljanskii_residual(A, 2, {0, 2}, {0, 2}) == 0
    with pytest.raises(ValueError):
        koteljanskii_residual(Matrix.diag([1, -1]), 2, {0}, {1})
