from fractions import Fraction

import numpy as np
import pytest

from conftest import mat
from rcharpoly.errors import NotAboveRootsError
from rcharpoly.linalg import (
    FLOAT,
    Matrix,
    Paving,
    char_poly,
    det,
    harmonic_projection,
    matrix_from_json,
    matrix_to_json,
    max_eigenvalue,
    multilinear_det,
    pinch,
    resolvent_diagonal,
    submatrix_kept,
    submatrix_removed,
)
from rcharpoly.poly import UniPoly, indices_of

X = UniPoly.x()
SWAP = [[0, 1], [1, 0]]


def test_submatrix_removed_examples():
    assert submatrix_removed(Matrix.diag([1, 2, 3]), [1]) == Matrix.diag([1, 3])
    A = mat([[1, 2], [3, 4]])
    assert submatrix_removed(A, []) == A
    assert submatrix_removed(mat(SWAP), [0]) == mat([[0]])
    with pytest.raises(IndexError):
        submatrix_removed(A, [5])


def test_submatrix_kept_sets_and_multisets():
    A = mat([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert submatrix_kept(A, [0, 2]) == mat([[1, 3], [7, 9]])
    assert submatrix_kept(A, []).n == 0
    assert submatrix_kept(A, [2, 0, 0]) == mat([[1, 1, 3], [1, 1, 3], [7, 7, 9]])


def test_removed_is_complement_of_kept(hermitians):
    for A in hermitians:
        for m in range(1 << A.n):
            S = indices_of(m)
            rest = [i for i in range(A.n) if i not in S]
            assert submatrix_removed(A, S) == submatrix_kept(A, rest)


def test_pinch_examples():
    assert pinch(mat(SWAP), Paving(2, (0, 1))) == Matrix.zeros(2)
    A = mat([[2, 1], [1, 2]])
    assert pinch(A, Paving(1, (0, 0))) == A
    assert pinch(A, Paving(2, (0, 1))) == Matrix.diag([2, 2])


def test_char_poly_examples():
    assert char_poly(mat(SWAP)) == X * X - 1
    assert char_poly(Matrix.zeros(3)) == X ** 3
    assert char_poly(Matrix.diag([1, 2])) == UniPoly([2, -3, 1])


def test_char_poly_matches_numpy(hermitians):
    for A in hermitians:
        ref = np.poly(A.to_numpy())[::-1]
        got = [complex(c) for c in char_poly(A).coeffs]
        assert np.allclose(got, ref)


def test_det_matches_numpy(rng):
    for n in range(1, 6):
        rows = [[Fraction(int(rng.integers(-8, 9)), 4) for _ in range(n)] for _ in range(n)]
        assert float(det(Matrix.from_rows(rows))) == pytest.approx(np.linalg.det(np.array(rows, float)), abs=1e-9)


def test_max_eigenvalue_examples():
    assert max_eigenvalue(mat(SWAP)) == pytest.approx(1)
    assert max_eigenvalue(Matrix.diag([3, -5])) == pytest.approx(3)
    assert max_eigenvalue(harmonic_projection(4, 2)) == pytest.approx(1)


def test_resolvent_diagonal_examples():
    assert resolvent_diagonal(Matrix.diag([Fraction(1, 2)]), 2, 0) == Fraction(2, 3)
    assert resolvent_diagonal(Matrix.zeros(3), 1, 2) == 1
    assert resolvent_diagonal(mat(SWAP), 2, 0) == Fraction(2, 3)
    with pytest.raises(NotAboveRootsError):
        resolvent_diagonal(mat(SWAP), Fraction(1, 2), 0)


@pytest.mark.parametrize("n,k", [(2, 1), (4, 1), (4, 2), (5, 2), (8, 3), (6, 6)])
def test_harmonic_projection_is_projection(n, k):
    P = harmonic_projection(n, k).to_numpy()
    assert np.allclose(P @ P, P)
    assert np.allclose(P, P.conj().T)
    assert np.allclose(np.diag(P), k / n)
    assert round(np.trace(P).real) == k


def test_harmonic_projection_full_rank_is_identity():
    assert harmonic_projection(4, 4) == Matrix.identity(4)


@pytest.mark.parametrize("n,k", [(4, 1), (8, 1), (6, 3), (8, 2), (5, 2)])
def test_centered_projection_has_same_pinched_spectra(n, k):
    P = harmonic_projection(n, k).to_numpy()
    C = harmonic_projection(n, k, centered=True).to_numpy()
    assert np.allclose(C.imag, 0)
    g = np.random.default_rng(n * 10 + k)
    for _ in range(5):
        a = g.integers(0, 2, n)
        mask = a[:, None] == a[None, :]
        assert np.allclose(np.linalg.eigvalsh(P * mask), np.linalg.eigvalsh(C * mask))


def test_matrix_json_roundtrip(hermitians):
    for A in hermitians:
        assert matrix_from_json(matrix_to_json(A)) == A
    F = hermitians[1].as_float()
    assert matrix_from_json(matrix_to_json(F)) == F
    with pytest.raises(ValueError):
        matrix_from_json({"n": 2, "entries": [[1, 2]]})
    with pytest.raises(ValueError):
        Matrix.from_rows([[1.0, float("nan")], [0.0, 1.0]], FLOAT)


def test_multilinear_det_examples():
    a = Fraction(3)
    f = multilinear_det(mat([[a]]))
    assert f[[]] == X - a and f[[0]] == UniPoly([1])
    f = multilinear_det(mat(SWAP))
    assert f[[]] == X * X - 1
    assert f[[0]] == X and f[[1]] == X and f[[0, 1]] == UniPoly([1])


def test_multilinear_det_coefficients_are_charpolys(hermitians):
    for A in hermitians:
        f = multilinear_det(A)
        for m in range(1 << A.n):
            assert f[m] == char_poly(submatrix_removed(A, indices_of(m)))
