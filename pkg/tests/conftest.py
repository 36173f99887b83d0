import sys
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from rcharpoly.generators import random_hermitian
from rcharpoly.linalg import Matrix


def mat(rows):
    return Matrix.from_rows([[Fraction(x) if isinstance(x, (int, str)) else x for x in row] for row in rows])


def cycles(sigma):
    seen, c = set(), 0
    for s in range(len(sigma)):
        if s not in seen:
            c += 1
            while s not in seen:
                seen.add(s)
                s = sigma[s]
    return c


def leibniz_det_r(rows, r):
    """Brute-force det_r straight from the permutation sum."""
    n = len(rows)
    total = 0
    for sigma in permutations(range(n)):
        term = (-1) ** (n - cycles(sigma)) * r ** cycles(sigma)
        for i in range(n):
            term = term * rows[i][sigma[i]]
        total = total + term
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def hermitians():
    g = np.random.default_rng(7)
    return [random_hermitian(g, 2 + t % 3, complex_entries=bool(t % 2)) for t in range(12)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
