"""Pavings: enumeration, the paving charpoly sum, optimal-paving search and
the binary interlacing tree for 2-pavings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

import numpy as np

from .errors import SizeLimitError
from .linalg import (
    EXACT,
    Matrix,
    Paving,
    char_poly,
    multilinear_det,
    pinch,
    submatrix_kept,
)
from .poly import (
    MultilinearPoly,
    UniPoly,
    apply_diff_operator,
    has_common_interlacer,
    indices_of,
    is_real_rooted,
    max_root,
)
from .rdet import chi_r

ENUMERATION_LIMIT = 10 ** 8
TREE_LIMIT = 10
TREE_MULTILINEAR_LIMIT = 4
TIE_EPS = 1e-12


def _check_budget(n: int, r: int, budget: int = ENUMERATION_LIMIT):
    if r ** n > budget:
        raise SizeLimitError(f"{r}**{n} pavings exceeds the budget of {budget}")


def enumerate_pavings(n: int, r: int, budget: int = ENUMERATION_LIMIT) -> Iterator[Paving]:
    """All ``r**n`` ordered pavings, in lexicographic order of the assignment."""
    if n < 0 or r < 1:
        raise ValueError("need n >= 0 and r >= 1")
    _check_budget(n, r, budget)
    for assign in product(range(r), repeat=n):
        yield Paving(r, assign)


class _BlockCache:
    """Per-mask characteristic polynomials and top eigenvalues of kept blocks."""

    def __init__(self, A: Matrix):
        self.A = A
        self._poly: dict[int, UniPoly] = {0: UniPoly([1])}
        self._top: dict[int, float] = {}
        self._dense = A.to_numpy()

    def poly(self, mask: int) -> UniPoly:
        p = self._poly.get(mask)
        if p is None:
            p = char_poly(submatrix_kept(self.A, indices_of(mask)))
            self._poly[mask] = p
        return p

    def top(self, mask: int) -> float:
        v = self._top.get(mask)
        if v is None:
            idx = indices_of(mask)
            v = float(np.linalg.eigvalsh(self._dense[np.ix_(idx, idx)])[-1])
            self._top[mask] = v
        return v

    def pinch_poly(self, X: Paving) -> UniPoly:
        out = UniPoly([1])
        for m in X.block_masks():
            if m:
                out = out * self.poly(m)
        return out

    def pinch_top(self, X: Paving) -> float:
        return max(self.top(m) for m in X.block_masks() if m)


def paving_charpoly_sum(A: Matrix, r: int, budget: int = ENUMERATION_LIMIT) -> UniPoly:
    """``sum_X char_poly(pinch(A, X))`` over all ``r**n`` ordered pavings.

    The pinching is block diagonal, so each term is a product of block
    characteristic polynomials; those are cached per block.
    """
    cache = _BlockCache(A)
    total = UniPoly()
    for X in enumerate_pavings(A.n, r, budget):
        total = total + cache.pinch_poly(X)
    return total


@dataclass(frozen=True)
class PavingReport:
    paving: Paving
    pinch_max_eig: float
    charpoly: UniPoly
    bound_used: object = None
    chi_r_max_root: float | None = None

    def to_json(self) -> dict:
        out = {"assign": self.paving.to_json(), "value": self.pinch_max_eig,
               "charpoly": self.charpoly.to_json()}
        if self.chi_r_max_root is not None:
            out["chi_r_max_root"] = self.chi_r_max_root
        out["bound"] = self.bound_used.to_json() if self.bound_used is not None else None
        return out


def _report(A: Matrix, X: Paving, value: float, certify: bool) -> PavingReport:
    mr = None
    if certify:
        mr = max_root(chi_r(A, X.r))
        if value > mr + 1e-9:
            raise AssertionError(f"best paving value {value} exceeds max root {mr} of chi_r")
    return PavingReport(X, value, char_poly(pinch(A, X)), None, mr)


def best_paving_exhaustive(A: Matrix, r: int, certify: bool = True,
                           budget: int = ENUMERATION_LIMIT) -> PavingReport:
    """Paving minimising the top eigenvalue of the pinching; ties go to the lexicographically first.

    With ``certify`` the optimum is checked against the largest root of
    ``chi_r(A, r)``, which it can never exceed.
    """
    if A.n == 0:
        raise ValueError("empty matrix")
    cache = _BlockCache(A)
    best, best_val = None, None
    for X in enumerate_pavings(A.n, r, budget):
        v = cache.pinch_top(X)
        if best is None or v < best_val - TIE_EPS:
            best, best_val = X, v
    return _report(A, best, best_val, certify and A.n <= 10)


def best_paving_greedy(A: Matrix, r: int, seed: int, max_rounds: int = 10_000) -> PavingReport:
    """Local search over single-index relocations with first improvement.

    The start paving and the scan order of moves are drawn from ``seed``;
    the result is deterministic for a given seed.
    """
    if A.n == 0:
        raise ValueError("empty matrix")
    rng = np.random.default_rng(seed)
    n = A.n
    cache = _BlockCache(A)
    assign = [int(b) for b in rng.integers(0, r, n)]
    moves = [(i, b) for i in range(n) for b in range(r)]
    order = rng.permutation(len(moves))
    moves = [moves[k] for k in order]
    value = cache.pinch_top(Paving(r, assign))
    for _ in range(max_rounds):
        improved = False
        for i, b in moves:
            if assign[i] == b:
                continue
            old = assign[i]
            assign[i] = b
            v = cache.pinch_top(Paving(r, assign))
            if v < value - TIE_EPS:
                value = v
                improved = True
                break
            assign[i] = old
        if not improved:
            break
    return _report(A, Paving(r, assign), value, certify=False)


# ---------------------------------------------------------------------------
# interlacing tree for 2-pavings


@dataclass
class FamilyReport:
    passed: bool
    nodes_checked: int
    root: UniPoly
    first_failure: dict | None = None
    distributions_checked: int = 0
    node_route: str = "leaf-sum"

    def to_json(self) -> dict:
        return {"passed": self.passed, "nodes_checked": self.nodes_checked,
                "distributions_checked": self.distributions_checked,
                "node_route": self.node_route, "root": self.root.to_json(),
                "first_failure": self.first_failure}


def _completion_measure(n: int, prefix: tuple) -> MultilinearPoly:
    """Counting measure on ``[2n]`` over pavings extending ``prefix``.

    Paving ``X`` corresponds to removing index ``c*n + m`` for every ``m``
    whose block is not ``c``; what survives in copy ``c`` is block ``X_c``.
    """
    k = len(prefix)
    coeffs = {}
    for tail in product(range(2), repeat=n - k):
        assign = prefix + tail
        mask = 0
        for m, b in enumerate(assign):
            mask |= 1 << ((1 - b) * n + m)
        coeffs[mask] = 1
    return MultilinearPoly(2 * n, coeffs)


def interlacing_family_check(A: Matrix, r: int = 2, seed: int = 0,
                             distributions: int = 20) -> FamilyReport:
    """Check the binary tree of partial 2-pavings.

    Node ``(S, T)`` with ``S + T = {0..k-1}`` carries
    ``q(S, T) = sum of char_poly(pinch(A, X))`` over pavings that put ``S``
    in block 0 and ``T`` in block 1. At every internal node this checks
    (a) ``q`` equals the sum of its two children, (b) ``q`` is real-rooted,
    (c) the children have a common interlacer; then (d) sampled product
    distributions give real-rooted averages. For ``n <= 4`` the node
    polynomials come from the differential-operator formula on ``A (+) A``,
    otherwise from summing leaves.
    """
    if r != 2:
        raise ValueError("the tree check is for 2-pavings")
    n = A.n
    if n > TREE_LIMIT:
        raise SizeLimitError(f"tree check limited to n <= {TREE_LIMIT}")
    cache = _BlockCache(A)
    leaves = {X.assign: cache.pinch_poly(X) for X in enumerate_pavings(n, 2)}
    nodes: dict[tuple, UniPoly] = dict(leaves)
    route = "leaf-sum"
    if n <= TREE_MULTILINEAR_LIMIT:
        route = "differential-operator"
        f = multilinear_det(blockwise(A, 2))
        for k in range(n):
            for prefix in product(range(2), repeat=k):
                nodes[prefix] = apply_diff_operator(_completion_measure(n, prefix), f)
    else:
        for k in range(n - 1, -1, -1):
            for prefix in product(range(2), repeat=k):
                nodes[prefix] = nodes[prefix + (0,)] + nodes[prefix + (1,)]

    checked = 0
    failure = None
    for k in range(n):
        for prefix in product(range(2), repeat=k):
            q, q0, q1 = nodes[prefix], nodes[prefix + (0,)], nodes[prefix + (1,)]
            checked += 1
            if q != q0 + q1:
                failure = {"node": list(prefix), "check": "sum-of-children"}
            elif not is_real_rooted(q):
                failure = {"node": list(prefix), "check": "real-rooted"}
            elif not has_common_interlacer(q0, q1):
                failure = {"node": list(prefix), "check": "common-interlacer"}
            if failure:
                return FamilyReport(False, checked, nodes[()], failure, 0, route)

    rng = np.random.default_rng(seed)
    exact = A.mode == EXACT
    for t in range(distributions):
        ps = [Fraction(int(v), 1000) if exact else float(v) / 1000 for v in rng.integers(0, 1001, n)]
        q = UniPoly()
        for assign, leaf in leaves.items():
            w = 1
            for i, b in enumerate(assign):
                w = w * (ps[i] if b == 0 else 1 - ps[i])
            q = q + leaf * w
        if not q.is_zero() and not is_real_rooted(q):
            return FamilyReport(False, checked, nodes[()], {"distribution": t, "check": "product-measure"},
                                t, route)
    return FamilyReport(True, checked, nodes[()], None, distributions, route)


def sr_expected_charpoly(A: Matrix, mu: MultilinearPoly) -> UniPoly:
    """``sum_S mu(S) char_poly(A_S)`` via ``mu(d) det(Z - A)`` at ``Z = xI``.

    ``mu`` is a multiaffine generating polynomial or anything with a
    ``generating_polynomial()`` method.
    """
    if hasattr(mu, "generating_polynomial"):
        mu = mu.generating_polynomial()
    if mu.n != A.n:
        raise ValueError("measure and matrix dimensions differ")
    total = 0
    for c in mu.coeffs.values():
        if isinstance(c, complex) or (c < 0):
            raise ValueError("measure weights must be nonnegative reals")
        total = total + c
    if (total != 1) if all(isinstance(c, (int, Fraction)) for c in mu.coeffs.values()) \
            else abs(total - 1) > 1e-12:
        raise ValueError("measure weights must sum to 1")
    return apply_diff_operator(mu, multilinear_det(A))


def blockwise(A: Matrix, r: int) -> Matrix:
    """``A (+) ... (+) A`` with ``r`` copies; copy ``c`` occupies indices ``c*n .. c*n+n-1``."""
    n = A.n
    rows = []
    for c in range(r):
        for i in range(n):
            row = [0] * (r * n)
            for j in range(n):
                row[c * n + j] = A[i, j]
            rows.append(row)
    return Matrix.from_rows(rows, A.mode)
