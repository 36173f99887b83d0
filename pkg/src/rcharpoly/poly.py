"""Univariate and multilinear polynomials.

``UniPoly`` carries characteristic polynomials and their r-analogues and
provides exact real-root analysis (square-free decomposition plus Sturm
sequences over the rationals). ``MultilinearPoly`` stores a polynomial that
has degree at most one in each of ``z_0 .. z_{n-1}``; monomials are keyed by
bitmask. ``TruncatedMultilinear`` is the quotient ring ``z_i**2 = 0`` in which
real powers ``f**r`` of a unit ``f`` are exact finite series.
``MultiPoly`` is a plain sparse multivariate polynomial keyed by exponent
tuples.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .scalars import GaussianRational, is_exact

ROOT_TOL = 1e-12
TIE_TOL = 1e-10


def _is_zero(c) -> bool:
    return c == 0


class UniPoly:
    """Polynomial in one variable ``x`` with ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def from_roots(cls, roots: Iterable, leading=1) -> "UniPoly":
        p = cls([leading])
        for t in roots:
            p = p * cls([-t, 1])
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    @staticmethod
    def _coerce(other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, float, complex, Fraction, GaussianRational)):
            return UniPoly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        m = max(len(a), len(b))
        return UniPoly(
            (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(m)
        )

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, UniPoly):
            a, b = self.coeffs, other.coeffs
            if not a or not b:
                return UniPoly()
            out = [0] * (len(a) + len(b) - 1)
            for i, ai in enumerate(a):
                if _is_zero(ai):
                    continue
                for j, bj in enumerate(b):
                    out[i + j] = out[i + j] + ai * bj
            return UniPoly(out)
        if isinstance(other, (int, float, complex, Fraction, GaussianRational)):
            return UniPoly(c * other for c in self.coeffs)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, UniPoly):
            return NotImplemented
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return UniPoly(c / scalar for c in self.coeffs)

    def __pow__(self, k: int):
        out = UniPoly([1])
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if _is_zero(c):
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"({c})" + ("*" + mono if mono else ""))
        return " + ".join(terms)

    def derivative(self, k: int = 1) -> "UniPoly":
        cs = list(self.coeffs)
        for _ in range(k):
            cs = [i * cs[i] for i in range(1, len(cs))]
        return UniPoly(cs)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.coeffs), default=0)

    def to_float(self) -> "UniPoly":
        return UniPoly(complex(c) if isinstance(c, (complex, GaussianRational)) else float(c)
                       for c in self.coeffs)

    @staticmethod
    def interpolate(nodes: Sequence, values: Sequence) -> "UniPoly":
        """Lagrange interpolation through ``(nodes[k], values[k])``.

        Exact when nodes and values are exact; the Newton divided-difference
        form keeps the work quadratic.
        """
        if len(nodes) != len(values):
            raise ValueError("nodes and values differ in length")
        m = len(nodes)
        dd = list(values)
        for j in range(1, m):
            for i in range(m - 1, j - 1, -1):
                dd[i] = (dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - j])
        p = UniPoly([dd[-1]])
        for i in range(m - 2, -1, -1):
            p = p * UniPoly([-nodes[i], 1]) + dd[i]
        return p

    def to_json(self) -> dict:
        if self.exact:
            return {"coeffs": [str(Fraction(c)) if not isinstance(c, GaussianRational) else str(c)
                               for c in self.coeffs]}
        return {"coeffs": [float(c.real) if isinstance(c, complex) else float(c)
                           for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "UniPoly":
        out = []
        for c in data["coeffs"]:
            out.append(Fraction(c) if isinstance(c, str) else c)
        return cls(out)


# ---------------------------------------------------------------------------
# exact root analysis over Q


def _rationalize(p: UniPoly) -> list[Fraction]:
    out = []
    for c in p.coeffs:
        if isinstance(c, (int, Fraction)):
            out.append(Fraction(c))
        elif isinstance(c, GaussianRational):
            raise ValueError("root analysis needs real coefficients")
        elif isinstance(c, complex):
            if abs(c.imag) > 1e-12 * max(1.0, abs(c.real)):
                raise ValueError("root analysis needs real coefficients")
            out.append(Fraction(float(c.real)))
        else:
            if not math.isfinite(c):
                raise ValueError("non-finite coefficient")
            out.append(Fraction(c))
    return out


def _strip(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _monic(a: list) -> list:
    lc = a[-1]
    return [c / lc for c in a]


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lb = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, bi in enumerate(b):
            a[i + k] -= f * bi
        a.pop()
        _strip(a)
    return _strip(q), a


def _gcd(a: list, b: list) -> list:
    a, b = _strip(list(a)), _strip(list(b))
    while b:
        _, r = _divmod(a, b)
        a, b = b, (_monic(r) if r else r)
    return _monic(a)


def _deriv(a: list) -> list:
    return _strip([i * a[i] for i in range(1, len(a))])


def _sqf_list(f: list) -> list[tuple[list, int]]:
    """Yun's square-free decomposition: ``f = c * prod(g_k**k)``."""
    out = []
    fp = _deriv(f)
    if not fp:
        return out
    a0 = _gcd(f, fp)
    b, _ = _divmod(f, a0)
    c, _ = _divmod(fp, a0)
    d = _strip([ci - di for ci, di in _zip_pad(c, _deriv(b))])
    k = 1
    while len(b) > 1:
        a = _gcd(b, d) if d else _monic(b)
        if len(a) > 1:
            out.append((a, k))
        b, _ = _divmod(b, a)
        c, _ = _divmod(d, a) if d else ([], [])
        d = _strip([ci - di for ci, di in _zip_pad(c, _deriv(b))])
        k += 1
    return out


def _zip_pad(a, b):
    m = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0), (b[i] if i < len(b) else 0)) for i in range(m)]


def _eval(a: list, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _sturm(f: list) -> list[list]:
    seq = [f, _deriv(f)]
    while seq[-1] and len(seq[-1]) > 1:
        _, r = _divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _variations(seq: list[list], x: Fraction) -> int:
    signs = []
    for s in seq:
        v = _eval(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _distinct_real_count(f: list) -> int:
    """Sturm count over the whole line, read off leading coefficients at +-infinity."""
    seq = _sturm(f)
    at_pos = [s[-1] > 0 for s in seq]
    at_neg = [(s[-1] > 0) == (len(s) % 2 == 1) for s in seq]

    def changes(signs):
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    return changes(at_neg) - changes(at_pos)


def _cauchy_bound(f: list) -> Fraction:
    lc = abs(f[-1])
    return 1 + max((abs(c) / lc for c in f[:-1]), default=Fraction(0))


_SPLITS = (Fraction(1, 2), Fraction(499, 997), Fraction(503, 997), Fraction(13, 29), Fraction(16, 29))


def _isolate(f: list) -> list[Fraction | tuple[Fraction, Fraction]]:
    """Isolate the real roots of a square-free ``f``.

    Returns exact rational roots as Fractions and other roots as half-open
    intervals ``(a, b]`` with ``f(a) * f(b) < 0``.
    """
    seq = _sturm(f)
    m = _cauchy_bound(f) + 1
    out = []
    stack = [(-m, m, _variations(seq, -m) - _variations(seq, m))]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            if _eval(f, b) == 0:
                out.append(b)
            else:
                out.append((a, b))
            continue
        for t in _SPLITS:
            mid = a + (b - a) * t
            if _eval(f, mid) != 0:
                break
        vm = _variations(seq, mid)
        stack.append((a, mid, _variations(seq, a) - vm))
        stack.append((mid, b, vm - _variations(seq, b)))
    return out


def _refine(f: list, iv, tol: float = ROOT_TOL) -> float:
    if isinstance(iv, Fraction):
        return float(iv)
    a, b = iv
    sa = _eval(f, a) > 0
    tol_f = Fraction(tol) / 4
    while b - a > tol_f:
        mid = (a + b) / 2
        v = _eval(f, mid)
        if v == 0:
            return float(mid)
        if (v > 0) == sa:
            a = mid
        else:
            b = mid
    return float((a + b) / 2)


def real_roots(p: UniPoly) -> list[tuple[float, int]]:
    """All real roots of ``p`` with multiplicities, ascending.

    Decided exactly over the rationals; float coefficients are converted to
    their exact binary rational values first. Roots are refined to 1e-12.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined roots")
    f = _strip(_rationalize(p))
    out = []
    for g, mult in _sqf_list(f):
        for iv in _isolate(g):
            out.append((_refine(g, iv), mult))
    out.sort()
    return out


def real_root_count(p: UniPoly) -> int:
    """Number of real roots with multiplicity (isolation only, no refinement)."""
    if p.is_zero():
        raise ValueError("zero polynomial has no well-defined roots")
    f = _strip(_rationalize(p))
    return sum(_distinct_real_count(g) * mult for g, mult in _sqf_list(f) if len(g) > 1)


def is_real_rooted(p: UniPoly) -> bool:
    if p.is_zero():
        raise ValueError("zero polynomial")
    return real_root_count(p) == p.degree


def max_root(p: UniPoly) -> float:
    rts = real_roots(p)
    if not rts:
        raise ValueError("polynomial has no real roots")
    return rts[-1][0]


def _expanded_roots(p: UniPoly) -> list[float]:
    if not is_real_rooted(p):
        raise ValueError("polynomial is not real-rooted")
    out = []
    for t, m in real_roots(p):
        out.extend([t] * m)
    return out


def _weakly_sorted(seq: Sequence[float], tol: float) -> bool:
    return all(seq[k] <= seq[k + 1] + tol for k in range(len(seq) - 1))


def interlaces(p: UniPoly, q: UniPoly, tol: float = TIE_TOL) -> bool:
    """True iff the roots of ``q`` weakly interlace those of ``p``.

    ``deg q`` must be ``deg p - 1`` (q's roots sit between p's) or ``deg p``
    (the two root sequences alternate, starting with either polynomial).
    Equal roots are allowed.
    """
    a, b = _expanded_roots(p), _expanded_roots(q)
    if len(b) == len(a) - 1:
        merged = [a[0]]
        for k in range(len(b)):
            merged += [b[k], a[k + 1]]
        return _weakly_sorted(merged, tol)
    if len(b) == len(a):
        first = [v for pair in zip(a, b) for v in pair]
        second = [v for pair in zip(b, a) for v in pair]
        return _weakly_sorted(first, tol) or _weakly_sorted(second, tol)
    raise ValueError("degrees must differ by at most one")


def common_interlacer_grid(p: UniPoly, q: UniPoly, points: int = 101) -> bool:
    """Check real-rootedness of ``a*p + (1-a)*q`` on an evenly spaced grid of ``a``."""
    for k in range(points):
        a = Fraction(k, points - 1)
        c = p * a + q * (1 - a)
        if not is_real_rooted(c):
            return False
    return True


def has_common_interlacer(p: UniPoly, q: UniPoly, cross_check: bool = True,
                          tol: float = TIE_TOL) -> bool:
    """Decide whether two same-degree real-rooted polynomials share an interlacer.

    Uses the sorted-root criterion ``max(a_k, b_k) <= min(a_{k+1}, b_{k+1})``.
    With ``cross_check`` the convex combinations are also sampled; a sample
    that is not real-rooted while the criterion holds raises ``AssertionError``.
    """
    if p.degree != q.degree:
        raise ValueError("degree mismatch")
    if not (_positive(p.leading) and _positive(q.leading)):
        raise ValueError("leading coefficients must be positive")
    a, b = _expanded_roots(p), _expanded_roots(q)
    ok = all(max(a[k], b[k]) <= min(a[k + 1], b[k + 1]) + tol for k in range(len(a) - 1))
    if cross_check and ok and not common_interlacer_grid(p, q):
        raise AssertionError("root criterion and convex-combination grid disagree")
    return ok


def _positive(c) -> bool:
    if isinstance(c, complex):
        return c.real > 0 and abs(c.imag) <= 1e-12 * abs(c.real)
    return c > 0


# ---------------------------------------------------------------------------
# multilinear polynomials


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def indices_of(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def submasks(mask: int):
    """All submasks of ``mask``, including ``mask`` and 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


class MultilinearPoly:
    """Multiaffine polynomial in ``z_0..z_{n-1}``; ``coeffs[mask]`` is the z^S coefficient."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: dict | None = None):
        self.n = n
        full = (1 << n) - 1
        cs = {}
        for m, c in (coeffs or {}).items():
            if m & ~full:
                raise ValueError(f"monomial {m:b} uses a variable outside 0..{n - 1}")
            if not _is_zero(c):
                cs[m] = c
        self.coeffs = cs

    @classmethod
    def from_sets(cls, n: int, items: dict) -> "MultilinearPoly":
        return cls(n, {mask_of(S): c for S, c in items.items()})

    @classmethod
    def one(cls, n: int) -> "MultilinearPoly":
        return cls(n, {0: 1})

    @classmethod
    def variable(cls, n: int, i: int) -> "MultilinearPoly":
        return cls(n, {1 << i: 1})

    def __getitem__(self, S) -> object:
        m = S if isinstance(S, int) else mask_of(S)
        return self.coeffs.get(m, 0)

    def items(self):
        return sorted(self.coeffs.items())

    def _check(self, other):
        if other.n != self.n:
            raise ValueError("variable count mismatch")

    def _wrap(self, coeffs):
        return type(self)(self.n, coeffs)

    def __add__(self, other):
        if not isinstance(other, MultilinearPoly):
            other = self._wrap({0: other})
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out[m] + c if m in out else c
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, MultilinearPoly):
            other = self._wrap({0: other})
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _product(self, other, truncate: bool):
        out: dict = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                if a & b:
                    if truncate:
                        continue
                    raise ValueError("product is not multilinear")
                m = a | b
                v = ca * cb
                out[m] = out[m] + v if m in out else v
        return out

    def __mul__(self, other):
        if isinstance(other, MultilinearPoly):
            self._check(other)
            return self._wrap(self._product(other, truncate=False))
        return self._wrap({m: c * other for m, c in self.coeffs.items()})

    def __rmul__(self, other):
        return self._wrap({m: other * c for m, c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, MultilinearPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self):
        return f"{type(self).__name__}({self.n}, {self.items()!r})"

    def diff(self, i: int) -> "MultilinearPoly":
        bit = 1 << i
        return self._wrap({m & ~bit: c for m, c in self.coeffs.items() if m & bit})

    def diff_set(self, S) -> "MultilinearPoly":
        mask = S if isinstance(S, int) else mask_of(S)
        return self._wrap({m & ~mask: c for m, c in self.coeffs.items() if m & mask == mask})

    def evaluate(self, point: Sequence):
        total = 0
        for m, c in self.coeffs.items():
            term = c
            for i in indices_of(m):
                term = term * point[i]
            total = total + term
        return total

    def max_abs_coeff(self) -> float:
        vals = []
        for c in self.coeffs.values():
            vals.append(c.max_abs_coeff() if isinstance(c, UniPoly) else abs(c))
        return max(vals, default=0)


class TruncatedMultilinear(MultilinearPoly):
    """Element of the ring ``R[z_0..z_{n-1}] / (z_0**2, ..., z_{n-1}**2)``."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, MultilinearPoly):
            self._check(other)
            return self._wrap(self._product_submask(other))
        return self._wrap({m: c * other for m, c in self.coeffs.items()})

    def _product_submask(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) * len(b) <= 3 ** self.n:
            return self._product(other, truncate=True)
        out = {}
        for m in range(1 << self.n):
            acc = None
            for s in submasks(m):
                ca = a.get(s)
                if ca is None:
                    continue
                cb = b.get(m ^ s)
                if cb is None:
                    continue
                acc = ca * cb if acc is None else acc + ca * cb
            if acc is not None:
                out[m] = acc
        return out


def truncated_power(f: TruncatedMultilinear, r, float_tol: float = 1e-12) -> TruncatedMultilinear:
    """``f**r`` in the truncated ring for any real ``r``.

    ``f`` must have constant term 1. With ``g = f - 1`` nilpotent (``g**(n+1) = 0``)
    both ``log(1+g)`` and ``exp(r*log(1+g))`` are finite sums, so the result
    is exact whenever the coefficients and ``r`` are.
    """
    n = f.n
    c0 = f.coeffs.get(0, 0)
    if c0 != 1:
        if isinstance(c0, (float, complex)) and abs(c0 - 1) <= float_tol:
            pass
        else:
            raise ValueError("constant term must be 1")
    if isinstance(r, int):
        r = Fraction(r)
    g = TruncatedMultilinear(n, {m: c for m, c in f.coeffs.items() if m})
    log = TruncatedMultilinear(n)
    power = TruncatedMultilinear.one(n)
    for k in range(1, n + 1):
        power = power * g
        if not power.coeffs:
            break
        sign = 1 if k % 2 else -1
        log = log + power * Fraction(sign, k)
    rl = log * r
    out = TruncatedMultilinear.one(n)
    power = TruncatedMultilinear.one(n)
    for k in range(1, n + 1):
        power = power * rl * Fraction(1, k)
        if not power.coeffs:
            break
        out = out + power
    return out


def apply_diff_operator(P: MultilinearPoly, f: MultilinearPoly):
    """``P(d_0, .., d_{n-1}) f`` evaluated at ``z = 0``.

    For multiaffine ``P`` and ``f`` this is ``sum_S P[S] * f[S]``; when ``f``
    is :func:`rcharpoly.linalg.multilinear_det` (expanded around ``z = xI``)
    the result is a UniPoly in ``x``.
    """
    if P.n != f.n:
        raise ValueError("variable count mismatch")
    total = 0
    for m, c in P.coeffs.items():
        v = f.coeffs.get(m)
        if v is not None:
            total = total + c * v
    if not isinstance(total, UniPoly):
        total = UniPoly([total])
    return total


# ---------------------------------------------------------------------------
# sparse multivariate polynomials


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables keyed by exponent tuples."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if not _is_zero(c)}

    @classmethod
    def constant(cls, nvars: int, c) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def from_multilinear(cls, f: MultilinearPoly) -> "MultiPoly":
        terms = {}
        for m, c in f.coeffs.items():
            terms[tuple((m >> i) & 1 for i in range(f.n))] = c
        return cls(f.n, terms)

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.nvars, other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return MultiPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other: "MultiPoly", max_deg: int | None = None) -> "MultiPoly":
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if max_deg is not None and max(e) > max_deg:
                    continue
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return MultiPoly(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            return self.mul(other)
        return MultiPoly(self.nvars, {e: c * other for e, c in self.terms.items()})

    __rmul__ = __mul__

    def pow(self, k: int, max_deg: int | None = None) -> "MultiPoly":
        out = MultiPoly.constant(self.nvars, 1)
        for _ in range(k):
            out = out.mul(self, max_deg)
        return out

    def diff(self, i: int, k: int = 1) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] < k:
                continue
            f = 1
            for t in range(k):
                f *= e[i] - t
            ne = e[:i] + (e[i] - k,) + e[i + 1:]
            out[ne] = c * f
        return MultiPoly(self.nvars, out)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)
