"""Exact Gaussian-rational scalars and helpers shared by exact/float code paths."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational


class GaussianRational:
    """A complex number ``re + im*i`` with :class:`~fractions.Fraction` parts.

    Arithmetic results whose imaginary part vanishes collapse back to plain
    ``Fraction`` values, so real computations never leave the rationals.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def make(re, im=0):
        """Return ``Fraction(re)`` when ``im == 0``, else a GaussianRational."""
        im = Fraction(im)
        if im == 0:
            return Fraction(re)
        return GaussianRational(re, im)

    @staticmethod
    def _parts(other):
        if isinstance(other, GaussianRational):
            return other.re, other.im
        if isinstance(other, (int, Fraction)):
            return Fraction(other), Fraction(0)
        if isinstance(other, Rational):
            return Fraction(other.numerator, other.denominator), Fraction(0)
        return None

    def __add__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) + other if isinstance(other, (float, complex)) else NotImplemented
        return GaussianRational.make(self.re + p[0], self.im + p[1])

    __radd__ = __add__

    def __sub__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) - other if isinstance(other, (float, complex)) else NotImplemented
        return GaussianRational.make(self.re - p[0], self.im - p[1])

    def __rsub__(self, other):
        p = self._parts(other)
        if p is None:
            return other - complex(self) if isinstance(other, (float, complex)) else NotImplemented
        return GaussianRational.make(p[0] - self.re, p[1] - self.im)

    def __mul__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) * other if isinstance(other, (float, complex)) else NotImplemented
        a, b = self.re, self.im
        c, d = p
        return GaussianRational.make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        p = self._parts(other)
        if p is None:
            return complex(self) / other if isinstance(other, (float, complex)) else NotImplemented
        c, d = p
        den = c * c + d * d
        if den == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        a, b = self.re, self.im
        return GaussianRational.make((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        p = self._parts(other)
        if p is None:
            return other / complex(self) if isinstance(other, (float, complex)) else NotImplemented
        return GaussianRational(*p) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = Fraction(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self):
        return GaussianRational.make(self.re, -self.im)

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def __abs__(self):
        return abs(complex(self))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        p = self._parts(other)
        if p is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self.re == p[0] and self.im == p[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, GaussianRational))


def conj(x):
    """Complex conjugate for ints, Fractions, floats, complex and GaussianRational."""
    if isinstance(x, (int, Fraction)):
        return x
    return x.conjugate()


def real_part(x):
    if isinstance(x, (int, Fraction, float)):
        return x
    return x.real


def imag_part(x):
    if isinstance(x, (int, Fraction, float)):
        return 0
    return x.imag


def to_complex(x) -> complex:
    return complex(x)


def as_real(x, tol: float = 0.0):
    """Drop a (numerically) zero imaginary part; raise if it is not zero."""
    if isinstance(x, (int, Fraction, float)):
        return x
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise ValueError(f"expected a real value, got {x}")
        return x.re
    if abs(x.imag) > tol * max(1.0, abs(x.real)):
        raise ValueError(f"expected a real value, got {x}")
    return float(x.real)


def parse_exact(s) -> Fraction:
    """Parse ``"1/2"``, ``"-0.25"``, ``3`` ... into a Fraction."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        return Fraction(s)
    return Fraction(str(s).strip())


def format_exact(x) -> str:
    x = Fraction(x)
    return str(x)
