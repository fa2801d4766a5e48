"""Exact rational and Gaussian-rational arithmetic.

Rationals are plain :class:`fractions.Fraction` values: they are already kept
in lowest terms with the sign on the numerator, so equal values hash equally.
:class:`GaussianRational` adds the imaginary unit on top.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import comb, factorial
from typing import Union

Rational = Fraction
Number = Union[int, Fraction, "GaussianRational"]

__all__ = [
    "Rational",
    "GaussianRational",
    "I",
    "ipow",
    "binomial",
    "factorial",
    "as_gaussian",
    "format_rational",
    "parse_rational",
    "format_number",
    "parse_number",
]


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts.

    Immutable; mixes freely with ``int`` and ``Fraction`` operands.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if norm == 0:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __truediv__(self, other):
        if isinstance(other, GaussianRational):
            return self * other.inverse()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("GaussianRational division by zero")
            return GaussianRational(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = GaussianRational(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def real_value(self) -> Fraction:
        """Return the value as a Fraction; raises if the imaginary part is nonzero."""
        if self.im != 0:
            raise ValueError(f"{self} is not real")
        return self.re

    def __repr__(self):
        return f"GaussianRational({format_number(self)!r})"

    def __str__(self):
        return format_number(self)


I = GaussianRational(0, 1)
_IPOWERS = (GaussianRational(1), I, GaussianRational(-1), GaussianRational(0, -1))


def ipow(n: int) -> GaussianRational:
    """Return ``i**n`` for any integer ``n``."""
    return _IPOWERS[n % 4]


def binomial(n: int, k: int) -> Fraction:
    if n < 0:
        raise ValueError("binomial requires n >= 0")
    if k < 0 or k > n:
        return Fraction(0)
    return Fraction(comb(n, k))


def as_gaussian(x: Number) -> GaussianRational:
    if isinstance(x, GaussianRational):
        return x
    return GaussianRational(x)


# text format ----------------------------------------------------------------

def format_rational(q: int | Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_RAT = r"[+-]?\d+(?:/\d+)?"
_RAT_RE = re.compile(rf"^{_RAT}$")
_GAUSS_RE = re.compile(rf"^(?:(?P<re>{_RAT})(?=[+-]|$))?(?:(?P<im>[+-]?(?:\d+(?:/\d+)?)?)\*?i)?$")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not _RAT_RE.match(text):
        raise ValueError(f"not a rational literal: {text!r}")
    num, _, den = text.partition("/")
    if den and int(den) == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_number(x: Number) -> str:
    """Render ``p/q`` for rationals and ``p/q+r/s*i`` for Gaussian rationals."""
    if not isinstance(x, GaussianRational):
        return format_rational(x)
    if x.im == 0:
        return format_rational(x.re)
    im = format_rational(x.im) + "*i"
    if x.re == 0:
        return im
    sign = "" if x.im < 0 else "+"
    return f"{format_rational(x.re)}{sign}{im}"


def parse_number(text: str) -> Fraction | GaussianRational:
    """Inverse of :func:`format_number`. Real values come back as Fraction.

    Also accepts the shorthand ``i`` / ``-i`` / ``2i`` for the imaginary part.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty number literal")
    if _RAT_RE.match(s):
        return parse_rational(s)
    m = _GAUSS_RE.match(s)
    if not m or m.group("im") is None:
        raise ValueError(f"not a number literal: {text!r}")
    re_part = parse_rational(m.group("re")) if m.group("re") else Fraction(0)
    im_txt = m.group("im")
    if im_txt in ("", "+"):
        im_part = Fraction(1)
    elif im_txt == "-":
        im_part = Fraction(-1)
    else:
        im_part = parse_rational(im_txt)
    if im_part == 0:
        return re_part
    return GaussianRational(re_part, im_part)
