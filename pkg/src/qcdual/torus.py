"""Exact arithmetic on the circle group T = R/Z.

Points are stored as a reduced fraction in the half-open window
(-1/2, 1/2].  The closed arc ``T_+`` is ``{t : |t| <= 1/4}`` and
``T_m`` is ``{t : |t| <= 1/(4m)}``.

>>> add(TorusPoint(Fraction(1, 2)), TorusPoint(Fraction(2, 3)))
TorusPoint('1/6')
>>> in_t_plus(normalize(Fraction(1, 4)))
True
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

__all__ = [
    "TorusPoint",
    "normalize",
    "add",
    "neg",
    "int_mul",
    "torus_abs",
    "in_t_plus",
    "in_t_m",
    "format_rational",
    "parse_rational",
    "ZERO",
]

Rational = Union[int, Fraction]

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


def _reduce(q: Rational) -> Fraction:
    q = Fraction(q)
    r = q - math.floor(q)
    if r > _HALF:
        r -= 1
    return r


class TorusPoint:
    """An element of R/Z held by its representative in (-1/2, 1/2]."""

    __slots__ = ("_value",)

    def __init__(self, value: Rational = 0):
        object.__setattr__(self, "_value", _reduce(value))

    def __setattr__(self, name, value):
        raise AttributeError("TorusPoint is immutable")

    @property
    def value(self) -> Fraction:
        return self._value

    def __eq__(self, other):
        if isinstance(other, TorusPoint):
            return self._value == other._value
        return NotImplemented

    def __hash__(self):
        return hash(("TorusPoint", self._value))

    def __repr__(self):
        return f"TorusPoint({format_rational(self._value)!r})"

    def __str__(self):
        return format_rational(self._value)

    def __add__(self, other):
        if not isinstance(other, TorusPoint):
            return NotImplemented
        return TorusPoint(self._value + other._value)

    def __neg__(self):
        return TorusPoint(-self._value)

    def __sub__(self, other):
        if not isinstance(other, TorusPoint):
            return NotImplemented
        return TorusPoint(self._value - other._value)

    def __rmul__(self, k):
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return TorusPoint(k * self._value)

    def __abs__(self) -> Fraction:
        return abs(self._value)

    def __bool__(self):
        return self._value != 0


ZERO = TorusPoint(0)


def normalize(q: Rational) -> TorusPoint:
    """Canonical representative of ``q mod 1`` in (-1/2, 1/2]."""
    return TorusPoint(q)


def add(a: TorusPoint, b: TorusPoint) -> TorusPoint:
    return a + b


def neg(a: TorusPoint) -> TorusPoint:
    return -a


def int_mul(k: int, a: TorusPoint) -> TorusPoint:
    return TorusPoint(k * a.value)


def torus_abs(a: TorusPoint) -> Fraction:
    """Circle distance from 0, a value in [0, 1/2]."""
    return abs(a.value)


def in_t_plus(a: TorusPoint) -> bool:
    # closed arc: the boundary points +-1/4 belong to T_+
    return abs(a.value) <= _QUARTER


def in_t_m(a: TorusPoint, m: int) -> bool:
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    return 4 * m * abs(a.value) <= 1


def format_rational(q: Rational) -> str:
    """Render an exact rational as ``"p/q"`` (reduced, q > 0)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())
