"""Exact rationals extended with a single positive infinity."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union


class Infinity:
    """The value +inf. Absorbs addition and dominates every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (Infinity, ())

    def __hash__(self):
        return hash("submeasure_lab.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if other is self or isinstance(other, (int, Fraction)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __mul__(self, other):
        if other is self:
            return self
        if isinstance(other, (int, Fraction)):
            if other > 0:
                return self
            raise ValueError("INF times a nonpositive rational is undefined")
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and other > 0:
            return self
        raise ValueError("INF divided by a nonpositive or infinite value")


INF = Infinity()

RationalX = Union[Fraction, Infinity]

_RAT = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?$")


def is_inf(v) -> bool:
    return v is INF


def parse_rational(text) -> RationalX:
    """Parse ``"p/q"``, ``"p"``, an int, or ``"inf"``."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    if text.strip().lower() == "inf":
        return INF
    m = _RAT.match(text)
    if not m:
        raise ValueError(f"not a rational: {text!r}")
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(v: RationalX) -> str:
    """Canonical text form: always ``"p/q"`` (so 5 is ``"5/1"``), or ``"inf"``."""
    if v is INF:
        return "inf"
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def as_rational(v) -> RationalX:
    if v is INF:
        return INF
    if isinstance(v, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(v)


def rdiv(a: RationalX, b: RationalX) -> RationalX:
    """a / b for b > 0, with INF / finite = INF and finite / INF = 0."""
    if b is INF:
        if a is INF:
            raise ValueError("INF / INF is undefined")
        return Fraction(0)
    if a is INF:
        return INF
    return Fraction(a) / Fraction(b)
