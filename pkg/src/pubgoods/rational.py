"""Exact rational parsing and formatting.

All quantities (prices, tolerances, strategies, payoffs) are
:class:`fractions.Fraction` values. Text input accepts ``num/den`` or a bare
integer; decimal and float notation is refused so that nothing inexact can
slip in through a file or the command line.
"""
from __future__ import annotations

import re
from fractions import Fraction

Rational = Fraction

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"3/10"``, ``"-1/2"`` or ``"7"`` into a normalized Fraction."""
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not an exact rational (expected num/den or integer): {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction | int) -> str:
    value = as_rational(value)
    return f"{value.numerator}/{value.denominator}"


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and exact strings; reject floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")
