"""Tiny formatting helpers shared by trace emission and the CLI."""

from __future__ import annotations

import math
from fractions import Fraction


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_exponent(e) -> str:
    """Render a valuation/exponent; infinities spelled out, None blank."""
    if e is None:
        return ""
    if e == math.inf:
        return "inf"
    if e == -math.inf:
        return "-inf"
    return str(int(e))


def json_exponent(e):
    if e is None:
        return None
    if e == math.inf:
        return "inf"
    if e == -math.inf:
        return "-inf"
    return int(e)
