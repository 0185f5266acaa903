"""Scalar backends: exact rationals and IEEE doubles behind one small contract.

The exact backend stores every number as a `fractions.Fraction` (arbitrary
precision, canonical lowest terms, positive denominator).  The approximate
backend is the plain Python float.  Higher modules do arithmetic through the
ordinary operators, so both backends are interchangeable wherever an
operation makes sense for each; values are immutable and thread-safe.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, float]


def parse_scalar(text: str) -> Fraction:
    """Parse a "p/r" (or bare integer "p") string into an exact rational."""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a valid rational literal: {text!r}") from exc
    return value


def format_scalar(value: Scalar) -> str:
    """Canonical string form: "p/r" in lowest terms ("/1" omitted), 17 significant
    digits for floats."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return format(float(value), ".17g")


def scalar_pow(a: Scalar, k: int) -> Scalar:
    """a**k for integer k; negative k requires a nonzero base."""
    if k < 0 and a == 0:
        raise ZeroDivisionError("zero base with negative exponent")
    return a ** k


def scalar_cmp(a: Scalar, b: Scalar) -> int:
    """Total order: -1, 0, or 1."""
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def as_float(a: Scalar) -> float:
    return float(a)
