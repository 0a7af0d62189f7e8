"""Exact rational helpers: coercion and the "p/q" wire format.

Floats are rejected everywhere; all numbers in this package are exact.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction, or "p/q" string to a Fraction.

    Floats are refused: they would silently destroy exactness.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected int, Fraction, or 'p/q' string, got {type(value).__name__}")


def parse_rational(text: str, path: str = "<value>") -> Fraction:
    """Parse "p/q" or "p" into a Fraction (q > 0 after normalization)."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            return Fraction(int(num), int(den))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(path, f"not a rational: {text!r} ({exc})") from None


def format_rational(value: Fraction) -> str:
    """Render a Fraction as "p/q" (always with the slash, e.g. "2/1")."""
    f = as_fraction(value)
    return f"{f.numerator}/{f.denominator}"
