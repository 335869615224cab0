"""Parsing and validation of half-integer moment values."""

from fractions import Fraction


def as_half_integer(value) -> Fraction:
    """Return ``value`` as an exact non-negative half-integer.

    Accepts ints, floats, Fractions and strings such as ``"7.5"`` or ``"15/2"``.

    >>> as_half_integer("15/2") == as_half_integer(7.5)
    True
    """
    if isinstance(value, str):
        value = value.strip()
    try:
        j = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValueError(f"cannot interpret {value!r} as a moment value") from None
    if (2 * j).denominator != 1:
        raise ValueError(f"moment J={value!r} is not a multiple of 1/2")
    if j < 0:
        raise ValueError(f"moment J={value!r} must be non-negative")
    return j


def format_half_integer(j: Fraction) -> str:
    j = Fraction(j)
    return str(j.numerator) if j.denominator == 1 else f"{j.numerator}/{j.denominator}"
