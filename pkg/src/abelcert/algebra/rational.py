"""Rational numbers.

Coefficients everywhere are ``flint.fmpq`` values: reduced, with a positive
denominator, backed by arbitrary-precision integers.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Integral

import flint

Rational = flint.fmpq
ZERO = flint.fmpq(0)
ONE = flint.fmpq(1)


def as_rational(value) -> flint.fmpq:
    """Convert an exact scalar (int, Fraction, fmpz, fmpq or 'p/q' string)."""
    if isinstance(value, flint.fmpq):
        return value
    if isinstance(value, (bool,)):
        return flint.fmpq(int(value))
    if isinstance(value, (Integral, flint.fmpz)):
        return flint.fmpq(int(value))
    if isinstance(value, Fraction):
        return flint.fmpq(value.numerator, value.denominator)
    if isinstance(value, str):
        f = Fraction(value.strip())
        return flint.fmpq(f.numerator, f.denominator)
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def to_fraction(value: flint.fmpq) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def rational_str(value: flint.fmpq) -> str:
    """Serialize as 'num/den' (always with a denominator)."""
    return f"{int(value.p)}/{int(value.q)}"


def is_integer(value: flint.fmpq) -> bool:
    return int(value.q) == 1


def sign(value) -> int:
    value = as_rational(value)
    return (value > 0) - (value < 0)
