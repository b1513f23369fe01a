"""Truncated power series of rational functions at 0."""
from __future__ import annotations

from dataclasses import dataclass

import flint

from .errors import PoleAtBasePoint
from .ratfunc import RatFunc


@dataclass(frozen=True)
class SeriesTruncation:
    """f(y) mod y^(order+1), as the coefficient list c_0..c_order."""

    coeffs: tuple
    order: int
    base_point: flint.fmpq = flint.fmpq(0)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None


def series_expand(f: RatFunc, order: int) -> SeriesTruncation:
    """Taylor coefficients of f at 0 through degree ``order`` by power-series division."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    den = f.den.coeffs
    if not den or den[0] == 0:
        raise PoleAtBasePoint(f"{f} has a pole at 0")
    num = f.num.coeffs
    inv0 = 1 / den[0]
    out: list[flint.fmpq] = []
    for k in range(order + 1):
        acc = num[k] if k < len(num) else flint.fmpq(0)
        for j in range(1, min(k, len(den) - 1) + 1):
            acc -= den[j] * out[k - j]
        out.append(acc * inv0)
    return SeriesTruncation(tuple(out), order)


def odd_part(f: RatFunc) -> RatFunc:
    """(f(y) - f(-y)) / 2."""
    x = f.var
    neg = RatFunc(f.num.scale_var(-1), f.den.scale_var(-1), var=x)
    return (f - neg) / 2
