"""Exact quadratic irrationals a + b*sqrt(d) and the two infinite points.

Values are normalized so that d is square-free, d = 0 exactly when b = 0,
and d = 1 never survives (it is folded into a).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering

import flint

from .rational import as_rational


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, d) with n = s^2 * d and d square-free (n >= 0)."""
    if n < 0:
        raise ValueError("negative radicand")
    if n in (0, 1):
        return 1, n
    s, d = 1, 1
    for prime, mult in flint.fmpz(n).factor():
        prime = int(prime)
        s *= prime ** (mult // 2)
        if mult % 2:
            d *= prime
    return s, d


def _sign_quadratic(a, b, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for rational a, b and d >= 0."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0) if d else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d
    diff = a * a - b * b * d
    if diff == 0:
        return 0
    return sa if diff > 0 else sb


@total_ordering
@dataclass(frozen=True, eq=False)
class SurdValue:
    """The real number a + b*sqrt(d)."""

    a: flint.fmpq
    b: flint.fmpq = flint.fmpq(0)
    d: int = 0

    def __post_init__(self):
        a, b, d = as_rational(self.a), as_rational(self.b), int(self.d)
        if d < 0:
            raise ValueError("negative radicand")
        if b == 0 or d == 0:
            b, d = flint.fmpq(0), 0
        else:
            s, d = _squarefree_split(d)
            b = b * s
            if d == 1:
                a, b, d = a + b, flint.fmpq(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    # -- constructors -----------------------------------------------------
    @classmethod
    def rational(cls, value) -> "SurdValue":
        return cls(as_rational(value))

    @classmethod
    def sqrt_of(cls, value) -> "SurdValue":
        """Nonnegative square root of a nonnegative rational."""
        r = as_rational(value)
        if r < 0:
            raise ValueError("square root of a negative rational")
        p, q = int(r.p), int(r.q)
        return cls(flint.fmpq(0), flint.fmpq(1, q), p * q)

    # -- predicates -------------------------------------------------------
    def is_rational(self) -> bool:
        return self.d == 0

    def as_rational(self) -> flint.fmpq:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.a

    def sign(self) -> int:
        return _sign_quadratic(self.a, self.b, self.d)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "SurdValue":
        if isinstance(other, SurdValue):
            return other
        return SurdValue(as_rational(other))

    def _common_d(self, other: "SurdValue") -> int:
        if self.d and other.d and self.d != other.d:
            raise ValueError("surds with different radicands do not share a field")
        return self.d or other.d

    def __add__(self, other):
        o = self._coerce(other)
        d = self._common_d(o)
        return SurdValue(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return SurdValue(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._common_d(o)
        return SurdValue(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "SurdValue":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("inverse of zero surd")
        return SurdValue(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = SurdValue(flint.fmpq(1))
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- comparison -------------------------------------------------------
    def compare(self, other) -> int:
        """Exact sign of self - other; radicands may differ."""
        if isinstance(other, Infinity):
            return -other.direction
        o = self._coerce(other)
        if not (self.d and o.d and self.d != o.d):
            return (self - o).sign()
        # sign of S + T, S = (a1 - a2) + b1 sqrt(d1), T = -b2 sqrt(d2)
        s_val = SurdValue(self.a - o.a, self.b, self.d)
        ss = s_val.sign()
        st = -((o.b > 0) - (o.b < 0))
        if ss == 0 or ss == st:
            return st if ss == 0 else ss
        diff = (s_val * s_val - o.b * o.b * o.d).sign()
        if diff == 0:
            return 0
        return ss if diff > 0 else st

    def __eq__(self, other):
        if isinstance(other, Infinity):
            return False
        try:
            return self.compare(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    # -- conversions ------------------------------------------------------
    def __float__(self):
        if self.d == 0:
            return float(self.a)
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def to_mpf(self):
        import mpmath

        a = mpmath.mpf(int(self.a.p)) / int(self.a.q)
        if self.d == 0:
            return a
        return a + mpmath.mpf(int(self.b.p)) / int(self.b.q) * mpmath.sqrt(self.d)

    def minimal_polynomial(self, var: str = "x"):
        """Rational minimal polynomial (monic; degree 1 or 2)."""
        from .poly import UniPoly

        if self.d == 0:
            return UniPoly([-self.a, 1], var)
        return UniPoly([self.a * self.a - self.b * self.b * self.d, -2 * self.a, 1], var)

    def to_str(self) -> str:
        if self.d == 0:
            return str(self.a)
        b = self.b
        mag = -b if b < 0 else b
        if mag.q == 1:
            rad = f"sqrt({self.d})" if mag == 1 else f"{mag.p}*sqrt({self.d})"
        else:
            rad = f"sqrt({self.d})/{mag.q}" if mag.p == 1 else f"{mag.p}*sqrt({self.d})/{mag.q}"
        if self.a == 0:
            return f"-{rad}" if b < 0 else rad
        return f"{self.a} {'-' if b < 0 else '+'} {rad}"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"SurdValue({self.to_str()!r})"


@total_ordering
class Infinity:
    """+infinity or -infinity as an interval endpoint."""

    __slots__ = ("direction",)

    def __init__(self, direction: int):
        self.direction = 1 if direction > 0 else -1

    def compare(self, other) -> int:
        if isinstance(other, Infinity):
            return (self.direction - other.direction) // 2
        return self.direction

    def __eq__(self, other):
        return isinstance(other, Infinity) and other.direction == self.direction

    def __lt__(self, other):
        return self.compare(other) < 0

    def __hash__(self):
        return hash(("inf", self.direction))

    def __neg__(self):
        return Infinity(-self.direction)

    def __float__(self):
        return math.inf * self.direction

    def to_str(self) -> str:
        return "inf" if self.direction > 0 else "-inf"

    __str__ = to_str

    def __repr__(self):
        return f"Infinity({self.direction})"

    def sign(self) -> int:
        return self.direction


POS_INF = Infinity(1)
NEG_INF = Infinity(-1)

Point = SurdValue | Infinity


def as_point(value) -> SurdValue | Infinity:
    if isinstance(value, (SurdValue, Infinity)):
        return value
    return SurdValue(as_rational(value))


def sign_of_surd(v: SurdValue) -> int:
    return v.sign()


def eval_at_surd(p, v: SurdValue) -> SurdValue:
    """Exact value of the polynomial p at v, computed in Q(sqrt(d))."""
    alpha, beta = flint.fmpq(0), flint.fmpq(0)
    a, b, d = v.a, v.b, v.d
    for c in reversed(p.coeffs):
        alpha, beta = alpha * a + beta * b * d + c, alpha * b + beta * a
    return SurdValue(alpha, beta, d)


def rational_between(lo, hi) -> flint.fmpq:
    """A simple rational strictly inside (lo, hi); endpoints may be infinite."""
    if isinstance(lo, Infinity) and isinstance(hi, Infinity):
        return flint.fmpq(0)
    if isinstance(lo, Infinity):
        t = math.floor(float(hi)) - 1
        return flint.fmpq(t)
    if isinstance(hi, Infinity):
        t = math.ceil(float(lo)) + 1
        return flint.fmpq(t)
    if lo.is_rational() and hi.is_rational():
        return (lo.a + hi.a) / 2
    from fractions import Fraction

    width = float(hi) - float(lo)
    mid = Fraction((float(lo) + float(hi)) / 2)
    denom = 1
    while True:
        cand = mid.limit_denominator(denom)
        c = flint.fmpq(cand.numerator, cand.denominator)
        if lo.compare(c) < 0 and hi.compare(c) > 0:
            return c
        if denom > 1 << 60 or width <= 0:
            break
        denom *= 16
    # exact fallback for extremely narrow intervals
    mid_s = (lo + hi) / 2 if lo.d == hi.d or lo.is_rational() or hi.is_rational() else None
    if mid_s is not None and mid_s.is_rational():
        return mid_s.a
    raise ValueError("could not find a rational strictly between the endpoints")
