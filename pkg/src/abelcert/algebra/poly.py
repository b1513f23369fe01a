"""Dense univariate polynomials over Q.

Arithmetic is delegated to ``flint.fmpq_poly``; the wrapper adds a variable
tag, canonical printing and the handful of operations the certifier needs
(content handling, square-free parts, evaluation at quadratic surds).
"""
from __future__ import annotations

from typing import Iterable, Sequence

import flint

from .errors import InexactDivision, VariableMismatch, ZeroInput
from .rational import as_rational


def _lift(value, var: str) -> "UniPoly":
    if isinstance(value, UniPoly):
        if value.var != var and value.degree() > 0:
            raise VariableMismatch(f"{value.var} vs {var}")
        return value
    return UniPoly._wrap(flint.fmpq_poly([as_rational(value)]), var)


class UniPoly:
    """Polynomial in one variable with rational coefficients, lowest degree first."""

    __slots__ = ("_p", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "x"):
        self._p = flint.fmpq_poly([as_rational(c) for c in coeffs])
        self.var = var

    @classmethod
    def _wrap(cls, p: flint.fmpq_poly, var: str) -> "UniPoly":
        obj = cls.__new__(cls)
        obj._p = p
        obj.var = var
        return obj

    @classmethod
    def from_flint(cls, p, var: str = "x") -> "UniPoly":
        return cls._wrap(flint.fmpq_poly(p), var)

    @classmethod
    def gen(cls, var: str = "x") -> "UniPoly":
        return cls._wrap(flint.fmpq_poly([0, 1]), var)

    @classmethod
    def constant(cls, value, var: str = "x") -> "UniPoly":
        return cls._wrap(flint.fmpq_poly([as_rational(value)]), var)

    # -- basic data -------------------------------------------------------
    @property
    def flint(self) -> flint.fmpq_poly:
        return self._p

    @property
    def coeffs(self) -> tuple:
        """Coefficients lowest degree first; empty for the zero polynomial."""
        return tuple(self._p.coeffs())

    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.degree() < 0

    def is_constant(self) -> bool:
        return self._p.degree() <= 0

    def lc(self) -> flint.fmpq:
        if self.is_zero():
            return flint.fmpq(0)
        return self._p.coeffs()[-1]

    def coeff(self, i: int) -> flint.fmpq:
        return self._p[i]

    def valuation(self) -> int:
        """Multiplicity of 0 as a root (the lowest nonzero index)."""
        if self.is_zero():
            raise ZeroInput("valuation of the zero polynomial")
        for i, c in enumerate(self._p.coeffs()):
            if c != 0:
                return i
        raise AssertionError("unreachable")

    def with_var(self, var: str) -> "UniPoly":
        return UniPoly._wrap(self._p, var)

    # -- ring operations --------------------------------------------------
    def _other(self, other) -> flint.fmpq_poly | None:
        try:
            return _lift(other, self.var)._p
        except TypeError:
            return None

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else UniPoly._wrap(self._p + o, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else UniPoly._wrap(self._p - o, self.var)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else UniPoly._wrap(o - self._p, self.var)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else UniPoly._wrap(self._p * o, self.var)

    __rmul__ = __mul__

    def __neg__(self):
        return UniPoly._wrap(-self._p, self.var)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        return UniPoly._wrap(self._p ** e, self.var)

    def __truediv__(self, other):
        """Division by a nonzero scalar, or exact division by a polynomial."""
        if isinstance(other, UniPoly):
            return self.exact_div(other)
        c = as_rational(other)
        if c == 0:
            raise ZeroDivisionError("division by zero scalar")
        return UniPoly._wrap(self._p / c, self.var)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        o = _lift(other, self.var)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, o._p)
        return UniPoly._wrap(q, self.var), UniPoly._wrap(r, self.var)

    def exact_div(self, other: "UniPoly") -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise InexactDivision(f"({self}) / ({other}) leaves remainder {r}")
        return q

    def divides(self, other: "UniPoly") -> bool:
        """True iff self divides other."""
        if self.is_zero():
            return other.is_zero()
        return other.divmod(self)[1].is_zero()

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            if self._p != other._p:
                return False
            return self.var == other.var or self.degree() <= 0
        try:
            return self._p == flint.fmpq_poly([as_rational(other)])
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.var if self.degree() > 0 else None, tuple(self.coeffs)))

    def __bool__(self):
        return not self.is_zero()

    # -- calculus and normalization --------------------------------------
    def derivative(self) -> "UniPoly":
        return UniPoly._wrap(self._p.derivative(), self.var)

    def gcd(self, other: "UniPoly") -> "UniPoly":
        """Monic gcd; raises ZeroInput if both are zero."""
        o = _lift(other, self.var)
        if self.is_zero() and o.is_zero():
            raise ZeroInput("gcd of two zero polynomials")
        return UniPoly._wrap(self._p.gcd(o._p), self.var).monic()

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly._wrap(self._p / self.lc(), self.var)

    def content(self) -> flint.fmpq:
        """Positive rational c with self/c a primitive integer polynomial."""
        if self.is_zero():
            return flint.fmpq(1)
        num = self._p.numer()
        g = flint.fmpz(0)
        for c in num.coeffs():
            g = g.gcd(c)
        return flint.fmpq(int(g), int(self._p.denom()))

    def primitive(self) -> "UniPoly":
        """self divided by its (positive) content: integral, coprime coefficients."""
        return UniPoly._wrap(self._p / self.content(), self.var)

    def squarefree_part(self) -> "UniPoly":
        if self.is_zero():
            raise ZeroInput("square-free part of zero")
        if self.degree() <= 0:
            return UniPoly.constant(1, self.var)
        g = self.gcd(self.derivative())
        return self.exact_div(g).primitive()

    def squarefree_decomposition(self) -> list[tuple["UniPoly", int]]:
        """Yun's algorithm: monic square-free factors with their multiplicities."""
        if self.is_zero():
            raise ZeroInput("square-free decomposition of zero")
        out: list[tuple[UniPoly, int]] = []
        if self.degree() <= 0:
            return out
        f = self.monic()
        d = f.derivative()
        a = f.gcd(d)
        b = f.exact_div(a)
        c = d.exact_div(a)
        e = c - b.derivative()
        i = 1
        while b.degree() > 0:
            g = b.gcd(e)
            if g.degree() > 0:
                out.append((g, i))
            b_next = b.exact_div(g)
            c = e.exact_div(g)
            e = c - b_next.derivative()
            b = b_next
            i += 1
        return out

    def compose(self, inner: "UniPoly") -> "UniPoly":
        """self(inner(t)), carrying inner's variable tag."""
        return UniPoly._wrap(self._p(inner._p), inner.var)

    def shift(self, c) -> "UniPoly":
        """self(x + c)."""
        return UniPoly._wrap(self._p(flint.fmpq_poly([as_rational(c), 1])), self.var)

    def scale_var(self, c) -> "UniPoly":
        """self(c*x)."""
        return UniPoly._wrap(self._p(flint.fmpq_poly([0, as_rational(c)])), self.var)

    # -- evaluation -------------------------------------------------------
    def __call__(self, value):
        from .surd import SurdValue, Infinity, eval_at_surd

        if isinstance(value, SurdValue):
            return eval_at_surd(self, value)
        if isinstance(value, Infinity):
            raise TypeError("use sign_at_infinity for infinite points")
        if isinstance(value, float) or hasattr(value, "dtype"):
            return self.eval_float(value)
        if isinstance(value, UniPoly):
            return self.compose(value)
        return self._p(as_rational(value))

    def eval_float(self, value):
        acc = 0.0 * value
        for c in reversed(self.float_coeffs()):
            acc = acc * value + c
        return acc

    def float_coeffs(self) -> list[float]:
        return [float(c) for c in self._p.coeffs()]

    def sign_at_infinity(self, direction: int = 1) -> int:
        """Sign of self(t) as t -> direction*infinity."""
        if self.is_zero():
            return 0
        s = 1 if self.lc() > 0 else -1
        if direction < 0 and self.degree() % 2 == 1:
            s = -s
        return s

    # -- printing ---------------------------------------------------------
    def to_str(self) -> str:
        """Human and parser-compatible form, highest degree first."""
        return format_terms([((i,), c) for i, c in enumerate(self._p.coeffs())], (self.var,))

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"UniPoly({self.to_str()!r}, var={self.var!r})"


def format_terms(terms: Sequence[tuple[tuple[int, ...], flint.fmpq]], names: Sequence[str]) -> str:
    """Format (exponents, coefficient) pairs in descending term order."""
    items = sorted(((e, c) for e, c in terms if c != 0), key=lambda t: t[0], reverse=True)
    if not items:
        return "0"
    parts: list[str] = []
    for exps, c in items:
        mono = "*".join(
            (n if e == 1 else f"{n}^{e}") for n, e in zip(names, exps) if e > 0
        )
        neg = c < 0
        mag = -c if neg else c
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


def poly_from_roots(roots: Sequence, var: str = "x", lead=1) -> UniPoly:
    p = UniPoly.constant(lead, var)
    x = UniPoly.gen(var)
    for r in roots:
        p = p * (x - as_rational(r))
    return p
