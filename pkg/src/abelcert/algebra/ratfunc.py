"""Rational functions in one or two variables, kept in reduced canonical form.

Canonical form: numerator and denominator coprime, denominator with leading
coefficient 1 (lex order in the bivariate case), all content in the numerator.
"""
from __future__ import annotations

import flint

from .bipoly import BiPoly
from .errors import VariableMismatch
from .poly import UniPoly
from .rational import as_rational


class RatFunc:
    """Univariate rational function num/den."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, var: str | None = None):
        if not isinstance(num, UniPoly):
            num = UniPoly.constant(num, var or (den.var if isinstance(den, UniPoly) else "x"))
        if den is None:
            den = UniPoly.constant(1, num.var)
        elif not isinstance(den, UniPoly):
            den = UniPoly.constant(den, num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        v = _pick_var(num, den, var)
        num, den = num.with_var(v), den.with_var(v)
        if num.is_zero():
            den = UniPoly.constant(1, v)
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc()
            if lc != 1:
                num, den = num / lc, den / lc
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: UniPoly, den: UniPoly) -> "RatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def gen(cls, var: str = "x") -> "RatFunc":
        return cls(UniPoly.gen(var))

    @property
    def var(self) -> str:
        return self.num.var

    def with_var(self, var: str) -> "RatFunc":
        return RatFunc._raw(self.num.with_var(var), self.den.with_var(var))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree() == 0

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant_value(self) -> flint.fmpq:
        if not self.is_constant():
            raise ValueError("not a constant")
        return self.num.coeff(0)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, UniPoly):
            return RatFunc(other)
        try:
            return RatFunc(UniPoly.constant(as_rational(other), self.var))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o / self

    def __pow__(self, e: int):
        if e >= 0:
            return RatFunc._raw(self.num ** e, self.den ** e) if e else RatFunc(1, var=self.var)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RatFunc(self.den ** (-e), self.num ** (-e))

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RatFunc) else other
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- calculus ---------------------------------------------------------
    def derivative(self) -> "RatFunc":
        n, d = self.num, self.den
        return RatFunc(n.derivative() * d - n * d.derivative(), d * d)

    def compose(self, inner: "RatFunc | UniPoly") -> "RatFunc":
        """self(inner(t)) for a polynomial or rational inner function."""
        if isinstance(inner, UniPoly):
            inner = RatFunc(inner)
        num = _compose_homogeneous(self.num, inner, max(self.num.degree(), self.den.degree()))
        den = _compose_homogeneous(self.den, inner, max(self.num.degree(), self.den.degree()))
        return RatFunc(num, den)

    def valuation(self) -> int:
        """Order at 0 (negative for a pole)."""
        return self.num.valuation() - self.den.valuation()

    # -- evaluation -------------------------------------------------------
    def __call__(self, value):
        from .surd import SurdValue

        if isinstance(value, float) or hasattr(value, "dtype"):
            return self.num.eval_float(value) / self.den.eval_float(value)
        if isinstance(value, SurdValue):
            d = self.den(value)
            if d.sign() == 0:
                raise ZeroDivisionError("evaluation at a pole")
            return self.num(value) / d
        v = as_rational(value)
        d = self.den(v)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(v) / d

    def to_str(self) -> str:
        if self.den.degree() == 0:
            return self.num.to_str()
        n = self.num.to_str()
        if len(self.num.coeffs) - list(self.num.coeffs).count(0) > 1:
            n = f"({n})"
        return f"{n}/({self.den.to_str()})"

    __str__ = to_str

    def __repr__(self):
        return f"RatFunc({self.to_str()!r}, var={self.var!r})"


def _compose_homogeneous(p: UniPoly, inner: RatFunc, deg: int) -> UniPoly:
    """den(inner)^deg * p(inner), a polynomial."""
    a, b = inner.num, inner.den
    acc = UniPoly((), a.var)
    coeffs = p.coeffs
    for i, c in enumerate(coeffs):
        if c != 0:
            acc = acc + c * (a ** i) * (b ** (deg - i))
    return acc


def _pick_var(num: UniPoly, den: UniPoly, var: str | None) -> str:
    if var is not None:
        return var
    if num.degree() > 0 and den.degree() > 0 and num.var != den.var:
        raise VariableMismatch(f"{num.var} vs {den.var}")
    if num.degree() > 0:
        return num.var
    return den.var if den.degree() > 0 else num.var


class BiRatFunc:
    """Bivariate rational function num/den over an ordered variable pair."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, vars: tuple[str, str] | None = None):
        if vars is None:
            vars = num.vars if isinstance(num, BiPoly) else (den.vars if isinstance(den, BiPoly) else ("x", "z"))
        vars = tuple(vars)
        num = _as_bipoly(num, vars)
        den = _as_bipoly(1 if den is None else den, vars)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = BiPoly.constant(1, vars)
        else:
            if not den.is_constant():
                g = num.gcd(den)
                if not g.is_constant():
                    num, den = num.exact_div(g), den.exact_div(g)
            lc = den.lc()
            if lc != 1:
                num, den = num / lc, den / lc
        self.num = num
        self.den = den

    @classmethod
    def _raw(cls, num: BiPoly, den: BiPoly) -> "BiRatFunc":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def from_ratfunc(cls, f: RatFunc, vars: tuple[str, str], slot: int | None = None) -> "BiRatFunc":
        """Embed a univariate function as a function of vars[slot]."""
        if slot is None:
            if f.num.degree() <= 0 and f.den.degree() <= 0:
                slot = 0
            elif f.var in vars:
                slot = vars.index(f.var)
            else:
                raise VariableMismatch(f"{f.var} not in {vars}")
        return cls._raw(BiPoly.from_unipoly(f.num, vars, slot), BiPoly.from_unipoly(f.den, vars, slot))

    @property
    def vars(self) -> tuple[str, str]:
        return self.num.vars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, BiRatFunc):
            if other.vars != self.vars:
                raise VariableMismatch(f"{other.vars} vs {self.vars}")
            return other
        if isinstance(other, BiPoly):
            return BiRatFunc._raw(other, BiPoly.constant(1, self.vars))
        if isinstance(other, RatFunc):
            return BiRatFunc.from_ratfunc(other, self.vars)
        try:
            c = as_rational(other)
        except TypeError:
            return None
        return BiRatFunc._raw(BiPoly.constant(c, self.vars), BiPoly.constant(1, self.vars))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return BiRatFunc(self.num + o.num, self.den)
        return BiRatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return BiRatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return BiRatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return BiRatFunc(self.num * o.den, self.den * o.num)

    def __pow__(self, e: int):
        if e >= 0:
            return BiRatFunc._raw(self.num ** e, self.den ** e)
        return BiRatFunc(self.den ** (-e), self.num ** (-e))

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def derivative(self, var: str) -> "BiRatFunc":
        n, d = self.num, self.den
        dn = n.derivative(var)
        dd = d.derivative(var)
        if dd.is_zero():
            return BiRatFunc(dn, d)
        return BiRatFunc(dn * d - n * dd, d * d)

    def swap(self) -> "BiRatFunc":
        return BiRatFunc(self.num.swap(), self.den.swap())

    def restrict(self, var: str, poly: UniPoly) -> RatFunc:
        """Substitute a polynomial in the other variable for var."""
        return RatFunc(self.num.restrict(var, poly), self.den.restrict(var, poly))

    def __call__(self, a, b):
        if isinstance(a, float) or isinstance(b, float) or hasattr(a, "dtype") or hasattr(b, "dtype"):
            return self.num.eval_float(a, b) / self.den.eval_float(a, b)
        d = self.den(a, b)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(a, b) / d

    def to_str(self) -> str:
        if self.den.is_constant():
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"

    __str__ = to_str

    def __repr__(self):
        return f"BiRatFunc({self.to_str()!r}, vars={self.vars!r})"


def _as_bipoly(p, vars) -> BiPoly:
    if isinstance(p, BiPoly):
        if p.vars != vars:
            raise VariableMismatch(f"{p.vars} vs {vars}")
        return p
    if isinstance(p, UniPoly):
        return BiPoly.from_unipoly(p, vars)
    return BiPoly.constant(p, vars)


def differentiate(f, var: str):
    """Exact (partial) derivative of a RatFunc or BiRatFunc."""
    if isinstance(f, RatFunc):
        if f.var != var and not f.is_constant():
            raise VariableMismatch(f"{f} does not depend on {var}")
        return f.derivative()
    if isinstance(f, BiRatFunc):
        return f.derivative(var)
    if isinstance(f, UniPoly):
        return f.derivative()
    if isinstance(f, BiPoly):
        return f.derivative(var)
    raise TypeError(f"cannot differentiate {type(f).__name__}")
