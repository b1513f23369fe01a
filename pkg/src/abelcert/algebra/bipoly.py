"""Sparse bivariate polynomials over Q, backed by ``flint.fmpq_mpoly``."""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping

import flint

from .errors import InexactDivision, VariableMismatch, ZeroInput
from .poly import UniPoly, format_terms
from .rational import as_rational


@lru_cache(maxsize=None)
def _context(names: tuple[str, str]):
    return flint.fmpq_mpoly_ctx.get(names, "lex")


class BiPoly:
    """Polynomial in an ordered pair of variables; terms map (i, j) -> coefficient."""

    __slots__ = ("_p", "vars")

    def __init__(self, terms: Mapping | None = None, vars: tuple[str, str] = ("x", "z")):
        vars = tuple(vars)
        ctx = _context(vars)
        clean = {}
        for k, v in (terms or {}).items():
            c = as_rational(v)
            if c != 0:
                clean[(int(k[0]), int(k[1]))] = c
        self._p = ctx.from_dict(clean) if clean else ctx.from_dict({})
        self.vars = vars

    @classmethod
    def _wrap(cls, p, vars: tuple[str, str]) -> "BiPoly":
        obj = cls.__new__(cls)
        obj._p = p
        obj.vars = vars
        return obj

    @classmethod
    def gens(cls, vars: tuple[str, str] = ("x", "z")) -> tuple["BiPoly", "BiPoly"]:
        vars = tuple(vars)
        g0, g1 = _context(vars).gens()
        return cls._wrap(g0, vars), cls._wrap(g1, vars)

    @classmethod
    def constant(cls, value, vars: tuple[str, str] = ("x", "z")) -> "BiPoly":
        return cls({(0, 0): value}, vars)

    @classmethod
    def from_unipoly(cls, p: UniPoly, vars: tuple[str, str] = ("x", "z"), slot: int | None = None) -> "BiPoly":
        """Embed p as a polynomial in vars[slot] (slot inferred from p.var)."""
        vars = tuple(vars)
        if slot is None:
            if p.degree() <= 0:
                slot = 0
            elif p.var in vars:
                slot = vars.index(p.var)
            else:
                raise VariableMismatch(f"{p.var} not in {vars}")
        terms = {((i, 0) if slot == 0 else (0, i)): c for i, c in enumerate(p.coeffs) if c != 0}
        return cls(terms, vars)

    # -- data -------------------------------------------------------------
    @property
    def flint(self):
        return self._p

    @property
    def terms(self) -> dict:
        return {tuple(int(e) for e in k): v for k, v in self._p.to_dict().items()}

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def degrees(self) -> tuple[int, int]:
        if self.is_zero():
            return (-1, -1)
        d = self._p.degrees()
        return (int(d[0]), int(d[1]))

    def degree(self, var: str) -> int:
        return self.degrees()[self._slot(var)]

    def total_degree(self) -> int:
        if self.is_zero():
            return -1
        return max(i + j for i, j in self.terms)

    def __len__(self):
        return len(self._p)

    def _slot(self, var: str) -> int:
        if var not in self.vars:
            raise VariableMismatch(f"{var} not in {self.vars}")
        return self.vars.index(var)

    def lc(self) -> flint.fmpq:
        """Leading coefficient in lex order."""
        if self.is_zero():
            return flint.fmpq(0)
        return self._p.leading_coefficient()

    # -- ring operations --------------------------------------------------
    def _other(self, other):
        if isinstance(other, BiPoly):
            if other.vars != self.vars:
                raise VariableMismatch(f"{other.vars} vs {self.vars}")
            return other._p
        if isinstance(other, UniPoly):
            return BiPoly.from_unipoly(other, self.vars)._p
        try:
            c = as_rational(other)
        except TypeError:
            return None
        return _context(self.vars).from_dict({(0, 0): c} if c != 0 else {})

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p + o, self.vars)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p - o, self.vars)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else BiPoly._wrap(o - self._p, self.vars)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is None else BiPoly._wrap(self._p * o, self.vars)

    __rmul__ = __mul__

    def __neg__(self):
        return BiPoly._wrap(-self._p, self.vars)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        return BiPoly._wrap(self._p ** e, self.vars)

    def __truediv__(self, other):
        if isinstance(other, (BiPoly, UniPoly)):
            return self.exact_div(other)
        c = as_rational(other)
        if c == 0:
            raise ZeroDivisionError("division by zero scalar")
        return BiPoly._wrap(self._p / c, self.vars)

    def divmod(self, other: "BiPoly") -> tuple["BiPoly", "BiPoly"]:
        o = self._other(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, o)
        return BiPoly._wrap(q, self.vars), BiPoly._wrap(r, self.vars)

    def exact_div(self, other) -> "BiPoly":
        o = self._other(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, o)
        if not r.is_zero():
            raise InexactDivision("bivariate division leaves a remainder")
        return BiPoly._wrap(q, self.vars)

    def divides(self, other: "BiPoly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return divmod(self._other(other), self._p)[1].is_zero()

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.vars == other.vars and self._p == other._p
        o = self._other(other) if not isinstance(other, UniPoly) else None
        if o is None:
            if isinstance(other, UniPoly):
                return self._p == BiPoly.from_unipoly(other, self.vars)._p
            return NotImplemented
        return self._p == o

    def __hash__(self):
        return hash((self.vars, tuple(sorted(self.terms.items()))))

    def __bool__(self):
        return not self.is_zero()

    # -- structure --------------------------------------------------------
    def derivative(self, var: str) -> "BiPoly":
        self._slot(var)
        return BiPoly._wrap(self._p.derivative(var), self.vars)

    def gcd(self, other: "BiPoly") -> "BiPoly":
        o = self._other(other)
        if self.is_zero() and o.is_zero():
            raise ZeroInput("gcd of two zero polynomials")
        g = BiPoly._wrap(self._p.gcd(o), self.vars)
        return g.normalized()

    def normalized(self) -> "BiPoly":
        """Scaled so that the lex-leading coefficient is 1."""
        if self.is_zero():
            return self
        return BiPoly._wrap(self._p / self.lc(), self.vars)

    def content(self) -> flint.fmpq:
        """Positive rational content (gcd of numerators over lcm of denominators)."""
        if self.is_zero():
            return flint.fmpq(1)
        g = flint.fmpz(0)
        den = flint.fmpz(1)
        for c in self._p.to_dict().values():
            g = g.gcd(c.p)
            den = den.lcm(c.q)
        return flint.fmpq(int(g), int(den))

    def primitive(self) -> "BiPoly":
        return BiPoly._wrap(self._p / self.content(), self.vars)

    def swap(self) -> "BiPoly":
        """f(v1, v0) in the same variable pair: exchanges the roles of the variables."""
        terms = {(j, i): c for (i, j), c in self.terms.items()}
        return BiPoly(terms, self.vars)

    def is_symmetric(self) -> bool:
        return self == self.swap()

    def rename(self, vars: tuple[str, str]) -> "BiPoly":
        return BiPoly(self.terms, tuple(vars))

    def coeffs_in(self, var: str) -> list[UniPoly]:
        """Coefficients as polynomials in the other variable, lowest power of var first."""
        slot = self._slot(var)
        other = self.vars[1 - slot]
        if self.is_zero():
            return []
        deg = self.degree(var)
        buckets: list[dict[int, flint.fmpq]] = [dict() for _ in range(deg + 1)]
        for (i, j), c in self.terms.items():
            e_var, e_other = (i, j) if slot == 0 else (j, i)
            buckets[e_var][e_other] = c
        out = []
        for b in buckets:
            n = max(b) + 1 if b else 0
            out.append(UniPoly([b.get(k, 0) for k in range(n)], other))
        return out

    @classmethod
    def from_coeffs_in(cls, var: str, coeffs: list[UniPoly], vars: tuple[str, str]) -> "BiPoly":
        slot = vars.index(var)
        terms = {}
        for e_var, c in enumerate(coeffs):
            for e_other, v in enumerate(c.coeffs):
                if v != 0:
                    terms[(e_var, e_other) if slot == 0 else (e_other, e_var)] = v
        return cls(terms, vars)

    def to_unipoly(self, var: str | None = None) -> UniPoly:
        """Convert a polynomial that involves at most one of the variables."""
        dx, dz = self.degrees()
        if var is None:
            var = self.vars[1] if dx <= 0 and dz > 0 else self.vars[0]
        slot = self._slot(var)
        if self.degrees()[1 - slot] > 0:
            raise VariableMismatch(f"polynomial depends on {self.vars[1 - slot]}")
        cs = self.coeffs_in(var)
        return UniPoly([c.coeff(0) if not c.is_zero() else 0 for c in cs], var)

    def subs(self, var: str, value) -> UniPoly:
        """Substitute a rational for var; returns a polynomial in the other variable."""
        slot = self._slot(var)
        val = as_rational(value)
        other = self.vars[1 - slot]
        coeffs = self.coeffs_in(other)
        return UniPoly([c(val) if not c.is_zero() else 0 for c in coeffs], other)

    def restrict(self, var: str, poly: UniPoly) -> UniPoly:
        """Substitute a polynomial in the other variable for var (Horner in var)."""
        slot = self._slot(var)
        other = self.vars[1 - slot]
        p = poly.with_var(other)
        acc = UniPoly((), other)
        for c in reversed(self.coeffs_in(var)):
            acc = acc * p + c
        return acc

    def diagonal(self) -> UniPoly:
        """t -> f(t, t), tagged with the first variable."""
        return self.restrict(self.vars[1], UniPoly.gen(self.vars[0]))

    def compose(self, first: "BiPoly", second: "BiPoly") -> "BiPoly":
        """f(first, second) with both arguments in self's ring."""
        return BiPoly._wrap(self._p.compose(first._p, second._p), self.vars)

    def __call__(self, a, b):
        if isinstance(a, float) or isinstance(b, float) or hasattr(a, "dtype") or hasattr(b, "dtype"):
            return self.eval_float(a, b)
        a, b = as_rational(a), as_rational(b)
        acc = flint.fmpq(0)
        for (i, j), c in self.terms.items():
            acc += c * a ** i * b ** j
        return acc

    def eval_float(self, a, b):
        """Nested Horner evaluation in floating point (broadcasts over numpy arrays)."""
        acc = 0.0 * a * b
        for c in reversed(self.coeffs_in(self.vars[1])):
            acc = acc * b + c.eval_float(a)
        return acc

    def to_str(self) -> str:
        return format_terms(list(self.terms.items()), self.vars)

    __str__ = to_str

    def __repr__(self):
        return f"BiPoly({self.to_str()!r}, vars={self.vars!r})"
