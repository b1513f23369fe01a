"""The involution sigma with A(sigma(x)) = A(x), described by a polynomial q(x, z).

The cofactor C(x, z) = num(A(x) - A(z)) / (x - z) contains every branch of
the level-set correspondence.  A limited splitter peels off factors that are
linear in z with polynomial roots z = rho(x) and quadratic factors with a
square discriminant, then keeps the factor through the origin with slope -1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import flint

from ..algebra import BiPoly, BiRatFunc, RatFunc, UniPoly
from ..algebra.errors import InexactDivision
from .errors import PreconditionFailed


@dataclass(frozen=True)
class InvolutionCurve:
    q: BiPoly
    sigma_prime: BiRatFunc
    origin_certified: bool
    symmetric: bool
    cofactor: BiPoly
    discarded: tuple[BiPoly, ...] = ()
    source: str = "splitter"  # "hint", "splitter" or "cofactor"
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def vars(self) -> tuple[str, str]:
        return self.q.vars

    def is_antidiagonal(self) -> bool:
        """True when q is a multiple of x + z, i.e. sigma = -Id."""
        x, z = BiPoly.gens(self.vars)
        return self.q.degrees() == (1, 1) and len(self.q) == 2 and (x + z).divides(self.q)


def level_cofactor(A: RatFunc, vars: tuple[str, str] = ("x", "z")) -> BiPoly:
    """Primitive part of num(A(x) - A(z)) / (x - z)."""
    N, D = A.num, A.den
    nx = BiPoly.from_unipoly(N.with_var(vars[0]), vars, 0)
    nz = BiPoly.from_unipoly(N.with_var(vars[1]), vars, 1)
    dx = BiPoly.from_unipoly(D.with_var(vars[0]), vars, 0)
    dz = BiPoly.from_unipoly(D.with_var(vars[1]), vars, 1)
    diff = nx * dz - nz * dx
    x, z = BiPoly.gens(vars)
    try:
        c = diff.exact_div(x - z)
    except InexactDivision as exc:  # impossible for a genuine rational function
        raise AssertionError("x - z does not divide A(x) - A(z)") from exc
    return _orient(c.primitive())


def _orient(p: BiPoly) -> BiPoly:
    """Fix the sign: positive z-derivative at the origin when nonzero, else positive lex leading term."""
    dz = p.derivative(p.vars[1])(0, 0)
    if dz < 0 or (dz == 0 and p.lc() < 0):
        return -p
    return p


def origin_conditions(q: BiPoly) -> bool:
    """q(0,0) = 0 and q_x(0,0) = q_z(0,0) != 0, which forces sigma'(0) = -1."""
    if q(0, 0) != 0:
        return False
    qx = q.derivative(q.vars[0])(0, 0)
    qz = q.derivative(q.vars[1])(0, 0)
    return qx == qz and qz != 0


def _rational_roots(p: UniPoly) -> list[flint.fmpq]:
    if p.degree() < 1:
        return []
    _, factors = p.flint.factor()
    roots = []
    for f, _mult in factors:
        if f.degree() == 1:
            c = f.coeffs()
            roots.append(-c[0] / c[1])
    return roots


def _polynomial_z_roots(C: BiPoly) -> list[UniPoly]:
    """Polynomial solutions z = rho(x) of C(x, z) = 0.

    Each rational root z0 of C(x0, z) at a regular base point x0 is lifted
    coefficient by coefficient in powers of (x - x0); each step solves one
    linear equation with the simple-root derivative C_z(x0, z0).  The lifted
    truncation is accepted only if it annihilates C exactly.
    """
    xv, zv = C.vars
    deg_x = C.degree(xv)
    lc_z = C.coeffs_in(zv)[-1]
    found: list[UniPoly] = []
    for x0 in range(0, 40):
        for cand in (flint.fmpq(x0), flint.fmpq(-x0)) if x0 else (flint.fmpq(0),):
            if lc_z(cand) == 0:
                continue
            fiber = C.subs(xv, cand)
            if fiber.degree() < 1 or fiber.gcd(fiber.derivative()).degree() > 0:
                continue
            shift = BiPoly.from_unipoly(UniPoly([cand, 1], xv), C.vars, 0)
            z_gen = BiPoly.gens(C.vars)[1]
            Cs = C.compose(shift, z_gen)  # C(t + x0, z) with t written as x
            dCz = C.derivative(zv)
            for z0 in _rational_roots(fiber):
                slope = dCz(cand, z0)
                rho = UniPoly([z0], xv)
                for k in range(1, deg_x + 1):
                    resid = Cs.restrict(zv, rho)
                    rk = -resid.coeff(k) / slope
                    rho = rho + UniPoly([0] * k + [rk], xv)
                poly = rho.compose(UniPoly([-cand, 1], xv))  # back to x
                if C.restrict(zv, poly).is_zero():
                    found.append(poly)
            return found
    return found


def _integer_sqrt_poly(p: UniPoly) -> UniPoly | None:
    """Exact square root in Q[x], or None."""
    if p.is_zero():
        return p
    lc = p.lc()
    if lc < 0:
        return None
    num, den = int(lc.p), int(lc.q)
    rn, rd = _isqrt(num), _isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    root = UniPoly.constant(flint.fmpq(rn, rd), p.var)
    for f, mult in p.squarefree_decomposition():
        if mult % 2:
            return None
        root = root * f ** (mult // 2)
    return root if root * root == p else None


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def _split_quadratic(R: BiPoly) -> list[BiPoly] | None:
    zv = R.vars[1]
    if R.degree(zv) != 2:
        return None
    c0, c1, c2 = R.coeffs_in(zv)
    disc = c1 * c1 - 4 * c2 * c0
    s = _integer_sqrt_poly(disc)
    if s is None:
        return None
    z = BiPoly.gens(R.vars)[1]
    emb = lambda p: BiPoly.from_unipoly(p, R.vars, 0)
    pieces = []
    for sgn in (1, -1):
        lin = 2 * emb(c2) * z + emb(c1) + sgn * emb(s)
        g = R.gcd(lin)
        if g.degree(zv) == 1:
            pieces.append(_orient(g.primitive()))
    if len(pieces) != 2:
        return None
    rest = R
    for p in pieces:
        rest = rest.exact_div(p)
    if not rest.is_constant():
        return None
    return pieces


def split_cofactor(C: BiPoly) -> list[BiPoly]:
    """Factors of C found by the limited splitter (their product is C up to a constant)."""
    xv, zv = C.vars
    z = BiPoly.gens(C.vars)[1]
    factors: list[BiPoly] = []
    rest = C
    for rho in _polynomial_z_roots(C):
        lin = z - BiPoly.from_unipoly(rho, C.vars, 0)
        while rest.degree(zv) >= 1 and lin.divides(rest):
            rest = rest.exact_div(lin)
            factors.append(_orient(lin))
    if rest.degree(zv) == 2:
        pieces = _split_quadratic(rest)
        if pieces:
            factors.extend(pieces)
            rest = BiPoly.constant(1, C.vars)
    if not rest.is_constant():
        factors.append(_orient(rest.primitive()))
    return factors


def sigma_prime(q: BiPoly) -> BiRatFunc:
    """-q_x / q_z, reduced."""
    xv, zv = q.vars
    qz = q.derivative(zv)
    if qz.is_zero():
        raise PreconditionFailed("q_z is not identically zero", str(q))
    return BiRatFunc(-q.derivative(xv), qz)


def involution_from_A(A: RatFunc, q_hint: BiPoly | None = None,
                      vars: tuple[str, str] = ("x", "z")) -> InvolutionCurve:
    C = level_cofactor(A, vars)
    if q_hint is not None:
        hint = _orient(q_hint.rename(vars).primitive())
        if not hint.divides(C):
            raise PreconditionFailed("q hint divides the level-set cofactor", f"{hint} does not divide {C}")
        if not origin_conditions(hint):
            raise PreconditionFailed("q hint passes through the origin with slope -1", str(hint))
        sym = hint.is_symmetric()
        warns = () if sym else ("q hint is not symmetric in its variables",)
        return InvolutionCurve(hint, sigma_prime(hint), sym, sym, C, (), "hint", warns)
    factors = split_cofactor(C)
    good = [f for f in factors if origin_conditions(f)]
    if len(good) == 1:
        q = good[0]
        others = tuple(f for f in factors if f is not q)
        sym = q.is_symmetric()
        warns = () if sym else (f"selected factor {q} is not symmetric; treated as uncertified",)
        return InvolutionCurve(q, sigma_prime(q), sym, sym, C, others, "splitter", warns)
    if not origin_conditions(C):
        raise PreconditionFailed("the level-set cofactor vanishes at the origin with slope -1", str(C))
    return InvolutionCurve(C, sigma_prime(C), False, C.is_symmetric(), C, (), "cofactor",
                           ("branch extraction failed; using the full cofactor",))
