"""Balances, substitution plans and the derivation along the involution curve."""
from __future__ import annotations

from dataclasses import dataclass

import flint

from ..algebra import BiPoly, BiRatFunc, RatFunc, SurdValue, UniPoly
from .errors import PreconditionFailed, UnsupportedB
from .involution import InvolutionCurve, sigma_prime


@dataclass(frozen=True)
class SubstitutionPlan:
    """How B^e enters the balances.

    identity: B^e = const * weight(x) with weight rational.
    radical:  B = beta (x+c)^k with k*e not an integer; u^r = x + c and
              B^e = const * u^u_power.
    """

    kind: str
    exponent_e: flint.fmpq
    c: flint.fmpq = flint.fmpq(0)
    r: int = 1
    u_power: int = 0
    weight: RatFunc | None = None

    def describe(self) -> str:
        if self.kind == "identity":
            w = "1" if self.weight is None else self.weight.to_str()
            return f"identity (B^{self.exponent_e} proportional to {w})"
        return f"radical u^{self.r} = x + {self.c}, B^{self.exponent_e} proportional to u^{self.u_power}"


def _int_root(n: int, k: int) -> int | None:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    r = int(round(n ** (1.0 / k))) if n < 1 << 1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if mid ** k <= n:
                lo = mid
            else:
                hi = mid - 1
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def rational_root(value: flint.fmpq, k: int) -> flint.fmpq | None:
    """Exact positive k-th root of a positive rational, or None."""
    if value <= 0:
        return None
    p, q = _int_root(int(value.p), k), _int_root(int(value.q), k)
    if p is None or q is None:
        return None
    return flint.fmpq(p, q)


def _perfect_power_root(p: UniPoly, k: int) -> UniPoly | None:
    """Monic R with R^k = p for monic p, or None."""
    root = UniPoly.constant(1, p.var)
    for f, mult in p.squarefree_decomposition():
        if mult % k:
            return None
        root = root * f ** (mult // k)
    return root


def _shifted_power(p: UniPoly) -> tuple[flint.fmpq, int] | None:
    """(c, d) with monic p = (x + c)^d, or None."""
    d = p.degree()
    if d <= 0:
        return (flint.fmpq(0), 0)
    c = p.coeff(d - 1) / d
    if UniPoly([c, 1], p.var) ** d == p:
        return (c, d)
    return None


def substitution_plan(B: RatFunc, s: int, m: int) -> SubstitutionPlan:
    e = flint.fmpq(2 * s - 1, 2 * m)
    if B.is_zero():
        raise UnsupportedB("B is not identically zero")
    if B.is_constant():
        return SubstitutionPlan("identity", e, weight=RatFunc(1, var=B.var))
    beta = B.num.lc()
    Nm, Dm = B.num / beta, B.den  # both monic
    sgn = 1 if beta > 0 else -1
    p, q = int(e.p), int(e.q)
    rn, rd = _perfect_power_root(Nm, q), _perfect_power_root(Dm, q)
    if rn is not None and rd is not None and (sgn > 0 or q % 2 == 1):
        R = RatFunc(rn, rd)
        if q % 2 == 1 and sgn < 0:
            R = -R
        try:
            r0 = R(0)
        except ZeroDivisionError:
            r0 = flint.fmpq(1)
        if r0 < 0:
            R = -R
        return SubstitutionPlan("identity", e, weight=R ** p)
    sn, sd = _shifted_power(Nm), _shifted_power(Dm)
    if sn is None or sd is None or sgn < 0:
        raise UnsupportedB("B^e is rational or B = beta*(x+c)^k", f"B = {B}, e = {e}")
    if sn[1] and sd[1] and sn[0] != sd[0]:
        raise UnsupportedB("B^e is rational or B = beta*(x+c)^k", f"B = {B}")
    c = sn[0] if sn[1] else sd[0]
    k = sn[1] - sd[1]
    ke = k * e
    r = int(ke.q)
    if r == 1:
        return SubstitutionPlan("identity", e, weight=RatFunc(UniPoly([c, 1], B.var)) ** int(ke.p))
    return SubstitutionPlan("radical", e, c=c, r=r, u_power=int(ke.p))


def radical_root_of(value: SurdValue, r: int) -> SurdValue | None:
    """Exact r-th root of a rational point as a surd (r = 2 may give sqrt)."""
    if not value.is_rational():
        return None
    v = value.a
    if v < 0:
        return None
    exact = rational_root(v, r) if v > 0 else flint.fmpq(0)
    if exact is not None:
        return SurdValue(exact)
    if r == 2:
        return SurdValue.sqrt_of(v)
    return None


# -- balances -------------------------------------------------------------

def balance_of(phi: RatFunc, vars: tuple[str, str]) -> BiRatFunc:
    """L(x, z) = phi(x) - phi(z)."""
    return BiRatFunc.from_ratfunc(phi, vars, 0) - BiRatFunc.from_ratfunc(phi, vars, 1)


def balance_argument(f: RatFunc, A: RatFunc, plan: SubstitutionPlan) -> RatFunc:
    """phi = f / (A' B^e) in the plan's coordinate (x, or u with x = u^r - c)."""
    base = f / A.derivative()
    if plan.kind == "identity":
        if plan.weight is not None:
            base = base / plan.weight
        return base
    u = UniPoly.gen("u")
    x_of_u = u ** plan.r - plan.c
    phi = base.compose(x_of_u)
    power = RatFunc(UniPoly.gen("u")) ** plan.u_power
    return phi / power


def balance_ell(f: RatFunc, A: RatFunc, B: RatFunc | None, plan: SubstitutionPlan) -> BiRatFunc:
    phi = balance_argument(f, A, plan)
    vars = ("x", "z") if plan.kind == "identity" else ("u", "v")
    return balance_of(phi, vars)


# -- the derivation along the curve -----------------------------------------

@dataclass(frozen=True)
class CurveFrame:
    """Everything the Wronskians need: coordinates, curve polynomial and the derivation d/dx."""

    vars: tuple[str, str]
    poly: BiPoly
    slope: BiRatFunc  # dz/dx (identity) or dv/du (radical), i.e. -poly_1/poly_2
    prefactor: BiRatFunc | None
    plan: SubstitutionPlan
    base_point: SurdValue
    curve: InvolutionCurve

    @property
    def single_variable(self) -> bool:
        return self.plan.kind == "identity" and self.curve.is_antidiagonal()


def level_slope(A: RatFunc, vars: tuple[str, str], plan: SubstitutionPlan) -> BiRatFunc:
    """dz/dx = A'(x)/A'(z) from A(x) = A(z), written in the frame's variables.

    Equal to -q_x/q_z on the curve.  For radical plans it is dv/du, which adds
    the factor u^(r-1)/v^(r-1) from x = u^r - c and z = v^r - c.
    """
    dA = A.derivative()
    if plan.kind == "identity":
        return BiRatFunc.from_ratfunc(dA, vars, 0) / BiRatFunc.from_ratfunc(dA, vars, 1)
    a, b = vars
    sub_u = dA.compose(UniPoly.gen(a) ** plan.r - plan.c)
    sub_v = dA.with_var(b).compose(UniPoly.gen(b) ** plan.r - plan.c)
    u, v = BiPoly.gens(vars)
    ratio = BiRatFunc.from_ratfunc(sub_u, vars, 0) / BiRatFunc.from_ratfunc(sub_v, vars, 1)
    return ratio * BiRatFunc(u ** (plan.r - 1), v ** (plan.r - 1))


def make_frame(curve: InvolutionCurve, plan: SubstitutionPlan, slope: str = "curve",
               A: RatFunc | None = None) -> CurveFrame:
    """slope = "curve" uses -q_x/q_z, slope = "level" uses A'(x)/A'(z) (needs A)."""
    if slope not in ("curve", "level"):
        raise ValueError(f"unknown slope {slope!r}")
    if slope == "level" and A is None:
        raise ValueError("the level slope needs A")
    if plan.kind == "identity":
        sl = curve.sigma_prime if slope == "curve" else level_slope(A, curve.vars, plan)
        return CurveFrame(curve.vars, curve.q, sl, None, plan, SurdValue(0), curve)
    vars = ("u", "v")
    q = curve.q.rename(vars)
    u, v = BiPoly.gens(vars)
    Q = q.compose(u ** plan.r - plan.c, v ** plan.r - plan.c)
    sl = sigma_prime(Q) if slope == "curve" else level_slope(A, vars, plan)
    prefactor = BiRatFunc(BiPoly.constant(1, vars), plan.r * u ** (plan.r - 1))
    u0 = radical_root_of(SurdValue(plan.c), plan.r)
    if u0 is None:
        raise PreconditionFailed("the shift c has a surd-representable r-th root", f"c = {plan.c}, r = {plan.r}")
    return CurveFrame(vars, Q, sl, prefactor, plan, u0, curve)


def derive_along_curve(R: BiRatFunc, frame: CurveFrame) -> BiRatFunc:
    """Total derivative d/dx of R(x, sigma(x)) written in the frame's variables."""
    a, b = frame.vars
    out = R.derivative(a) + frame.slope * R.derivative(b)
    if frame.prefactor is not None:
        out = frame.prefactor * out
    return out


def derivative_table(ells: list[BiRatFunc], depth: int, frame: CurveFrame) -> list[list[BiRatFunc]]:
    """rows[i][j] = D^i ell_j for i < depth."""
    rows = [list(ells)]
    for _ in range(depth - 1):
        rows.append([derive_along_curve(e, frame) for e in rows[-1]])
    return rows


def determinant(matrix):
    """Leibniz expansion over any commutative ring of exact values."""
    k = len(matrix)
    if k == 1:
        return matrix[0][0]
    if k == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    if k == 3:
        m = matrix
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
    total = None
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def wronskian_curve(ells: list[BiRatFunc], k: int, frame: CurveFrame,
                    table: list[list[BiRatFunc]] | None = None) -> BiRatFunc:
    """omega_k = det(D^i ell_j), 0 <= i, j < k."""
    if not 1 <= k <= len(ells):
        raise ValueError(f"k must lie in 1..{len(ells)}")
    table = table or derivative_table(ells[:k], k, frame)
    return determinant([[table[i][j] for j in range(k)] for i in range(k)])


def collapse_antidiagonal(R: BiRatFunc) -> RatFunc:
    """R(x, -x) for sigma = -Id."""
    a, b = R.vars
    return R.restrict(b, -UniPoly.gen(a))


def wronskian_univariate(fs: list[RatFunc], k: int) -> RatFunc:
    """Ordinary Wronskian det(f_j^(i)) of rational functions in one variable."""
    rows = [list(fs[:k])]
    for _ in range(k - 1):
        rows.append([f.derivative() for f in rows[-1]])
    return determinant(rows)


def discrete_wronskian(fs, points):
    """det(f_j(x_i)); exact for exact points, float otherwise."""
    if len(fs) != len(points):
        raise ValueError("need as many points as functions")
    matrix = [[f(p) for f in fs] for p in points]
    if any(isinstance(v, float) for row in matrix for v in row):
        import numpy as np

        return float(np.linalg.det(np.array(matrix, dtype=float)))
    return determinant(matrix)
