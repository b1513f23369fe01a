"""Raising the y-power of an integrand: multiplication by h and integration by parts."""
from __future__ import annotations

from dataclasses import dataclass

from ..algebra import RatFunc, series_expand
from ..algebra.series import odd_part
from .errors import PreconditionFailed, PujaInapplicable
from .problem import HamiltonianSpec, IntegrandFamily


def puja_raise(F: RatFunc, A: RatFunc, B: RatFunc, k: int) -> RatFunc:
    """G with  oint F y^(k-2) dx = oint G y^k dx  on the ovals of A + B y^2.

    G = (2/k) (B F / A')' - B' F / A'.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if F.is_zero():
        return RatFunc(0, var=A.var)
    ratio = F / A.derivative()
    if ratio.valuation() < 0:
        raise PujaInapplicable("F/A' is analytic at 0", f"F = {F}")
    return (B * ratio).derivative() * RatFunc(2, var=A.var) / k - B.derivative() * ratio


def h_multiply(f: RatFunc, A: RatFunc, B: RatFunc, s: int, m: int) -> list[tuple[RatFunc, int]]:
    """h * oint f y^(2s-1) = oint (A f) y^(2s-1) + oint (B f) y^(2(s+m)-1)."""
    return [(A * f, s), (B * f, s + m)]


@dataclass(frozen=True)
class PreprocessStep:
    round: int
    s_before: int
    s_after: int
    f_after: tuple[RatFunc, ...]

    def as_dict(self) -> dict:
        return {
            "round": self.round,
            "operation": "h_multiply + puja_raise",
            "s_before": self.s_before,
            "s_after": self.s_after,
            "f": [f.to_str() for f in self.f_after],
        }


def raise_once(f: RatFunc, A: RatFunc, B: RatFunc, s: int) -> RatFunc:
    """One round for m = 1: the integrand multiplying y^(2s+1) that equals h * oint f y^(2s-1)."""
    (fa, _), (fb, _) = h_multiply(f, A, B, s, 1)
    return puja_raise(fa, A, B, 2 * s + 1) + fb


def preprocess_family(fam: IntegrandFamily, H: HamiltonianSpec, mode: str = "auto"
                      ) -> tuple[IntegrandFamily, list[PreprocessStep]]:
    if H.mode != "quadratic":
        raise ValueError("preprocessing applies to the quadratic mode")
    s, m, n = fam.s, H.m, fam.n
    trace: list[PreprocessStep] = []
    if s > m * (n - 2):
        return fam, trace
    if mode == "none":
        raise PreconditionFailed("s > m(n-2)", f"s = {s}, m = {m}, n = {n}, preprocessing disabled")
    if m != 1:
        raise PreconditionFailed("s > m(n-2)", f"s = {s}, m = {m}; raising needs m = 1")
    fs = tuple(fam.f)
    rnd = 0
    while s <= m * (n - 2):
        rnd += 1
        fs = tuple(raise_once(f, H.A, H.B, s) for f in fs)
        trace.append(PreprocessStep(rnd, s, s + 1, fs))
        s += 1
    return IntegrandFamily(fs, s=s), trace


def g_chain(g: RatFunc, Psi: RatFunc, n: int) -> list[RatFunc]:
    """g_0 = g, g_{i+1} = g_i' / Psi'."""
    dpsi = Psi.derivative()
    if dpsi.is_zero():
        raise ValueError("Psi' vanishes identically")
    chain = [g]
    for _ in range(n - 1):
        chain.append(chain[-1].derivative() / dpsi)
    return chain


def order_condition(g: RatFunc, m: int, n: int) -> bool:
    """True iff the odd part of g vanishes at 0 to order > 2m(n-2)."""
    bound = 2 * m * (n - 2)
    if bound < 0:
        return True
    ser = series_expand(odd_part(g), bound)
    return ser.valuation() is None
