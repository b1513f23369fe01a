"""Exact real-root counting with Sturm chains; endpoints may be quadratic surds or infinite."""
from __future__ import annotations

from dataclasses import dataclass, field

import flint

from .algebra import UniPoly
from .algebra.errors import ZeroInput
from .algebra.surd import Infinity, SurdValue, as_point, eval_at_surd, rational_between


@dataclass(frozen=True)
class SturmSequence:
    """Chain p_0, ..., p_m with p_{i-1} = q_i p_i - scales[i] p_{i+1}.

    ``scales`` holds the positive contents stripped from each negated
    remainder (scales[0] is unused and equal to 1).  When the last element
    was nonconstant, every element has been divided by it and
    ``squarefree`` is set; ``raw`` then keeps the undivided chain.
    """

    chain: tuple[UniPoly, ...]
    squarefree: bool
    quotients: tuple[UniPoly, ...] = ()
    scales: tuple[flint.fmpq, ...] = ()
    raw: tuple[UniPoly, ...] = ()

    def __len__(self):
        return len(self.chain)


def sturm_chain(p: UniPoly) -> SturmSequence:
    if p.degree() < 1:
        raise ValueError("Sturm chain needs a polynomial of degree at least 1")
    chain = [p, p.derivative()]
    quotients: list[UniPoly] = []
    scales = [flint.fmpq(1)]
    while True:
        q, r = chain[-2].divmod(chain[-1])
        quotients.append(q)
        if r.is_zero():
            break
        nxt = -r
        c = nxt.content()
        scales.append(c)
        chain.append(nxt / c)
    last = chain[-1]
    if last.degree() > 0:
        reduced = tuple(e.exact_div(last) for e in chain)
        return SturmSequence(reduced, True, tuple(quotients), tuple(scales), tuple(chain))
    return SturmSequence(tuple(chain), False, tuple(quotients), tuple(scales), tuple(chain))


def _sign_at(p: UniPoly, at) -> int:
    if isinstance(at, Infinity):
        return p.sign_at_infinity(at.direction)
    if isinstance(at, SurdValue):
        if at.is_rational():
            v = p(at.a)
            return (v > 0) - (v < 0)
        return eval_at_surd(p, at).sign()
    v = p(at)
    return (v > 0) - (v < 0)


def sign_variations(s: SturmSequence, at) -> int:
    """Sign changes in the chain evaluated at ``at``; zeros are skipped."""
    at = as_point(at)
    changes = 0
    prev = 0
    for e in s.chain:
        sg = _sign_at(e, at)
        if sg == 0:
            continue
        if prev and sg != prev:
            changes += 1
        prev = sg
    return changes


@dataclass(frozen=True)
class EndpointAdjustment:
    """A factor vanishing at an endpoint that was divided out before counting.

    For an irrational endpoint the factor is its quadratic minimal polynomial,
    which also removes the conjugate root; ``conjugate_restored`` records that
    the conjugate lay inside the interval and was added back to the count.
    """

    endpoint: str  # "left" or "right"
    factor: UniPoly
    multiplicity: int
    conjugate_restored: bool = False

    def as_dict(self) -> dict:
        return {"endpoint": self.endpoint, "factor": self.factor.to_str(),
                "multiplicity": self.multiplicity, "conjugate_restored": self.conjugate_restored}


@dataclass(frozen=True)
class RootCount:
    count: int
    interval: tuple
    adjustments: tuple[EndpointAdjustment, ...] = field(default_factory=tuple)
    reduced: UniPoly | None = None


def _check_interval(a, b):
    a, b = as_point(a), as_point(b)
    if not a < b:
        raise ValueError(f"interval endpoints out of order: {a} >= {b}")
    return a, b


def strip_endpoint_roots(p: UniPoly, a, b) -> tuple[UniPoly, list[EndpointAdjustment]]:
    """Divide out factors of p vanishing at finite endpoints (rational minimal polynomials)."""
    adjustments = []
    for name, e in (("left", a), ("right", b)):
        if isinstance(e, Infinity):
            continue
        mult = 0
        factor = e.minimal_polynomial(p.var)
        while p.degree() > 0 and _sign_at(p, e) == 0:
            p = p.exact_div(factor)
            mult += 1
        if mult:
            adjustments.append(EndpointAdjustment(name, factor, mult))
    return p, adjustments


def count_roots(p: UniPoly, a, b) -> RootCount:
    """Number of distinct real roots of p in the open interval (a, b)."""
    if p.is_zero():
        raise ZeroInput("root count of the zero polynomial")
    a, b = _check_interval(a, b)
    reduced, adjustments = strip_endpoint_roots(p, a, b)
    extra = 0
    for i, adj in enumerate(adjustments):
        e = a if adj.endpoint == "left" else b
        if e.is_rational():
            continue
        conj = SurdValue(e.a, -e.b, e.d)
        if a < conj < b and (reduced.degree() < 1 or _sign_at(reduced, conj) != 0):
            extra += 1
            adjustments[i] = EndpointAdjustment(adj.endpoint, adj.factor, adj.multiplicity, True)
    if reduced.degree() < 1:
        return RootCount(extra, (a, b), tuple(adjustments), reduced)
    s = sturm_chain(reduced)
    count = sign_variations(s, a) - sign_variations(s, b) + extra
    return RootCount(count, (a, b), tuple(adjustments), reduced)


def _count_open(chain: SturmSequence, p: UniPoly, lo, hi) -> int:
    """Roots of the square-free p in the open interval (lo, hi).

    V(lo) - V(hi) counts the half-open (lo, hi], also when p(lo) = 0.
    """
    n = sign_variations(chain, lo) - sign_variations(chain, hi)
    if not isinstance(hi, Infinity) and _sign_at(p, hi) == 0:
        n -= 1
    return n


def root_bound(p: UniPoly) -> flint.fmpq:
    """Cauchy bound: every real root has absolute value strictly below it."""
    lc = p.lc()
    m = max((abs(c / lc) for c in p.coeffs[:-1]), default=flint.fmpq(0))
    return 1 + m


def isolate_roots(p: UniPoly, a, b, width=None, max_depth: int = 400) -> list[tuple[flint.fmpq, flint.fmpq]]:
    """Disjoint rational intervals (lo, hi), each holding exactly one root of p in (a, b).

    A root that happens to be a rational bisection point is returned as (r, r).
    With ``width`` given, intervals are refined until hi - lo <= width.
    """
    if p.is_zero():
        raise ZeroInput("root isolation of the zero polynomial")
    a, b = _check_interval(a, b)
    if p.degree() < 1:
        return []
    base = p.squarefree_part()
    chain = sturm_chain(base)
    bound = root_bound(base)
    lo0 = a if not isinstance(a, Infinity) else SurdValue(-bound)
    hi0 = b if not isinstance(b, Infinity) else SurdValue(bound)
    if not lo0 < hi0:
        return []
    if isinstance(width, float):
        from fractions import Fraction

        fw = Fraction(width)
        width = flint.fmpq(fw.numerator, fw.denominator)
    elif width is not None:
        width = flint.fmpq(width)
    results: list[tuple[flint.fmpq, flint.fmpq]] = []
    stack = [(lo0, hi0, _count_open(chain, base, lo0, hi0), 0)]
    while stack:
        lo, hi, c, depth = stack.pop()
        if c == 0:
            continue
        if c == 1 and lo.is_rational() and hi.is_rational():
            if width is None or hi.a - lo.a <= width or depth >= max_depth:
                results.append((lo.a, hi.a))
                continue
        if depth >= max_depth:
            raise RuntimeError("root isolation did not converge")
        m = SurdValue(rational_between(lo, hi))
        at_mid = _sign_at(base, m) == 0
        if at_mid:
            results.append((m.a, m.a))
        c_left = _count_open(chain, base, lo, m)
        c_right = c - c_left - (1 if at_mid else 0)
        stack.append((m, hi, c_right, depth + 1))
        stack.append((lo, m, c_left, depth + 1))
    results.sort(key=lambda t: t[0])
    return results
