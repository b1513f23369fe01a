"""Sturm counting and root isolation against polynomials with planted roots."""
from __future__ import annotations

import flint
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from abelcert.algebra import NEG_INF, POS_INF, SurdValue, UniPoly, ZeroInput, poly_from_roots
from abelcert.realroots import count_roots, isolate_roots, root_bound, sign_variations, sturm_chain
from conftest import unipolys

small_rationals = st.builds(lambda p, q: flint.fmpq(p, q), st.integers(-12, 12), st.integers(1, 4))


@st.composite
def planted(draw):
    """(polynomial of degree <= 8, its distinct real roots)."""
    # at most 3 roots of multiplicity <= 2 plus one quadratic keeps the degree in 1..8
    roots = draw(st.lists(small_rationals, min_size=0, max_size=3))
    mults = [draw(st.integers(1, 2)) for _ in roots]
    p = UniPoly([draw(st.integers(1, 5)) * draw(st.sampled_from([1, -1]))])
    for r, k in zip(roots, mults):
        p = p * poly_from_roots([r] * k)
    # a factor without real roots
    if not roots or draw(st.booleans()):
        p = p * UniPoly([draw(st.integers(1, 9)), draw(st.integers(-1, 1)), 1])
    return p, sorted(set(roots))


def increasing(k: int):
    """k distinct sorted rationals."""
    return st.lists(small_rationals, min_size=k, max_size=k, unique=True).map(sorted)


@settings(max_examples=200)
@given(planted(), increasing(2))
def test_count_matches_planted_roots(case, ab):
    p, roots = case
    a, b = ab
    expect = sum(1 for r in roots if a < r < b)
    assert count_roots(p, a, b).count == expect


@settings(max_examples=200)
@given(planted())
def test_count_on_the_whole_line(case):
    p, roots = case
    assert count_roots(p, NEG_INF, POS_INF).count == len(roots)


@settings(max_examples=200)
@given(planted(), increasing(3))
def test_interval_additivity(case, amb):
    p, _ = case
    a, m, b = amb
    at_m = 1 if p(m) == 0 else 0
    assert count_roots(p, a, b).count == count_roots(p, a, m).count + count_roots(p, m, b).count + at_m


@settings(max_examples=200)
@given(unipolys(max_degree=8, nonzero=True))
def test_chain_recurrence_remultiplies(p):
    assume(p.degree() >= 2)
    s = sturm_chain(p)
    raw = s.raw
    for i in range(1, len(raw) - 1):
        assert raw[i - 1] == s.quotients[i - 1] * raw[i] - raw[i + 1] * s.scales[i]
    assert all(c > 0 for c in s.scales)


@settings(max_examples=200)
@given(planted(), increasing(2))
def test_isolation_matches_count(case, ab):
    p, roots = case
    a, b = ab
    boxes = isolate_roots(p, a, b, width=flint.fmpq(1, 64))
    assert len(boxes) == count_roots(p, a, b).count
    inside = [r for r in roots if a < r < b]
    for (lo, hi), r in zip(boxes, inside):
        assert lo <= r <= hi and hi - lo <= flint.fmpq(1, 64)
    for (_, hi), (lo, _) in zip(boxes, boxes[1:]):
        assert hi <= lo


@given(unipolys(max_degree=6, nonzero=True))
def test_root_bound_dominates_roots(p):
    assume(p.degree() >= 1)
    bound = root_bound(p)
    assert count_roots(p, -bound, bound).count == count_roots(p, NEG_INF, POS_INF).count


def test_irrational_endpoint_factor_is_removed():
    r2 = SurdValue.sqrt_of(2)
    p = UniPoly([-2, 0, 1])
    rc = count_roots(p, 0, r2)
    assert rc.count == 0 and rc.adjustments[0].endpoint == "right"
    # the conjugate -sqrt(2) lies inside, so it is counted back
    rc = count_roots(p, -2, r2)
    assert rc.count == 1 and rc.adjustments[0].conjugate_restored


def test_rational_endpoint_roots_are_excluded():
    p = poly_from_roots([0, 1, 2])
    assert count_roots(p, 0, 2).count == 1
    rc = count_roots(p * poly_from_roots([0]), 0, 3)
    assert rc.count == 2 and rc.adjustments[0].multiplicity == 2


def test_surd_interval_counts():
    v = SurdValue.sqrt_of(2) - 1
    assert count_roots(UniPoly([flint.fmpq(-2, 5), 1]), 0, v).count == 1
    assert count_roots(UniPoly([flint.fmpq(-1, 2), 1]), 0, v).count == 0


def test_usage_errors():
    with pytest.raises(ValueError):
        count_roots(UniPoly([-2, 0, 1]), 2, 0)
    with pytest.raises(ZeroInput):
        count_roots(UniPoly([]), 0, 1)
    assert sign_variations(sturm_chain(UniPoly([-2, 0, 1])), 0) == 1
