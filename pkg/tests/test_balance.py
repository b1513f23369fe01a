"""Balances, the derivation along the level curve, and curve Wronskians."""
from __future__ import annotations

import functools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcert.algebra import BiPoly, BiRatFunc, RatFunc, UniPoly
from abelcert.criterion import (
    balance_argument, balance_of, derivative_table, derive_along_curve, involution_from_A,
    make_frame, preprocess_family, substitution_plan, wronskian_curve, wronskian_univariate,
)
from abelcert.criterion.balance import collapse_antidiagonal, determinant
from conftest import REFERENCE_PROBLEMS, problem, ratfuncs

QUADRATIC = REFERENCE_PROBLEMS


@functools.lru_cache(maxsize=None)
def setup(name: str, slope: str = "curve"):
    """(frame, balances of the preprocessed family) for a fixture."""
    prob = problem(name)
    H = prob.hamiltonian
    fam, _ = preprocess_family(prob.family, H)
    plan = substitution_plan(H.B, fam.s, H.m)
    curve = involution_from_A(H.A, prob.options.q_hint)
    frame = make_frame(curve, plan, slope=slope, A=H.A)
    ells = [balance_of(balance_argument(f, H.A, plan), frame.vars) for f in fam.f]
    return frame, ells


def _frame_poly_derivative(frame):
    a, b = frame.vars
    return frame.poly.derivative(a) + frame.slope * frame.poly.derivative(b)


@given(ratfuncs())
def test_balance_is_antisymmetric(phi):
    L = balance_of(phi, ("x", "z"))
    assert L.swap() == -L
    assert L.num.restrict("z", UniPoly.gen("x")).is_zero()


@pytest.mark.parametrize("name", QUADRATIC)
def test_curve_slope_annihilates_the_curve(name):
    frame, _ = setup(name, "curve")
    assert _frame_poly_derivative(frame).is_zero()


@pytest.mark.parametrize("name", QUADRATIC)
def test_level_slope_annihilates_the_curve_modulo_q(name):
    frame, _ = setup(name, "level")
    D = _frame_poly_derivative(frame)
    assert D.is_zero() or frame.poly.divides(D.num)


@pytest.mark.parametrize("name", ["ex4_1", "ex4_3", "r11"])
def test_slopes_agree_on_the_curve(name):
    curve_frame, _ = setup(name, "curve")
    level_frame, _ = setup(name, "level")
    diff = curve_frame.slope - level_frame.slope
    assert diff.is_zero() or curve_frame.poly.divides(diff.num)


def test_separated_curve_slope():
    x = RatFunc.gen()
    curve = involution_from_A(x ** 2 / 2)
    assert curve.is_antidiagonal()
    assert curve.sigma_prime == BiRatFunc(BiPoly.constant(-1))


@settings(max_examples=40)
@given(ratfuncs(max_degree=2), ratfuncs(max_degree=2), ratfuncs(max_degree=2), st.integers(-3, 3))
def test_wronskian_is_multilinear_and_alternating(f, g, h, c):
    frame, _ = setup("ex4_1", "curve")
    L = [balance_of(p, frame.vars) for p in (f, g, h)]
    w = lambda cols: wronskian_curve(cols, 2, frame)
    base = w([L[0], L[2]])
    assert w([L[0] + L[1] * c, L[2]]) == base + w([L[1], L[2]]) * c
    assert w([L[2], L[0]]) == -base
    # adding a constant multiple of one column to another leaves it unchanged
    assert w([L[0], L[2] + L[0] * c]) == base


def _sigma_duffing(x: float) -> float:
    # the level partner of x for A = x^2 + x^3 + x^4/4 on the curve (x+1)^2 + (z+1)^2 = 2
    return -1.0 + math.sqrt(2.0 - (x + 1.0) ** 2)


@pytest.mark.parametrize("slope", ["curve", "level"])
def test_derivation_matches_finite_differences(slope):
    frame, ells = setup("ex4_1", slope)
    L = ells[1]
    DL = derive_along_curve(L, frame)
    for x0 in (0.1, 0.25, 0.35):
        step = 1e-6
        fd = (_ell_at(L, x0 + step) - _ell_at(L, x0 - step)) / (2 * step)
        exact = _rat_at(DL, x0, _sigma_duffing(x0))
        assert exact == pytest.approx(fd, rel=1e-6)


def _rat_at(R: BiRatFunc, a: float, b: float) -> float:
    return R.num.eval_float(a, b) / R.den.eval_float(a, b)


def _ell_at(L: BiRatFunc, x: float) -> float:
    return _rat_at(L, x, _sigma_duffing(x))


def test_single_variable_path_matches_univariate_wronskian():
    frame, ells = setup("rlv3", "curve")
    assert frame.single_variable
    collapsed = [collapse_antidiagonal(e) for e in ells]
    for k in (1, 2, 3):
        assert collapse_antidiagonal(wronskian_curve(ells, k, frame)) == wronskian_univariate(collapsed, k)


def test_derivative_table_rows():
    frame, ells = setup("ex4_1", "curve")
    table = derivative_table(ells, 3, frame)
    assert table[0] == ells
    assert table[2][1] == derive_along_curve(derive_along_curve(ells[1], frame), frame)
    assert determinant([[table[0][0]]]) == ells[0]


def test_make_frame_rejects_bad_slopes():
    frame, _ = setup("ex4_1")
    with pytest.raises(ValueError):
        make_frame(frame.curve, frame.plan, slope="tangent")
    with pytest.raises(ValueError):
        make_frame(frame.curve, frame.plan, slope="level")


@pytest.mark.parametrize("name, kind", [("ex4_1", "identity"), ("ex4_2", "radical"), ("ex4_3", "radical"),
                                        ("r11", "radical"), ("rlv3", "identity"), ("r17", "identity")])
def test_substitution_plan_kind(name, kind):
    frame, _ = setup(name)
    assert frame.plan.kind == kind
