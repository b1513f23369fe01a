"""Expression and surd parsing: round trips, precedence and error positions."""
from __future__ import annotations

import flint
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from abelcert.algebra import NEG_INF, POS_INF, BiRatFunc, RatFunc, SurdValue, UniPoly
from abelcert.parser import ParseError, parse_endpoint, parse_poly, parse_ratfunc, parse_surd, unparse
from conftest import X, Z, to_sympy_rational


@st.composite
def expressions(draw, depth=3):
    """(text, sympy value) pairs over x and z."""
    if depth == 0 or draw(st.integers(0, 3)) == 0:
        kind = draw(st.sampled_from(["int", "x", "z"]))
        if kind == "int":
            n = draw(st.integers(0, 30))
            return str(n), sympy.Integer(n)
        return kind, {"x": X, "z": Z}[kind]
    op = draw(st.sampled_from(["+", "-", "*", "/", "^", "neg", "paren"]))
    a_text, a_val = draw(expressions(depth - 1))
    if op == "neg":
        return f"-({a_text})", -a_val
    if op == "paren":
        return f"({a_text})", a_val
    if op == "^":
        e = draw(st.integers(-2, 3))
        if e < 0 and a_val == 0:
            e = 2
        return f"({a_text})^{e}" if e >= 0 else f"({a_text})^({e})", a_val ** e
    b_text, b_val = draw(expressions(depth - 1))
    if op == "/" and sympy.simplify(b_val) == 0:
        op = "*"
    value = {"+": a_val + b_val, "-": a_val - b_val, "*": a_val * b_val, "/": a_val / b_val}[op] \
        if op != "/" else a_val / b_val
    return f"({a_text}){op}({b_text})", value


def _bi_to_sympy(R: BiRatFunc):
    def poly(p):
        return sum(to_sympy_rational(c) * X ** i * Z ** j for (i, j), c in p.terms.items())
    return poly(R.num) / poly(R.den)


@settings(max_examples=500)
@given(expressions())
def test_round_trip_against_sympy(case):
    text, value = case
    parsed = parse_ratfunc(text, ("x", "z"))
    assert sympy.simplify(_bi_to_sympy(parsed) - value) == 0
    # the printed form parses back to the same canonical value
    assert parse_ratfunc(unparse(parsed), ("x", "z")) == parsed


def test_precedence_and_associativity():
    x = RatFunc.gen()
    assert parse_ratfunc("-x^2") == -(x ** 2)
    assert parse_ratfunc("2*x^3/4") == x ** 3 / 2
    assert parse_ratfunc("1-2-3") == RatFunc(-4)
    assert parse_ratfunc("8/2/2") == RatFunc(2)
    assert parse_ratfunc("x^(-2)") == 1 / x ** 2
    assert parse_ratfunc("x^-1") == 1 / x
    assert parse_ratfunc("  x  ^ 2 +\t1 ") == x ** 2 + 1


def test_rational_literals_are_exact():
    assert parse_ratfunc("1/3 + 1/6") == RatFunc(flint.fmpq(1, 2))


def test_parse_poly_rejects_denominators():
    assert parse_poly("(x^2-1)/2") == UniPoly([flint.fmpq(-1, 2), 0, flint.fmpq(1, 2)])
    assert parse_poly("(x^2-1)/(x-1)") == UniPoly([1, 1])
    with pytest.raises(ParseError):
        parse_poly("1/x")


@pytest.mark.parametrize("text, position", [
    ("x^2 + * x", 6),
    ("x^2-2*", 6),
    ("(x+1", 4),
    ("x)", 1),
    ("2x", 1),
    ("x**2", 2),
    ("1.5*x", 1),
    ("x^y", 2),
    ("w+1", 0),
    ("x^2^3", 3),
    ("1/0", 1),
    ("", 0),
    ("x # y", 2),
])
def test_error_positions(text, position):
    with pytest.raises(ParseError) as info:
        parse_ratfunc(text)
    assert info.value.position == position
    caret_line = info.value.annotate().splitlines()[-1]
    assert caret_line.index("^") - 2 == position


def test_variable_restriction():
    with pytest.raises(ParseError):
        parse_ratfunc("x + z", ("x",))
    assert parse_ratfunc("y^2/2", ("y",)).var == "y"


def test_surd_literals():
    assert parse_surd("sqrt(2)-1") == SurdValue(-1, 1, 2)
    assert parse_surd("2*sqrt(6)/3") == SurdValue(0, flint.fmpq(2, 3), 6)
    assert parse_surd("sqrt(8)") == 2 * SurdValue.sqrt_of(2)
    assert parse_surd("-1/3") == SurdValue(flint.fmpq(-1, 3))
    assert parse_endpoint("inf") == POS_INF and parse_endpoint("-inf") == NEG_INF
    for bad in ("sqrt(2)+sqrt(3)", "sqrt(-1)", "sqrt(sqrt(2))", "x"):
        with pytest.raises(ParseError):
            parse_surd(bad)
