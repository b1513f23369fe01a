"""Shared strategies, fixture paths and cached certification runs."""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import flint
import pytest
import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from abelcert.algebra import BiPoly, RatFunc, UniPoly

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
DATA = Path(__file__).resolve().parent / "data"

# the eight problems whose certificates the pipeline must reproduce
REFERENCE_PROBLEMS = ("ex4_1", "ex4_2", "ex4_3", "r11", "r7_r14", "r15", "r17", "rlv3")

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

X = sympy.Symbol("x")
Y = sympy.Symbol("y")
Z = sympy.Symbol("z")


def fixture_path(name: str) -> Path:
    return FIXTURES / f"{name}.prob"


@functools.lru_cache(maxsize=None)
def certified(name: str, slope: str = "level"):
    """Certification report of a fixture, computed once per session."""
    import dataclasses

    from abelcert.criterion import certify_problem
    from abelcert.problemfile import load_problem

    problem = load_problem(fixture_path(name))
    return certify_problem(problem, dataclasses.replace(problem.options, slope=slope))


@functools.lru_cache(maxsize=None)
def problem(name: str):
    from abelcert.problemfile import load_problem

    return load_problem(fixture_path(name))


# -- sympy bridges ------------------------------------------------------------

def to_sympy_rational(c) -> sympy.Rational:
    c = flint.fmpq(c)
    return sympy.Rational(int(c.p), int(c.q))


def uni_to_sympy(p: UniPoly, sym=X):
    return sum(to_sympy_rational(c) * sym ** i for i, c in enumerate(p.coeffs))


def rat_to_sympy(f: RatFunc, sym=X):
    return uni_to_sympy(f.num, sym) / uni_to_sympy(f.den, sym)


def bi_to_sympy(p: BiPoly, syms=(X, Z)):
    return sum(to_sympy_rational(c) * syms[0] ** i * syms[1] ** j for (i, j), c in p.terms.items())


def uni_from_sympy(expr, sym=X, var="x") -> UniPoly:
    coeffs = sympy.Poly(sympy.expand(expr), sym).all_coeffs()[::-1]
    return UniPoly([flint.fmpq(int(sympy.Rational(c).p), int(sympy.Rational(c).q)) for c in coeffs], var)


# -- strategies ---------------------------------------------------------------

small_int = st.integers(min_value=-9, max_value=9)
rationals = st.builds(lambda p, q: flint.fmpq(p, q), st.integers(-20, 20), st.integers(1, 6))


@st.composite
def unipolys(draw, max_degree=5, var="x", nonzero=False):
    coeffs = draw(st.lists(rationals, min_size=1, max_size=max_degree + 1))
    p = UniPoly(coeffs, var)
    if nonzero and p.is_zero():
        p = UniPoly([1], var)
    return p


@st.composite
def ratfuncs(draw, max_degree=3, var="x"):
    num = draw(unipolys(max_degree, var))
    den = draw(unipolys(max_degree, var, nonzero=True))
    return RatFunc(num, den, var=var)


@st.composite
def bipolys(draw, max_degree=3, vars=("x", "z"), nonzero=False):
    n = draw(st.integers(0, 6))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, max_degree))
        j = draw(st.integers(0, max_degree))
        terms[(i, j)] = draw(small_int)
    p = BiPoly(terms, vars)
    if nonzero and p.is_zero():
        p = BiPoly({(0, 0): 1}, vars)
    return p


@pytest.fixture
def duffing_A() -> RatFunc:
    x = RatFunc.gen("x")
    return x ** 2 + x ** 3 + x ** 4 / 4


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, title = results[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
