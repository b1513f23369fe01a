"""Exact arithmetic: rationals, polynomials, rational functions, surds, series."""
from .bipoly import BiPoly
from .errors import AlgebraError, InexactDivision, PoleAtBasePoint, VariableMismatch, ZeroInput
from .poly import UniPoly, poly_from_roots
from .ratfunc import BiRatFunc, RatFunc, differentiate
from .rational import Rational, as_rational, rational_str
from .series import SeriesTruncation, odd_part, series_expand
from .surd import NEG_INF, POS_INF, Infinity, SurdValue, as_point, eval_at_surd, sign_of_surd

__all__ = [
    "AlgebraError", "BiPoly", "BiRatFunc", "InexactDivision", "Infinity", "NEG_INF", "POS_INF",
    "PoleAtBasePoint", "RatFunc", "Rational", "SeriesTruncation", "SurdValue", "UniPoly",
    "VariableMismatch", "ZeroInput", "as_point", "as_rational", "differentiate", "eval_at_surd",
    "odd_part", "poly_from_roots", "rational_str", "series_expand", "sign_of_surd",
]
