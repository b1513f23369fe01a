"""Floating-point cross-checks of the exact certificate."""
from .oracle import (
    HighPrecision, OracleError, OracleModel, SimplexCheck, ScanReport, UnsupportedOracleMode,
    discrete_wronskian_scan, divided_difference, model_from_problem, simplex_checks, sign_scan, solve_branch,
)
from .quadrature import Nodes, QuadratureConfig, QuadratureNonConvergence, QuadResult, integrate
