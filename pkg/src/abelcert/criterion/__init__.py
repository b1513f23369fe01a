"""Balances, involutions, Wronskians and the certification pipelines."""
from .balance import (
    CurveFrame, SubstitutionPlan, balance_argument, balance_ell, balance_of, derivative_table,
    derive_along_curve, discrete_wronskian, make_frame, substitution_plan, wronskian_curve,
    wronskian_univariate,
)
from .certify import (
    CERTIFIED, INCONCLUSIVE, PRECONDITION_FAILED, CertificationReport, KRecord, certify_problem,
    certify_theoremA, certify_theoremB, check_preconditions, eliminate_and_count,
)
from .errors import PreconditionFailed, PujaInapplicable, UnsupportedB
from .involution import InvolutionCurve, involution_from_A, level_cofactor, sigma_prime, split_cofactor
from .preprocess import g_chain, h_multiply, order_condition, preprocess_family, puja_raise
from .problem import CertifyOptions, HamiltonianSpec, IntegrandFamily, Problem, ProjectionInterval
