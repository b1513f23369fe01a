"""Certification pipelines for the quadratic and separated-variables modes."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import flint
import numpy as np

from ..algebra import BiPoly, BiRatFunc, RatFunc, SurdValue, UniPoly
from ..algebra.surd import NEG_INF, Infinity, eval_at_surd
from ..elimination import content_normalize, resultant
from ..realroots import count_roots, isolate_roots
from .balance import (
    CurveFrame, SubstitutionPlan, balance_argument, balance_of, collapse_antidiagonal,
    derivative_table, determinant, make_frame, radical_root_of, substitution_plan,
)
from .errors import PreconditionFailed
from .involution import InvolutionCurve, involution_from_A
from .preprocess import PreprocessStep, g_chain, order_condition, preprocess_family
from .problem import CertifyOptions, HamiltonianSpec, IntegrandFamily, ProjectionInterval

CERTIFIED = "CERTIFIED"
INCONCLUSIVE = "INCONCLUSIVE"
PRECONDITION_FAILED = "PRECONDITION_FAILED"


# -- exact facts ----------------------------------------------------------

def _root_free(p: UniPoly, lo, hi) -> bool:
    if p.is_zero():
        return False
    if p.degree() < 1:
        return True
    return count_roots(p, lo, hi).count == 0


def _nonzero_at(p: UniPoly, point) -> bool:
    if isinstance(point, Infinity):
        return True
    return eval_at_surd(p, point).sign() != 0


class _Facts:
    def __init__(self):
        self.items: list[str] = []

    def require(self, ok: bool, fact: str, detail: str = ""):
        if not ok:
            raise PreconditionFailed(fact, detail)
        self.items.append(fact)


def check_center(F: RatFunc, name: str, var: str, lo, hi, facts: _Facts, multiplicity: int | None = None):
    """F(0) = F'(0) = 0, even order with positive leading coefficient, F' root-free on each side."""
    facts.require(F.den(0) != 0, f"{name} is defined at 0")
    facts.require(not F.num.is_zero() and F.num(0) == 0, f"{name}(0) = 0")
    dF = F.derivative()
    facts.require(dF.num.is_zero() or dF.num(0) == 0, f"{name}'(0) = 0")
    v = F.num.valuation()
    lead = F.num.coeff(v) / F.den(0)
    facts.require(v % 2 == 0 and lead > 0, f"{name} has a minimum of even order at 0",
                  f"order {v}, leading coefficient {lead}")
    if multiplicity is not None:
        facts.require(v == multiplicity, f"{name} vanishes to order exactly {multiplicity} at 0", f"order {v}")
    den_lo = lo if lo is not None else SurdValue(0)
    facts.require(_root_free(F.den, den_lo, hi), f"{name} has no poles on ({den_lo}, {hi})")
    facts.require(_root_free(dF.num, SurdValue(0), hi), f"{name}' has no roots on (0, {hi})")
    if lo is not None:
        facts.require(_root_free(dF.num, lo, SurdValue(0)), f"{name}' has no roots on ({lo}, 0)")


def check_preconditions(H: HamiltonianSpec, fam: IntegrandFamily, interval: ProjectionInterval,
                        plan: SubstitutionPlan | None = None, after_preprocessing: bool = True) -> list[str]:
    """Verify the hypotheses exactly; raises PreconditionFailed naming the first violation."""
    facts = _Facts()
    lo, hi = interval.x_left, interval.x_right
    facts.require(lo < SurdValue(0) < hi, "x_left < 0 < x_right", f"({lo}, {hi})")
    check_center(H.A, "A", "x", lo, hi, facts)
    if H.mode == "quadratic":
        B = H.B
        facts.require(B.den(0) != 0 and B(0) > 0, "B(0) > 0")
        facts.require(_root_free(B.num, lo, hi) and _root_free(B.den, lo, hi),
                      f"B has no roots or poles on ({lo}, {hi})")
        if plan is not None and plan.kind == "radical":
            # x + c > 0 on the open interval; the closed endpoint may touch 0
            facts.require((lo + plan.c).sign() >= 0, "x_left + c >= 0", f"c = {plan.c}")
        if after_preprocessing:
            facts.require(fam.s is not None and fam.s > H.m * (fam.n - 2), "s > m(n-2)",
                          f"s = {fam.s}, m = {H.m}, n = {fam.n}")
    for i, f in enumerate(fam.f):
        facts.require(_root_free(f.den, lo, hi), f"f{i} is defined on ({lo}, {hi})", f"f{i} = {f}")
    return facts.items


# -- per-k elimination ----------------------------------------------------

@dataclass
class KRecord:
    k: int
    suite: str
    status: str  # clean, dirty, degenerate, shared-factor
    path: str  # resultant or single-variable
    wronskian_numerator: BiPoly | UniPoly | None = None
    resultant: UniPoly | None = None
    resultant_content: flint.fmpq | None = None
    sturm_count: int | None = None
    interval: tuple = ()
    adjustments: tuple = ()
    dirty_roots: list = field(default_factory=list)
    branch_filter: list = field(default_factory=list)
    shared_factor: BiPoly | None = None
    curve_used: BiPoly | None = None
    seconds: float = 0.0

    @property
    def clean(self) -> bool:
        return self.status == "clean"


def counting_interval(frame: CurveFrame, right) -> tuple:
    """(0, x_right) or its image under u = (x + c)^(1/r)."""
    plan = frame.plan
    if plan.kind == "identity":
        return SurdValue(0), right
    u0 = frame.base_point
    if isinstance(right, Infinity):
        return u0, right
    ur = radical_root_of(right + plan.c, plan.r)
    if ur is None:
        raise PreconditionFailed("the mapped right endpoint is surd-representable",
                                 f"({right} + {plan.c})^(1/{plan.r})")
    return u0, ur


def genuine_branch_range(frame: CurveFrame, left) -> tuple[float, float]:
    """Float range of the second coordinate on the selected branch."""
    if frame.plan.kind == "identity":
        return float(left), 0.0
    plan = frame.plan
    return (float(left) + float(plan.c)) ** (1.0 / plan.r), float(frame.base_point)


def branch_filter(curve_poly: BiPoly, roots: list, rng: tuple[float, float], tol: float = 1e-10) -> list[dict]:
    """Solve curve(x*, z) = 0 numerically at each isolated root and test the genuine branch."""
    out = []
    other = curve_poly.vars[1]
    coeffs = curve_poly.coeffs_in(other)
    for lo, hi in roots:
        xs = (float(lo) + float(hi)) / 2
        c = [p.eval_float(xs) for p in coeffs]
        while c and abs(c[-1]) == 0:
            c.pop()
        sols = np.roots(list(reversed(c))) if len(c) > 1 else np.array([])
        real = sorted(float(s.real) for s in sols if abs(s.imag) <= 1e-9 * max(1.0, abs(s)))
        on = [s for s in real if rng[0] - tol < s < rng[1] + tol]
        out.append({
            "root_interval": [str(lo), str(hi)],
            "root_approx": xs,
            "real_solutions": real,
            "on_genuine_branch": bool(on),
            "note": "root may be genuine" if on else "roots appear spurious (other branch)",
        })
    return out


def eliminate_and_count(omega: BiRatFunc, frame: CurveFrame, interval: ProjectionInterval,
                        options: CertifyOptions = CertifyOptions(), k: int = 0, suite: str = "main",
                        right=None) -> KRecord:
    t0 = time.perf_counter()
    right = interval.x_right if right is None else right
    left = interval.x_left
    N = omega.num
    lo, hi = counting_interval(frame, right)
    rec = KRecord(k=k, suite=suite, status="clean", path="resultant", wronskian_numerator=N, interval=(lo, hi))
    if N.is_zero():
        rec.status = "degenerate"
        rec.seconds = time.perf_counter() - t0
        return rec
    curve_poly = frame.poly
    if frame.single_variable:
        rec.path = "single-variable"
        # reduce on z = -x first so factors cancelling against the denominator drop out
        r = collapse_antidiagonal(omega).num
        rec.wronskian_numerator = r
    else:
        g = N.gcd(curve_poly)
        if not g.is_constant():
            rec.shared_factor = g
            at_base = eval_at_surd(g.diagonal(), frame.base_point).sign()
            if at_base == 0 or not options.refine_shared_factor:
                rec.status = "shared-factor"
                rec.seconds = time.perf_counter() - t0
                return rec
            curve_poly = curve_poly.exact_div(g)
        rec.curve_used = curve_poly
        r = resultant(N, curve_poly, frame.vars[1], strategy=options.resultant_strategy)
    if r.is_zero():
        rec.status = "degenerate"
        rec.seconds = time.perf_counter() - t0
        return rec
    r_norm, content = content_normalize(r)
    rec.resultant, rec.resultant_content = r_norm, content
    rc = count_roots(r_norm, lo, hi)
    rec.sturm_count = rc.count
    rec.adjustments = rc.adjustments
    if rc.count > 0:
        rec.status = "dirty"
        rec.dirty_roots = isolate_roots(r_norm, lo, hi, width=options.isolate_width)
        if options.numeric_branch_filter and not frame.single_variable:
            rec.branch_filter = branch_filter(curve_poly, rec.dirty_roots, genuine_branch_range(frame, left))
    rec.seconds = time.perf_counter() - t0
    return rec


# -- reports --------------------------------------------------------------

@dataclass
class CertificationReport:
    verdict: str
    mode: str
    preconditions: list[str] = field(default_factory=list)
    failed_precondition: str | None = None
    preprocessing: list[PreprocessStep] = field(default_factory=list)
    family: IntegrandFamily | None = None
    curves: dict = field(default_factory=dict)
    plan: SubstitutionPlan | None = None
    k_records: list[KRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    balances: list[RatFunc] = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    order_condition: bool | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == CERTIFIED


def _precondition_report(mode: str, exc: PreconditionFailed, facts: list[str], **extra) -> CertificationReport:
    rep = CertificationReport(PRECONDITION_FAILED, mode, preconditions=list(facts),
                              failed_precondition=str(exc), **extra)
    return rep


def run_suite(phis: list[RatFunc], curve: InvolutionCurve, plan: SubstitutionPlan, interval: ProjectionInterval,
              options: CertifyOptions, suite: str, right=None, A: RatFunc | None = None
              ) -> tuple[list[KRecord], CurveFrame]:
    """Balances of phis along curve, Wronskians omega_1..omega_n, elimination and counting.

    A is the function whose level sets define the curve; without it the slope is -q_x/q_z.
    """
    slope = options.slope if A is not None else "curve"
    frame = make_frame(curve, plan, slope=slope, A=A)
    ells = [balance_of(p, frame.vars) for p in phis]
    n = len(ells)
    table = derivative_table(ells, n, frame)
    records = []
    for k in range(1, n + 1):
        omega = determinant([[table[i][j] for j in range(k)] for i in range(k)])
        records.append(eliminate_and_count(omega, frame, interval, options, k=k, suite=suite, right=right))
    return records, frame


def _verdict(records: list[KRecord]) -> str:
    return CERTIFIED if all(r.clean for r in records) else INCONCLUSIVE


def certify_theoremB(H: HamiltonianSpec, fam: IntegrandFamily, interval: ProjectionInterval,
                     q_hint: BiPoly | None = None, options: CertifyOptions = CertifyOptions()) -> CertificationReport:
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    mode = "quadratic"
    facts: list[str] = []
    q_hint = q_hint if q_hint is not None else options.q_hint
    try:
        raw_family = IntegrandFamily(fam.f, s=fam.s)
        facts = check_preconditions(H, raw_family, interval, after_preprocessing=False)
        new_fam, trace = preprocess_family(fam, H, options.preprocess)
        plan = substitution_plan(H.B, new_fam.s, H.m)
        facts = check_preconditions(H, new_fam, interval, plan=plan)
        curve = involution_from_A(H.A, q_hint)
    except PreconditionFailed as exc:
        return _precondition_report(mode, exc, facts, timings={"total": time.perf_counter() - t0})
    timings["setup"] = time.perf_counter() - t0
    report = CertificationReport(INCONCLUSIVE, mode, preconditions=facts, preprocessing=trace,
                                 family=new_fam, plan=plan, curves={"sigma": curve})
    report.warnings.extend(curve.warnings)
    phis = [balance_argument(f, H.A, plan) for f in new_fam.f]
    report.balances = phis
    try:
        records, frame = run_suite(phis, curve, plan, interval, options, "main", A=H.A)
    except PreconditionFailed as exc:
        return _precondition_report(mode, exc, facts, timings={"total": time.perf_counter() - t0})
    report.k_records = records
    if frame.single_variable:
        report.notes.append("sigma = -Id: single-variable path, Wronskian numerators counted directly")
    for r in records:
        if r.shared_factor is not None and r.status != "shared-factor":
            report.notes.append(f"k={r.k}: numerator shares {r.shared_factor} with the curve; "
                                "factor does not contain the selected branch and was removed")
    report.verdict = _verdict(records)
    timings["total"] = time.perf_counter() - t0
    report.timings = timings
    return report


def certify_theoremA(Phi: RatFunc, Psi: RatFunc, fam: IntegrandFamily, interval: ProjectionInterval,
                     m: int | None = None, options: CertifyOptions = CertifyOptions(),
                     q_hint_x: BiPoly | None = None, q_hint_y: BiPoly | None = None) -> CertificationReport:
    """Hypotheses (a) on (0, x_right) and (b) on (0, y_right), plus the order condition on g."""
    t0 = time.perf_counter()
    mode = "separated"
    facts = _Facts()
    n = fam.n
    try:
        lo, hi = interval.x_left, interval.x_right
        facts.require(lo < SurdValue(0) < hi, "x_left < 0 < x_right", f"({lo}, {hi})")
        check_center(Phi, "Phi", "x", lo, hi, facts)
        if interval.y_right is None:
            raise PreconditionFailed("y_right is supplied")
        psi_y = Psi.with_var("x")
        v = psi_y.num.valuation()
        m_eff = v // 2 if m is None else m
        y_lo = interval.y_left
        check_center(psi_y, "Psi", "y", y_lo, interval.y_right, facts, multiplicity=2 * m_eff)
        if y_lo is None:
            facts.items.append("Psi' sign on the negative side not checked (y_left not supplied)")
        for i, f in enumerate(fam.f):
            facts.require(_root_free(f.den, lo, hi), f"f{i} is defined on ({lo}, {hi})")
        g = fam.g
        try:
            ok = order_condition(g, m_eff, n)
        except ArithmeticError as exc:
            raise PreconditionFailed("g is analytic at 0", str(exc)) from None
        facts.require(ok, "hypothesis (b) order clause: g(y) - g(-y) = o(y^(2m(n-2)))",
                      f"g = {g}, m = {m_eff}, n = {n}")
        curve_x = involution_from_A(Phi, q_hint_x)
        curve_y = involution_from_A(psi_y, q_hint_y)
    except PreconditionFailed as exc:
        return _precondition_report(mode, exc, facts.items, timings={"total": time.perf_counter() - t0})
    plan = SubstitutionPlan("identity", flint.fmpq(0), weight=RatFunc(1))
    phis_a = [f / Phi.derivative() for f in fam.f]
    chain = [gi.with_var("x") for gi in g_chain(fam.g.with_var("x"), psi_y, n)]
    report = CertificationReport(INCONCLUSIVE, mode, preconditions=facts.items,
                                 family=fam, plan=plan, curves={"sigma1": curve_x, "sigma2": curve_y},
                                 order_condition=True)
    report.warnings.extend(curve_x.warnings + curve_y.warnings)
    report.balances = phis_a + chain
    y_interval = ProjectionInterval(interval.y_left if interval.y_left is not None else NEG_INF,
                                    interval.y_right)
    try:
        rec_a, _ = run_suite(phis_a, curve_x, plan, interval, options, "a", A=Phi)
        rec_b, _ = run_suite(chain, curve_y, plan, y_interval, options, "b", A=psi_y)
    except PreconditionFailed as exc:
        return _precondition_report(mode, exc, facts.items, timings={"total": time.perf_counter() - t0})
    report.k_records = rec_a + rec_b
    report.verdict = _verdict(report.k_records)
    report.timings = {"total": time.perf_counter() - t0}
    return report


def certify_problem(problem, options: CertifyOptions | None = None) -> CertificationReport:
    options = options or problem.options
    H, fam, iv = problem.hamiltonian, problem.family, problem.interval
    if H.mode == "quadratic":
        return certify_theoremB(H, fam, iv, options.q_hint, options)
    return certify_theoremA(H.A, H.Psi, fam, iv, H.m, options, options.q_hint)
