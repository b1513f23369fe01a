"""Floating-point model of the Abelian integrals and their Wronskians.

Conventions.  The oval {A(x) + B(x) y^(2m) = h} is written with
v^(2m) / (2m) = B(x) y^(2m), so v = (2m (h - A(x)))^(1/(2m)) and

    f(x) y^(2s-1) dx = fhat(x) v^(2s-1) dx,   fhat = f (2m B)^(-e),  e = (2s-1)/(2m).

Integrals carry the area-positive sign: I(h) = 2 int_{x-}^{x+} fhat v^(2s-1) dx.
Derivatives in h use the half-oval form

    I^(k)(h) = int_0^{x+} lhat(x) xi_k(v(x)) dx,   lhat = fhat - fhat(sigma) sigma',
    xi_k(v) = 2 c_k v^(2(s-km)-1),   c_0 = 1,  c_{k+1} = c_k (2(s-km)-1).

h - A(x) is always evaluated as (distance to the turning point) times the
divided difference of A, so no cancellation occurs near the singular ends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from ..algebra import BiRatFunc, RatFunc
from ..algebra.surd import Infinity
from ..criterion.involution import InvolutionCurve, involution_from_A
from ..criterion.problem import HamiltonianSpec, IntegrandFamily, ProjectionInterval
from .quadrature import Nodes, QuadratureConfig, fixed_rule, integrate, reference_nodes


class OracleError(ArithmeticError):
    pass


class UnsupportedOracleMode(OracleError):
    pass


EPS = float(np.finfo(float).eps)
SIMPLEX_LEVELS = {1: 6, 2: 5, 3: 3}


# -- float helpers -----------------------------------------------------------

def _rf(f: RatFunc, x):
    return f.num.eval_float(x) / f.den.eval_float(x)


def _limit_at_infinity(f: RatFunc) -> float:
    dn, dd = f.num.degree(), f.den.degree()
    if f.is_zero():
        return 0.0
    if dn < dd:
        return 0.0
    if dn == dd:
        return float(f.num.lc() / f.den.lc())
    return math.inf if f.num.lc() / f.den.lc() > 0 else -math.inf


def divided_difference(A: RatFunc) -> BiRatFunc:
    """(A(x) - A(z)) / (x - z) as an exact rational function."""
    vars = ("x", "z")
    X = BiRatFunc.from_ratfunc(A, vars, 0)
    Z = BiRatFunc.from_ratfunc(A, vars, 1)
    diff = X - Z
    from ..algebra import BiPoly

    x, z = BiPoly.gens(vars)
    return BiRatFunc(diff.num.exact_div(x - z), diff.den)


def solve_branch(A: RatFunc, h: float, side: str, bracket: tuple[float, float],
                 tol: float = 1e-14) -> float:
    """Turning point x with A(x) = h on a bracket where A is monotone: bisection, then Newton."""
    lo, hi = float(bracket[0]), float(bracket[1])
    if side not in ("left", "right"):
        raise ValueError("side must be left or right")
    g_lo, g_hi = _rf(A, lo) - h, _rf(A, hi) - h
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if np.sign(g_lo) == np.sign(g_hi):
        raise OracleError(f"no sign change of A - h on [{lo}, {hi}] for h = {h}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = _rf(A, mid) - h
        if g_mid == 0:
            return mid
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    dA = A.derivative()
    for _ in range(4):
        d = _rf(dA, x)
        if d == 0:
            break
        x_new = x - (_rf(A, x) - h) / d
        if not (min(bracket) <= x_new <= max(bracket)):
            break
        x = x_new
    if abs(_rf(A, x) - h) > max(tol * max(1.0, abs(h)), 64 * EPS * max(1.0, abs(h))):
        raise OracleError(f"turning point not resolved: |A(x) - h| = {abs(_rf(A, x) - h):.3e}")
    return float(x)


# -- the model ------------------------------------------------------------------

@dataclass
class OracleModel:
    """Numeric counterpart of a quadratic-mode problem after preprocessing (s > m(n-2))."""

    H: HamiltonianSpec
    family: IntegrandFamily
    interval: ProjectionInterval
    config: QuadratureConfig = field(default_factory=QuadratureConfig)
    curve: InvolutionCurve | None = None

    def __post_init__(self):
        if self.H.mode != "quadratic" or self.family.s is None:
            raise UnsupportedOracleMode("the oracle covers the quadratic mode A + B y^(2m)")
        self.A, self.B, self.m = self.H.A, self.H.B, self.H.m
        self.s = self.family.s
        self.n = self.family.n
        self.dA = self.A.derivative()
        self.dd = divided_difference(self.A)
        if self.curve is None:
            self.curve = involution_from_A(self.A)
        self.q = self.curve.q
        self.q_z = self.q.derivative(self.q.vars[1])
        self.x_left = float(self.interval.x_left)
        xr = self.interval.x_right
        self.x_right = math.inf if isinstance(xr, Infinity) else float(xr)
        a_left = _rf(self.A, self.x_left) if self.A.den.eval_float(self.x_left) != 0 else math.inf
        a_right = _limit_at_infinity(self.A) if math.isinf(self.x_right) else _rf(self.A, self.x_right)
        self.h_max = float(self.H.h_max) if self.H.h_max is not None else min(a_left, a_right)
        if not (self.h_max > 0 and math.isfinite(self.h_max)):
            raise OracleError(f"energy range (0, {self.h_max}) unusable")
        self.coeffs_c = self._xi_constants(self.n)

    # basic pieces
    def _xi_constants(self, count: int) -> list[float]:
        c = [1.0]
        for k in range(count - 1):
            c.append(c[-1] * (2 * (self.s - k * self.m) - 1))
        return c

    def exponent(self, s: int | None = None) -> float:
        return (2 * (self.s if s is None else s) - 1) / (2 * self.m)

    def fhat(self, f: RatFunc, x, s: int | None = None):
        return _rf(f, x) * (2 * self.m * _rf(self.B, x)) ** (-self.exponent(s))

    def xi(self, k: int, v):
        p = 2 * (self.s - k * self.m) - 1
        return 2.0 * self.coeffs_c[k] * v ** p

    def h_minus_A(self, x, endpoint: float, dist):
        """h - A(x) for A(endpoint) = h, with dist = |endpoint - x|."""
        sign = 1.0 if endpoint >= 0 else -1.0
        return sign * dist * self.dd.num.eval_float(endpoint, x) / self.dd.den.eval_float(endpoint, x)

    def v_of(self, hA):
        return (2 * self.m * np.maximum(hA, 0.0)) ** (1.0 / (2 * self.m))

    # turning points and involution
    def turning_points(self, h: float) -> tuple[float, float]:
        if not 0 < h < self.h_max * (1 + 1e-12):
            raise OracleError(f"h = {h} outside (0, {self.h_max})")
        hi = self.x_right
        if math.isinf(hi):
            hi = 1.0
            while _rf(self.A, hi) < h:
                hi *= 2.0
                if hi > 1e300:
                    raise OracleError("right turning point not bracketed")
        return (solve_branch(self.A, h, "left", (self.x_left, 0.0)),
                solve_branch(self.A, h, "right", (0.0, hi)))

    def _right_cap(self, target):
        """A finite right end beyond every point with A below target (x_right may be infinite)."""
        if math.isfinite(self.x_right):
            return self.x_right
        cap = 1.0
        top = float(np.max(target)) if np.size(target) else 0.0
        while _rf(self.A, cap) <= top:
            cap *= 2.0
            if cap > 1e300:
                raise OracleError("involution not bracketed on the right")
        return cap

    def sigma(self, x):
        """Numeric involution: x > 0 maps into (x_left, 0), x < 0 into (0, x_right).

        Bisection on the monotone pieces of A, then Newton on q.
        """
        x = np.asarray(x, dtype=float)
        target = _rf(self.A, x)
        pos = x > 0
        cap = self._right_cap(np.where(pos, 0.0, target))
        lo = np.where(pos, self.x_left, 0.0)
        hi = np.where(pos, 0.0, cap)
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            above = _rf(self.A, mid) > target
            # A decreases on (x_left, 0) and increases on (0, x_right)
            go_right = np.where(pos, above, ~above)
            lo = np.where(go_right, mid, lo)
            hi = np.where(go_right, hi, mid)
        z = 0.5 * (lo + hi)
        z = np.where(np.abs(z) < 1e-8 * max(1.0, abs(self.x_left)), -x, z)
        for _ in range(6):
            qz = self.q_z.eval_float(x, z)
            step = np.where(qz != 0, self.q.eval_float(x, z) / np.where(qz != 0, qz, 1.0), 0.0)
            z_new = z - step
            ok = np.where(pos, (z_new > self.x_left) & (z_new < 0), (z_new > 0) & (z_new < cap))
            z = np.where(ok, z_new, z)
        return z

    def sigma_prime(self, x, z=None):
        z = self.sigma(x) if z is None else z
        return _rf(self.dA, x) / _rf(self.dA, z)

    def ell_hat(self, f: RatFunc, x, z=None):
        """f-hat minus its pull-back by sigma: the integrand on the half oval (0, x+)."""
        z = self.sigma(x) if z is None else z
        return self.fhat(f, x) - self.fhat(f, z) * _rf(self.dA, x) / _rf(self.dA, z)

    def balance_values(self, x):
        """ell_i(x) = phi_i(x) - phi_i(sigma(x)), phi_i = f_i / (A' B^e), for every f_i."""
        z = self.sigma(x)
        e = self.exponent()

        def phi(f, t):
            return _rf(f, t) / (_rf(self.dA, t) * _rf(self.B, t) ** e)

        return np.vstack([phi(f, x) - phi(f, z) for f in self.family.f])

    # integrals
    def integral(self, f: RatFunc, s: int, h: float, strict: bool = True):
        """Area-positive integral of f y^(2s-1) dx over the oval at level h."""
        xm, xp = self.turning_points(h)
        e = (2 * s - 1) / (2 * self.m)

        def fn(nd: Nodes):
            near_hi = nd.dist_hi <= nd.dist_lo
            hA = np.where(near_hi, self.h_minus_A(nd.x, xp, nd.dist_hi), self.h_minus_A(nd.x, xm, nd.dist_lo))
            v = self.v_of(hA)
            return 2.0 * _rf(f, nd.x) * (2 * self.m * _rf(self.B, nd.x)) ** (-e) * v ** (2 * s - 1)

        return integrate(fn, xm, xp, self.config, strict=strict)

    def abelian_integral(self, i: int, h: float) -> float:
        return self.integral(self.family.f[i], self.s, h).value

    def derivative_matrix(self, h: float, k: int | None = None):
        """M[d, j] = I_j^(d)(h) for d, j < k, by the half-oval formula, with error estimates."""
        k = self.n if k is None else k
        _, xp = self.turning_points(h)
        fs = self.family.f[:k]

        def fn(nd: Nodes):
            z = self.sigma(nd.x)
            v = self.v_of(self.h_minus_A(nd.x, xp, nd.dist_hi))
            ells = np.stack([self.ell_hat(f, nd.x, z) for f in fs])  # (k, nodes)
            xis = np.stack([self.xi(d, v) for d in range(k)])  # (k, nodes)
            return xis[:, None, :] * ells[None, :, :]

        res = integrate(fn, 0.0, xp, self.config, strict=False)
        return np.atleast_2d(res.value), np.atleast_2d(res.error), res.converged

    def derivative_Iik(self, i: int, k: int, h: float) -> float:
        if not 0 <= k < self.n:
            raise ValueError(f"k must lie in 0..{self.n - 1}")
        M, _, _ = self.derivative_matrix(h, max(i, k) + 1)
        return float(M[k, i])

    def wronskian_numeric(self, k: int, h: float) -> float:
        if not 1 <= k <= self.n:
            raise ValueError(f"k must lie in 1..{self.n}")
        M, _, _ = self.derivative_matrix(h, k)
        return float(np.linalg.det(M[:k, :k]))

    def wronskian_with_noise(self, k: int, h: float, M=None, E=None):
        """(W_k, noise floor) where the floor combines quadrature error and rounding."""
        if M is None:
            M, E, _ = self.derivative_matrix(h, k)
        sub, err = M[:k, :k], E[:k, :k]
        W = float(np.linalg.det(sub))
        cof = _cofactors(sub)
        scale = float(np.prod(np.linalg.norm(sub, axis=1)))
        noise = float(np.sum(np.abs(cof) * err)) + 1e3 * EPS * scale
        return W, noise

    # simplex (iterated-integral) form
    def simplex_wronskian(self, k: int, h: float, level: int | None = None) -> float:
        """Integral over 0 < x_0 < ... < x_{k-1} < x+ of D[lhat](x) D[xi](v(x))."""
        if k not in (1, 2, 3):
            raise ValueError("simplex_wronskian supports k = 1, 2, 3")
        lvl = SIMPLEX_LEVELS[k] if level is None else level
        return self._simplex(k, h, lvl)

    def simplex_wronskian_estimate(self, k: int, h: float, level: int | None = None) -> tuple[float, float]:
        """Value at the given level and the change from one level coarser."""
        lvl = SIMPLEX_LEVELS[k] if level is None else level
        fine = self._simplex(k, h, lvl)
        coarse = self._simplex(k, h, lvl - 1)
        return fine, abs(fine - coarse)

    def _simplex(self, k: int, h: float, level: int) -> float:
        _, xp = self.turning_points(h)
        fs = self.family.f[:k]
        cfg = self.config
        # inner coordinates never reach x+, so a shorter rule suffices there
        tau_lo, tau_hi, w = reference_nodes(cfg.base_step / 2 ** level, cfg.t_max_inner)
        # outermost coordinate x_{k-1} on (0, x+)
        outer = fixed_rule(0.0, xp, level, cfg)
        xs = [outer.x]
        dists = [outer.dist_hi]  # distance to x+
        weights = outer.w
        for _ in range(k - 1):
            upper, d_up = xs[-1][..., None], dists[-1][..., None]
            xs = [a[..., None] for a in xs]
            dists = [a[..., None] for a in dists]
            new_x = upper * tau_lo
            new_d = d_up + upper * tau_hi
            xs.append(new_x)
            dists.append(new_d)
            weights = weights[..., None] * (upper * w)
        shape = np.broadcast_shapes(*[a.shape for a in xs])
        xs = [np.broadcast_to(a, shape) for a in xs]
        dists = [np.broadcast_to(a, shape) for a in dists]
        # xs[0] is x_{k-1}, xs[-1] is x_0: reverse to increasing order
        xs, dists = xs[::-1], dists[::-1]
        L = np.empty(shape + (k, k))
        X = np.empty(shape + (k, k))
        for i in range(k):
            z = self.sigma(xs[i])
            v = self.v_of(self.h_minus_A(xs[i], xp, dists[i]))
            for j in range(k):
                L[..., i, j] = self.ell_hat(fs[j], xs[i], z)
                X[..., i, j] = self.xi(j, v)
        integrand = (np.linalg.det(L) if k > 1 else L[..., 0, 0]) * (np.linalg.det(X) if k > 1 else X[..., 0, 0])
        return float(np.sum(integrand * weights))


def _cofactors(M: np.ndarray) -> np.ndarray:
    k = M.shape[0]
    if k == 1:
        return np.ones((1, 1))
    C = np.empty_like(M)
    for i in range(k):
        for j in range(k):
            minor = np.delete(np.delete(M, i, axis=0), j, axis=1)
            C[i, j] = (-1) ** (i + j) * np.linalg.det(minor)
    return C


# -- 113-bit verification ----------------------------------------------------------

class HighPrecision:
    """mpmath re-evaluation of the derivative matrix for signs near the noise floor."""

    def __init__(self, model: OracleModel, prec: int = 113):
        self.model = model
        self.prec = prec

    def _poly(self, p, x):
        acc = mpmath.mpf(0)
        for c in reversed(p.coeffs):
            acc = acc * x + mpmath.mpf(int(c.p)) / int(c.q)
        return acc

    def _rf(self, f: RatFunc, x):
        return self._poly(f.num, x) / self._poly(f.den, x)

    def _bipoly(self, p, a, b):
        acc = mpmath.mpf(0)
        for (i, j), c in p.terms.items():
            acc += mpmath.mpf(int(c.p)) / int(c.q) * a ** i * b ** j
        return acc

    def derivative_matrix(self, h: float, k: int) -> np.ndarray:
        md = self.model
        with mpmath.workprec(self.prec):
            hm = mpmath.mpf(h)
            _, xp_f = md.turning_points(h)
            xp = mpmath.findroot(lambda t: self._rf(md.A, t) - hm, mpmath.mpf(xp_f))
            e = mpmath.mpf(2 * md.s - 1) / (2 * md.m)

            def fhat(f, t):
                return self._rf(f, t) * (2 * md.m * self._rf(md.B, t)) ** (-e)

            def sigma(t):
                z0 = mpmath.mpf(float(md.sigma(np.array([float(t)]))[0]))
                return mpmath.findroot(lambda zz: self._bipoly(md.q, t, zz), z0)

            def entry(d, j):
                f = md.family.f[j]
                p = 2 * (md.s - d * md.m) - 1
                c = md.coeffs_c[d]

                def g(t):
                    if t <= 0 or t >= xp:
                        return mpmath.mpf(0)
                    z = sigma(t)
                    ell = fhat(f, t) - fhat(f, z) * self._rf(md.dA, t) / self._rf(md.dA, z)
                    hA = hm - self._rf(md.A, t)
                    if hA <= 0:
                        return mpmath.mpf(0)
                    v = (2 * md.m * hA) ** (mpmath.mpf(1) / (2 * md.m))
                    return ell * 2 * c * v ** p

                return mpmath.quad(g, [0, xp / 2, xp])

            return np.array([[float(entry(d, j)) for j in range(k)] for d in range(k)])


# -- scans -----------------------------------------------------------------------------

@dataclass
class ScanReport:
    grid: list[float]
    values: list[list[float]]  # values[k-1][point]
    noise: list[list[float]]
    sign_constant: list[bool]
    nonzero: list[bool]
    escalated: list[tuple[int, float]]
    violations: list[str]

    @property
    def consistent(self) -> bool:
        return not self.violations

    def as_dict(self) -> dict:
        return {
            "scan_grid": [float(f"{h:.17g}") for h in self.grid],
            "sign_constant": list(self.sign_constant),
            "nonzero": list(self.nonzero),
            "signs": [[int(np.sign(v)) for v in row] for row in self.values],
            "escalated": [[k, float(f"{h:.17g}")] for k, h in self.escalated],
            "violations": list(self.violations),
        }


def sign_scan(model: OracleModel, N: int = 50, lo_frac: float = 0.01, hi_frac: float = 0.99,
              high_precision: bool = True) -> ScanReport:
    """W[I_k](h), k = 1..n, on a geometric grid; every zero or sign change is reported."""
    grid = list(np.geomspace(lo_frac * model.h_max, hi_frac * model.h_max, N))
    n = model.n
    values = [[0.0] * N for _ in range(n)]
    noise = [[0.0] * N for _ in range(n)]
    escalated: list[tuple[int, float]] = []
    hp = HighPrecision(model) if high_precision else None
    for idx, h in enumerate(grid):
        M, E, _ = model.derivative_matrix(h, n)
        for k in range(1, n + 1):
            W, fl = model.wronskian_with_noise(k, h, M, E)
            if abs(W) <= fl and hp is not None:
                Mh = hp.derivative_matrix(h, k)
                W = float(np.linalg.det(Mh))
                fl = 1e3 * 2.0 ** (-hp.prec) * float(np.prod(np.linalg.norm(Mh, axis=1)))
                escalated.append((k, h))
            values[k - 1][idx] = W
            noise[k - 1][idx] = fl
    sign_constant, nonzero, violations = [], [], []
    for k in range(1, n + 1):
        row, fl = values[k - 1], noise[k - 1]
        nz = all(abs(w) > f for w, f in zip(row, fl))
        signs = {int(np.sign(w)) for w, f in zip(row, fl) if abs(w) > f}
        const = nz and len(signs) == 1
        nonzero.append(nz)
        sign_constant.append(const)
        if not nz:
            bad = [grid[i] for i, (w, f) in enumerate(zip(row, fl)) if abs(w) <= f]
            violations.append(f"W_{k} indistinguishable from zero at h = {', '.join(f'{b:.6g}' for b in bad[:5])}")
        if len(signs) > 1:
            violations.append(f"W_{k} changes sign on the grid")
    return ScanReport(grid, values, noise, sign_constant, nonzero, escalated, violations)


@dataclass
class SimplexCheck:
    k: int
    h: float
    half_oval_value: float
    simplex_value: float

    @property
    def rel_diff(self) -> float:
        return abs(self.simplex_value - self.half_oval_value) / max(abs(self.half_oval_value), 1e-300)

    def as_dict(self, tol: float) -> dict:
        return {"k": self.k, "h": float(f"{self.h:.17g}"), "half_oval": float(f"{self.half_oval_value:.12g}"),
                "simplex": float(f"{self.simplex_value:.12g}"),
                "rel_diff": float(f"{self.rel_diff:.3g}"), "agree": self.rel_diff <= tol}


def simplex_checks(model: OracleModel, fractions=(0.2, 0.4, 0.8), ks=(1, 2)) -> list[SimplexCheck]:
    out = []
    for frac in fractions:
        h = frac * model.h_max
        for k in ks:
            if k > model.n:
                continue
            out.append(SimplexCheck(k, h, model.wronskian_numeric(k, h), model.simplex_wronskian(k, h)))
    return out


def discrete_wronskian_scan(model: OracleModel, samples: int = 10_000, seed: int = 0,
                            rel_floor: float = 1e-9) -> dict:
    """Falsification by sampling: D[ell_0..ell_{k-1}] at random increasing tuples.

    Tuples whose determinant is below rel_floor times the Hadamard bound are
    counted as indeterminate rather than signed.
    """
    rng = np.random.default_rng(seed)
    n = model.n
    hi = model.x_right
    out = {}
    for k in range(1, n + 1):
        t = np.sort(rng.uniform(0.0, 1.0, size=(samples, k)), axis=1)
        pts = t * hi if math.isfinite(hi) else t / (1.0 - t)
        pts = np.clip(pts, 1e-12, None)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            vals = model.balance_values(pts.ravel())[:k].reshape(k, samples, k)  # (func, sample, point)
            M = np.transpose(vals, (1, 2, 0))  # (sample, point i, func j)
            D = np.linalg.det(M)
            bound = np.prod(np.linalg.norm(M, axis=2), axis=1)
            # samples hitting a pole come out non-finite and count as indeterminate
            determinate = np.isfinite(D) & np.isfinite(bound) & (np.abs(D) > rel_floor * bound)
        signs = set(np.sign(D[determinate]).astype(int).tolist())
        out[k] = {"determinate": int(determinate.sum()), "indeterminate": int((~determinate).sum()),
                  "signs": sorted(signs), "sign_change": len(signs) > 1}
    return out


def model_from_problem(problem, config: QuadratureConfig | None = None, preprocessed: bool = True) -> OracleModel:
    """Oracle model for a Problem; the family is preprocessed the same way the certifier does."""
    from ..criterion.preprocess import preprocess_family

    H = problem.hamiltonian
    fam = problem.family
    if H.mode != "quadratic":
        raise UnsupportedOracleMode("the oracle covers the quadratic mode A + B y^(2m)")
    if preprocessed:
        fam, _ = preprocess_family(fam, H, "auto")
    q_hint = problem.options.q_hint
    curve = involution_from_A(H.A, q_hint)
    return OracleModel(H, fam, problem.interval, config or QuadratureConfig(), curve)

