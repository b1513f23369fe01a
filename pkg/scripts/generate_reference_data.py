"""Freeze reference values produced by routes independent of the package's own algorithms.

* resultants.json: Res_z(numerator of omega_k, curve) by sympy's subresultant PRS,
  primitive with positive leading coefficient.  The package computes the same
  quantity with a fraction-free Bareiss determinant.
* wronskians.json: I_j(h) and W_k(h) by direct mpmath tanh-sinh quadrature of
  2 * int f_j ((h - A)/B)^(p/2) dx between the turning points, with h-derivatives
  taken under the integral sign.  The package uses the half-oval balance form.

Run from the repository root:  python scripts/generate_reference_data.py [--budget SECONDS]
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import mpmath
import sympy

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from abelcert.criterion import certify_problem, preprocess_family  # noqa: E402
from abelcert.problemfile import load_problem  # noqa: E402

DATA = ROOT / "tests" / "data"
RESULTANT_CASES = ("ex4_1", "ex4_2", "ex4_3", "r7_r14", "r15", "r17", "r11")
WRONSKIAN_CASES = {"ex4_1": (0.2, 0.4, 0.8), "ex4_3": (0.2, 0.5), "r17": (0.2, 0.5), "rlv3": (0.2, 0.4, 0.8)}


def to_sympy(text: str):
    return sympy.sympify(text.replace("^", "**"))


def primitive_coeffs(expr, var) -> list[str]:
    p = sympy.Poly(expr, sympy.Symbol(var), domain="QQ")
    _, p = p.clear_denoms(convert=True)
    p = p.primitive()[1]
    if p.LC() < 0:
        p = -p
    return [str(c) for c in reversed(p.all_coeffs())]


def resultant_references(budget: float) -> list[dict]:
    out = []
    for name in RESULTANT_CASES:
        rep = certify_problem(load_problem(ROOT / "fixtures" / f"{name}.prob"))
        for rec in rep.k_records:
            if rec.path != "resultant":
                continue
            num, curve = rec.wronskian_numerator, rec.curve_used
            x, z = num.vars
            start = time.perf_counter()
            r = sympy.resultant(to_sympy(num.to_str()), to_sympy(curve.to_str()), sympy.Symbol(z))
            elapsed = time.perf_counter() - start
            entry = {"fixture": name, "k": rec.k, "var": x, "coeffs": primitive_coeffs(r, x),
                     "seconds": round(elapsed, 2)}
            # content flattens any shared-factor refinement; record it so the test divides it out
            entry["shared_factor"] = None if rec.shared_factor is None else rec.shared_factor.to_str()
            out.append(entry)
            print(f"{name} r_{rec.k}: degree {len(entry['coeffs']) - 1} in {elapsed:.1f} s", flush=True)
            if elapsed > budget:
                print(f"  skipping the rest of {name}: over budget", flush=True)
                break
    return out


def to_mp(value) -> mpmath.mpf:
    return mpmath.mpf(str(sympy.N(to_sympy(str(value)), 60)))


def _turning_points(A, h, lo, hi):
    """Roots of A = h in (lo, 0) and (0, hi); A - h changes sign on each bracket."""
    g = lambda t: A(t) - h
    tiny = mpmath.mpf("1e-30")
    return (mpmath.findroot(g, (lo + tiny, -tiny), solver="anderson"),
            mpmath.findroot(g, (tiny, hi - tiny), solver="anderson"))


def wronskian_references() -> list[dict]:
    mpmath.mp.dps = 40
    out = []
    X = sympy.Symbol("x")
    for name, fractions in WRONSKIAN_CASES.items():
        prob = load_problem(ROOT / "fixtures" / f"{name}.prob")
        fam, _ = preprocess_family(prob.family, prob.hamiltonian)
        A = sympy.lambdify(X, to_sympy(prob.hamiltonian.A.to_str()), "mpmath")
        B = sympy.lambdify(X, to_sympy(prob.hamiltonian.B.to_str()), "mpmath")
        fs = [sympy.lambdify(X, to_sympy(f.to_str()), "mpmath") for f in fam.f]
        h_max = to_mp(prob.hamiltonian.h_max)
        lo, hi = to_mp(prob.interval.x_left), to_mp(prob.interval.x_right)
        n = len(fs)
        for frac in fractions:
            h = h_max * mpmath.mpf(frac)
            a, b = _turning_points(A, h, lo, hi)

            def dI(j, d):
                # d-th h-derivative of int f_j y^p dx with p = 2s - 1, y^2 = (h - A)/B
                p = mpmath.mpf(2 * fam.s - 1)
                coef = mpmath.mpf(1)
                for i in range(d):
                    coef *= (p - 2 * i) / 2
                e = p / 2 - d
                return 2 * coef * mpmath.quad(lambda t: fs[j](t) * ((h - A(t)) / B(t)) ** e / B(t) ** d, [a, 0, b])

            M = [[dI(j, d) for j in range(n)] for d in range(n)]
            entry = {"fixture": name, "fraction": frac, "h": mpmath.nstr(h, 30),
                     "integrals": [mpmath.nstr(M[0][j], 25) for j in range(n)],
                     "wronskians": [mpmath.nstr(mpmath.det(mpmath.matrix([row[:k] for row in M[:k]])), 25)
                                    for k in range(1, n + 1)]}
            out.append(entry)
            print(f"{name} h = {mpmath.nstr(h, 6)}: W = {[mpmath.nstr(mpmath.mpf(w), 8) for w in entry['wronskians']]}",
                  flush=True)
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=float, default=120.0, help="stop a fixture once one resultant exceeds this")
    ap.add_argument("--only", choices=("resultants", "wronskians"))
    args = ap.parse_args()
    DATA.mkdir(parents=True, exist_ok=True)
    if args.only != "wronskians":
        data = resultant_references(args.budget)
        (DATA / "resultants.json").write_text(json.dumps(data, indent=1) + "\n")
    if args.only != "resultants":
        data = wronskian_references()
        (DATA / "wronskians.json").write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
