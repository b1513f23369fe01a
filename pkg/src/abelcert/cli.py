"""Command-line front end: certify, sturm and resultant."""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .algebra import UniPoly
from .criterion import CERTIFIED, INCONCLUSIVE, PRECONDITION_FAILED, certify_problem
from .elimination import DegenerateElimination, content_normalize, resultant
from .parser import IDENTIFIERS, ParseError, as_bipoly, parse_endpoint, parse_poly, tokenize
from .problemfile import ProblemFileError, input_digest, load_problem
from .realroots import count_roots
from .report import OracleSummary, dumps, poly_coeffs, render_text, report_document

EXIT_CODES = {CERTIFIED: 0, INCONCLUSIVE: 1, PRECONDITION_FAILED: 2}
EXIT_USAGE = 3
SIMPLEX_TOL = 1e-5


class UsageError(Exception):
    """Bad command-line input; reported with exit code 3."""


@dataclasses.dataclass(frozen=True)
class CertifyFlags:
    json: bool = False
    numeric: bool = False
    grid: int = 50
    tol: float = 1e-8
    no_preprocess: bool = False
    quiet: bool = False


@dataclasses.dataclass
class CertifyOutcome:
    code: int
    stdout: str
    stderr: str = ""
    document: dict | None = None


def run_oracle(problem, report, flags: CertifyFlags) -> OracleSummary:
    from .oracle import (OracleError, QuadratureConfig, QuadratureNonConvergence, UnsupportedOracleMode,
                         model_from_problem, simplex_checks, sign_scan)

    if report.verdict == PRECONDITION_FAILED:
        return OracleSummary(skipped="preconditions failed")
    try:
        config = QuadratureConfig(rel_tol=flags.tol)
        model = model_from_problem(problem, config, preprocessed=not flags.no_preprocess)
        scan = sign_scan(model, N=flags.grid)
        checks = simplex_checks(model)
    except UnsupportedOracleMode as exc:
        return OracleSummary(skipped=str(exc))
    except (OracleError, QuadratureNonConvergence, ArithmeticError, ValueError) as exc:
        return OracleSummary(skipped=f"oracle error: {exc}")
    prop = [c.as_dict(SIMPLEX_TOL) for c in checks]
    bad = not scan.consistent or not all(c["agree"] for c in prop)
    return OracleSummary(scan=scan.as_dict(), simplex=prop, inconsistent=bad and report.verdict == CERTIFIED)


def certify_file(path: str, flags: CertifyFlags) -> CertifyOutcome:
    try:
        problem = load_problem(path)
    except (ProblemFileError, ParseError) as exc:
        return CertifyOutcome(EXIT_USAGE, "", f"{path}: {exc}\n")
    except OSError as exc:
        return CertifyOutcome(EXIT_USAGE, "", f"{path}: cannot read: {exc.strerror or exc}\n")
    options = problem.options
    if flags.no_preprocess:
        options = dataclasses.replace(options, preprocess="none")
    report = certify_problem(problem, options)
    oracle = run_oracle(problem, report, flags) if flags.numeric else None
    doc = report_document(report, problem.name, input_digest(path), oracle)
    out = dumps(doc) if flags.json else render_text(report, problem.name, oracle, flags.quiet)
    err = ""
    if oracle is not None and oracle.inconsistent:
        err = f"{path}: oracle scan contradicts the exact verdict\n"
    return CertifyOutcome(EXIT_CODES[report.verdict], out, err, doc)


def _certify_job(args):
    return certify_file(*args)


def certify_directory(directory: str, flags: CertifyFlags, jobs: int | None = None) -> list[tuple[str, CertifyOutcome]]:
    files = sorted(str(p) for p in Path(directory).glob("*.prob"))
    if not files:
        raise UsageError(f"no .prob files in {directory}")
    jobs = jobs or min(len(files), os.cpu_count() or 1)
    if jobs <= 1:
        outcomes = [certify_file(f, flags) for f in files]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_certify_job, [(f, flags) for f in files]))
    return list(zip(files, outcomes))


def cmd_certify(args) -> int:
    flags = CertifyFlags(args.json, args.numeric, args.grid, args.tol, args.no_preprocess, args.quiet)
    if flags.grid < 2:
        raise UsageError("--grid needs at least 2 points")
    if not flags.tol > 0:
        raise UsageError("--tol must be positive")
    if args.all:
        if args.path:
            raise UsageError("give either PATH or --all DIR")
        results = certify_directory(args.all, flags, args.jobs)
        if flags.json:
            sys.stdout.write(dumps([o.document for _, o in results if o.document is not None]))
        for _path, o in results:
            if not flags.json:
                sys.stdout.write(o.stdout)
            sys.stderr.write(o.stderr)
        return max(o.code for _, o in results)
    if not args.path:
        raise UsageError("certify needs PATH or --all DIR")
    o = certify_file(args.path, flags)
    sys.stdout.write(o.stdout)
    sys.stderr.write(o.stderr)
    return o.code


def _variables(*texts: str) -> list[str]:
    """Variables in order of first use in the texts."""
    seen: list[str] = []
    for text in texts:
        for tok in tokenize(text):
            if tok.kind == "ident" and tok.text in IDENTIFIERS and tok.text != "sqrt" and tok.text not in seen:
                seen.append(tok.text)
    return seen


def cmd_sturm(args) -> int:
    used = _variables(args.poly)
    if len(used) > 1:
        raise UsageError(f"sturm needs a univariate polynomial, found variables {', '.join(used)}")
    var = used[0] if used else "x"
    p = parse_poly(args.poly, (var,))
    a, b = parse_endpoint(args.a), parse_endpoint(args.b)
    if not a < b:
        raise UsageError(f"need a < b, got a = {a}, b = {b}")
    if p.is_zero():
        raise UsageError("the zero polynomial has infinitely many roots")
    rc = count_roots(p, a, b)
    print(rc.count)
    for adj in rc.adjustments:
        print(f"# endpoint factor removed at {adj.endpoint}: ({adj.factor.to_str()})^{adj.multiplicity}"
              + (", conjugate root restored" if adj.conjugate_restored else ""))
    return 0


def resultant_of_texts(p_text: str, q_text: str, var: str) -> UniPoly:
    if var not in IDENTIFIERS or var == "sqrt":
        raise UsageError(f"unknown variable {var!r}")
    used = _variables(p_text, q_text)
    others = [v for v in used if v != var]
    if len(others) > 1:
        raise UsageError(f"resultant needs bivariate inputs, found variables {', '.join(used)}")
    other = others[0] if others else ("y" if var == "x" else "x")
    pair = (var, other)
    p = as_bipoly(parse_poly(p_text, pair), pair)
    q = as_bipoly(parse_poly(q_text, pair), pair)
    if p.is_zero() or q.is_zero():
        return UniPoly([], other)
    try:
        return resultant(p, q, var)
    except DegenerateElimination as exc:
        raise UsageError(str(exc)) from None


def cmd_resultant(args) -> int:
    r = resultant_of_texts(args.p, args.q, args.var)
    normalized, content = content_normalize(r)
    print(normalized.to_str())
    print(json.dumps(poly_coeffs(normalized)))
    print(f"# content {content.p}/{content.q}, degree {normalized.degree() if not r.is_zero() else '-inf'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abelcert", description="Exact Chebyshev-property certificates "
                                 "for Abelian integrals.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", help="certify a problem file")
    c.add_argument("path", nargs="?", help="problem file")
    c.add_argument("--all", metavar="DIR", help="certify every .prob file in DIR concurrently")
    c.add_argument("--jobs", type=int, default=None, help="worker processes for --all")
    c.add_argument("--json", action="store_true", help="write the JSON report document")
    c.add_argument("--numeric", action="store_true", help="run the floating-point oracle sign scan")
    c.add_argument("--grid", type=int, default=50, help="sign-scan grid size (default 50)")
    c.add_argument("--tol", type=float, default=1e-8, help="oracle quadrature tolerance (default 1e-8)")
    c.add_argument("--no-preprocess", action="store_true", help="disable raising the y-power")
    c.add_argument("--quiet", action="store_true", help="print only the verdict line")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("sturm", help="count real roots of a polynomial on (a, b)")
    s.add_argument("poly")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_sturm)

    r = sub.add_parser("resultant", help="resultant of two bivariate polynomials")
    r.add_argument("p")
    r.add_argument("q")
    r.add_argument("var", help="variable to eliminate")
    r.set_defaults(func=cmd_resultant)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return EXIT_USAGE if code != 0 else 0
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"parse error {exc.annotate()}\n")
    except (UsageError, ProblemFileError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
