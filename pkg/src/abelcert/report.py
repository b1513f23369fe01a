"""Machine-readable and text reports for a certification run."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import flint

from . import __version__
from .algebra import BiPoly, RatFunc, UniPoly
from .criterion import CertificationReport, KRecord

# keys excluded from the determinism contract
VOLATILE_KEYS = ("timings", "version")


def num_den(c) -> str:
    c = flint.fmpq(c)
    return f"{c.p}/{c.q}"


def poly_coeffs(p: UniPoly) -> list[str]:
    """Coefficients as "num/den" strings, lowest degree first."""
    return [num_den(c) for c in p.coeffs]


def bipoly_coeffs(p: BiPoly) -> list[list[str]]:
    """Entry j is the coefficient list in vars[0] of vars[1]^j."""
    return [poly_coeffs(c) for c in p.coeffs_in(p.vars[1])]


def serialize_poly(p) -> dict | None:
    if p is None:
        return None
    if isinstance(p, UniPoly):
        return {"vars": [p.var], "coeffs": poly_coeffs(p), "text": p.to_str()}
    if isinstance(p, BiPoly):
        return {"vars": list(p.vars), "coeffs": bipoly_coeffs(p), "text": p.to_str()}
    if isinstance(p, RatFunc):
        return {"vars": [p.var], "num": poly_coeffs(p.num), "den": poly_coeffs(p.den), "text": p.to_str()}
    raise TypeError(type(p).__name__)


def coefficient_array(p):
    """Bare coefficient array: a list for UniPoly, a list of lists (by vars[1] power) for BiPoly."""
    if p is None:
        return None
    return poly_coeffs(p) if isinstance(p, UniPoly) else bipoly_coeffs(p)


def _vars(p):
    if p is None:
        return None
    return [p.var] if isinstance(p, UniPoly) else list(p.vars)


def _endpoint(v) -> str:
    return str(v)


def k_record_dict(rec: KRecord) -> dict:
    return {
        "k": rec.k,
        "name": f"r_{rec.k}",
        "suite": rec.suite,
        "status": rec.status,
        "path": rec.path,
        "wronskian_numerator": coefficient_array(rec.wronskian_numerator),
        "wronskian_numerator_vars": _vars(rec.wronskian_numerator),
        "wronskian_numerator_text": None if rec.wronskian_numerator is None else rec.wronskian_numerator.to_str(),
        "resultant": coefficient_array(rec.resultant),
        "resultant_var": None if rec.resultant is None else rec.resultant.var,
        "resultant_text": None if rec.resultant is None else rec.resultant.to_str(),
        "resultant_content": None if rec.resultant_content is None else num_den(rec.resultant_content),
        "sturm_count": rec.sturm_count,
        "interval": [_endpoint(e) for e in rec.interval],
        "adjustments": [a.as_dict() for a in rec.adjustments],
        "dirty_roots": [[num_den(lo), num_den(hi)] for lo, hi in rec.dirty_roots],
        "branch_filter": list(rec.branch_filter),
        "shared_factor": serialize_poly(rec.shared_factor),
        "curve_used": serialize_poly(rec.curve_used),
    }


@dataclass
class OracleSummary:
    scan: dict | None = None
    simplex: list[dict] = field(default_factory=list)
    skipped: str | None = None
    inconsistent: bool = False

    def as_dict(self) -> dict:
        if self.skipped is not None:
            return {"skipped": self.skipped, "scan_grid": [], "sign_constant": [], "prop33_checks": []}
        out = dict(self.scan or {})
        out["prop33_checks"] = list(self.simplex)
        out["inconsistent"] = self.inconsistent
        return out


def report_document(rep: CertificationReport, name: str, input_sha256: str,
                    oracle: OracleSummary | None = None) -> dict:
    plan = rep.plan
    doc = {
        "name": name,
        "verdict": rep.verdict,
        "mode": rep.mode,
        "preconditions": list(rep.preconditions),
        "failed_precondition": rep.failed_precondition,
        "preprocessing": [step.as_dict() for step in rep.preprocessing],
        "family": None if rep.family is None else {
            "s": rep.family.s, "f": [f.to_str() for f in rep.family.f]},
        "plan": None if plan is None else plan.describe(),
        "curves": {key: serialize_poly(c.q) for key, c in sorted(rep.curves.items())},
        "k_records": [k_record_dict(r) for r in rep.k_records],
        "notes": list(rep.notes),
        "warnings": list(rep.warnings),
        "oracle": None if oracle is None else oracle.as_dict(),
        "version": __version__,
        "input_sha256": input_sha256,
        "timings": {k: round(v, 6) for k, v in sorted(rep.timings.items())},
    }
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def stable_view(doc: dict) -> dict:
    """The document without the fields allowed to differ between identical runs."""
    return {k: v for k, v in doc.items() if k not in VOLATILE_KEYS}


def render_text(rep: CertificationReport, name: str, oracle: OracleSummary | None = None,
                quiet: bool = False) -> str:
    lines = [f"{name}: {rep.verdict}"]
    if quiet:
        return lines[0] + "\n"
    lines.append(f"mode: {rep.mode}")
    if rep.failed_precondition:
        lines.append(f"failed precondition: {rep.failed_precondition}")
    for fact in rep.preconditions:
        lines.append(f"  ok  {fact}")
    for step in rep.preprocessing:
        lines.append(f"preprocessing round {step.round}: s {step.s_before} -> {step.s_after}")
        for i, f in enumerate(step.f_after):
            lines.append(f"  f{i} = {f.to_str()}")
    if rep.plan is not None:
        lines.append(f"substitution: {rep.plan.describe()}")
    for key, c in sorted(rep.curves.items()):
        lines.append(f"curve {key}: q = {c.q.to_str()}")
    for rec in rep.k_records:
        label = f"r_{rec.k}" if rec.suite == "main" else f"r_{rec.k} [{rec.suite}]"
        iv = ", ".join(_endpoint(e) for e in rec.interval)
        if rec.resultant is not None:
            lines.append(f"{label}: degree {rec.resultant.degree()}, {rec.path}, "
                         f"Sturm count {rec.sturm_count} on ({iv}), {rec.status}")
            lines.append(f"  {rec.resultant.to_str()}")
        else:
            lines.append(f"{label}: {rec.path}, {rec.status}")
        for adj in rec.adjustments:
            lines.append(f"  endpoint factor removed at {adj.endpoint}: ({adj.factor.to_str()})^{adj.multiplicity}")
        for lo, hi in rec.dirty_roots:
            lines.append(f"  root in [{lo}, {hi}]")
    for note in rep.notes:
        lines.append(f"note: {note}")
    for w in rep.warnings:
        lines.append(f"warning: {w}")
    if oracle is not None:
        d = oracle.as_dict()
        if oracle.skipped:
            lines.append(f"oracle: skipped ({oracle.skipped})")
        else:
            lines.append(f"oracle: {len(d['scan_grid'])}-point scan, sign constant {d['sign_constant']}, "
                         f"nonzero {d['nonzero']}")
            for chk in oracle.simplex:
                lines.append(f"  k={chk['k']} h={chk['h']:.6g}: half-oval {chk['half_oval']:.10g} "
                             f"simplex {chk['simplex']:.10g} rel diff {chk['rel_diff']:.2g}")
            if oracle.inconsistent:
                lines.append("oracle: INCONSISTENT with the exact verdict")
    return "\n".join(lines) + "\n"
