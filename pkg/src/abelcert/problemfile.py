"""INI-style problem files.

Sections and keys::

    [problem]      name
    [hamiltonian]  A, B (quadratic mode), m, Psi (separated mode)
    [family]       s | g, f0, f1, ...
    [interval]     x_left, x_right, y_right (separated mode), y_left (optional), h_max (optional)
    [options]      q, preprocess = auto | none, numeric_branch_filter = on | off
"""
from __future__ import annotations

import configparser
import hashlib
import re
from pathlib import Path

from .criterion.problem import CertifyOptions, HamiltonianSpec, IntegrandFamily, Problem, ProjectionInterval
from .parser import ParseError, parse_endpoint, parse_poly, parse_ratfunc, parse_surd

ALLOWED = {
    "problem": {"name"},
    "hamiltonian": {"A", "B", "m", "Psi"},
    "family": {"s", "g"},
    "interval": {"x_left", "x_right", "y_right", "y_left", "h_max"},
    "options": {"q", "preprocess", "numeric_branch_filter"},
}
_F_KEY = re.compile(r"f(0|[1-9][0-9]*)$")


class ProblemFileError(ValueError):
    """Structural problem in a problem file (missing or unknown keys, bad values)."""

    def __init__(self, message: str, section: str | None = None, key: str | None = None):
        self.section = section
        self.key = key
        where = f"[{section}]" + (f" {key}" if key else "") if section else ""
        super().__init__(f"{where}: {message}" if where else message)


def _parse(fn, text: str, section: str, key: str, *args):
    try:
        return fn(text, *args)
    except ParseError as exc:
        raise ProblemFileError(f"{exc.annotate()}", section, key) from None


def _int(text: str, section: str, key: str) -> int:
    try:
        v = int(text.strip())
    except ValueError:
        raise ProblemFileError(f"expected a positive integer, found {text!r}", section, key) from None
    if v < 1:
        raise ProblemFileError(f"expected a positive integer, found {v}", section, key)
    return v


def load_problem_text(text: str, name_hint: str = "problem") -> Problem:
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",), comment_prefixes=("#", ";"),
                                   inline_comment_prefixes=None, strict=True, empty_lines_in_values=False)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ProblemFileError(f"malformed file: {exc}") from None
    for sec in cp.sections():
        if sec not in ALLOWED:
            raise ProblemFileError("unknown section", sec)
        for key in cp[sec]:
            if key in ALLOWED[sec] or (sec == "family" and _F_KEY.match(key)):
                continue
            raise ProblemFileError("unknown key", sec, key)
    for sec in ("hamiltonian", "family", "interval"):
        if sec not in cp:
            raise ProblemFileError("missing section", sec)

    def get(sec, key, required=True):
        if sec in cp and key in cp[sec]:
            return cp[sec][key]
        if required:
            raise ProblemFileError("missing key", sec, key)
        return None

    name = get("problem", "name", required=False) or name_hint
    ham = cp["hamiltonian"]
    separated = "Psi" in ham
    if separated and "B" in ham:
        raise ProblemFileError("give either B (quadratic mode) or Psi (separated mode), not both", "hamiltonian")
    A = _parse(parse_ratfunc, get("hamiltonian", "A"), "hamiltonian", "A", ("x",))
    m = _int(get("hamiltonian", "m"), "hamiltonian", "m")
    B = Psi = None
    if separated:
        Psi = _parse(parse_ratfunc, get("hamiltonian", "Psi"), "hamiltonian", "Psi", ("y",))
    else:
        B = _parse(parse_ratfunc, get("hamiltonian", "B"), "hamiltonian", "B", ("x",))

    fam_sec = cp["family"]
    indices = sorted(int(_F_KEY.match(k).group(1)) for k in fam_sec if _F_KEY.match(k))
    if not indices:
        raise ProblemFileError("no integrands f0, f1, ...", "family")
    if indices != list(range(len(indices))):
        raise ProblemFileError(f"integrand keys must be contiguous from f0, found {indices}", "family")
    fs = tuple(_parse(parse_ratfunc, fam_sec[f"f{i}"], "family", f"f{i}", ("x",)) for i in indices)
    if separated:
        if "s" in fam_sec:
            raise ProblemFileError("s belongs to the quadratic mode; use g", "family", "s")
        g = _parse(parse_ratfunc, get("family", "g"), "family", "g", ("y",))
        family = IntegrandFamily(fs, g=g)
    else:
        if "g" in fam_sec:
            raise ProblemFileError("g belongs to the separated mode; use s", "family", "g")
        family = IntegrandFamily(fs, s=_int(get("family", "s"), "family", "s"))

    iv = cp["interval"]
    x_left = _parse(parse_surd, get("interval", "x_left"), "interval", "x_left")
    x_right = _parse(parse_endpoint, get("interval", "x_right"), "interval", "x_right")
    y_right = y_left = None
    if separated:
        y_right = _parse(parse_endpoint, get("interval", "y_right"), "interval", "y_right")
        if "y_left" in iv:
            y_left = _parse(parse_surd, iv["y_left"], "interval", "y_left")
    elif "y_right" in iv or "y_left" in iv:
        raise ProblemFileError("y_right / y_left belong to the separated mode", "interval")
    h_max = _parse(parse_surd, iv["h_max"], "interval", "h_max") if "h_max" in iv else None

    q_hint = None
    preprocess = "auto"
    branch = True
    if "options" in cp:
        opt = cp["options"]
        if "q" in opt:
            q_hint = _parse(parse_poly, opt["q"], "options", "q", ("x", "z"))
        if "preprocess" in opt:
            preprocess = opt["preprocess"].strip()
            if preprocess not in ("auto", "none"):
                raise ProblemFileError(f"expected auto or none, found {preprocess!r}", "options", "preprocess")
        if "numeric_branch_filter" in opt:
            val = opt["numeric_branch_filter"].strip()
            if val not in ("on", "off"):
                raise ProblemFileError(f"expected on or off, found {val!r}", "options", "numeric_branch_filter")
            branch = val == "on"

    H = HamiltonianSpec(A=A, B=B, m=m, Psi=Psi, h_max=h_max)
    interval = ProjectionInterval(x_left, x_right, y_right, y_left)
    options = CertifyOptions(preprocess=preprocess, numeric_branch_filter=branch, q_hint=q_hint)
    return Problem(name.strip(), H, family, interval, options)


def load_problem(path: str | Path) -> Problem:
    path = Path(path)
    return load_problem_text(path.read_text(encoding="utf-8"), path.stem)


def input_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
