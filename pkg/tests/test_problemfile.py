"""Problem-file loading: accepted layouts and structural errors."""
from __future__ import annotations

import pytest

from abelcert.algebra import SurdValue
from abelcert.problemfile import ProblemFileError, input_digest, load_problem, load_problem_text
from conftest import FIXTURES

BASE = """[problem]
name = demo
[hamiltonian]
A = x^2/2
B = 1/2
m = 1
[family]
s = 1
f0 = 1
f1 = x^2
[interval]
x_left = -1
x_right = 1
"""


def edit(text: str, old: str, new: str) -> str:
    assert old in text
    return text.replace(old, new)


def test_loads_quadratic_mode():
    p = load_problem_text(BASE)
    assert p.name == "demo" and p.mode == "quadratic"
    assert p.family.s == 1 and len(p.family.f) == 2
    assert p.interval.x_right == SurdValue(1)


def test_loads_separated_fixture():
    p = load_problem(FIXTURES / "separated_harmonic.prob")
    assert p.mode == "separated" and p.family.g is not None


def test_surd_endpoint_and_options():
    text = edit(BASE, "x_right = 1", "x_right = sqrt(2)-1\nh_max = 1/4") + \
        "[options]\npreprocess = none\nnumeric_branch_filter = off\nq = x + z\n"
    p = load_problem_text(text)
    assert p.interval.x_right == SurdValue.sqrt_of(2) - 1
    assert p.options.preprocess == "none" and not p.options.numeric_branch_filter
    assert p.options.q_hint is not None


def test_name_defaults_to_file_stem():
    text = edit(BASE, "name = demo\n", "")
    assert load_problem_text(text, "stem").name == "stem"


@pytest.mark.parametrize("old, new, fragment", [
    ("m = 1", "m = 1\nC = 2", "unknown key"),
    ("[family]", "[extra]\nz = 1\n[family]", "unknown section"),
    ("m = 1\n", "", "missing key"),
    ("f1 = x^2", "f2 = x^2", "contiguous"),
    ("f0 = 1\nf1 = x^2\n", "", "no integrands"),
    ("B = 1/2", "B = 1/2\nPsi = y^2/2", "not both"),
    ("s = 1", "s = 1\ng = y", "separated mode"),
    ("x_right = 1", "x_right = 1\ny_right = 1", "separated mode"),
    ("m = 1", "m = 0", "positive integer"),
    ("s = 1", "s = one", "positive integer"),
    ("A = x^2/2", "A = x^2 +* x", "at offset"),
    ("A = x^2/2", "A = y^2", "at offset"),
])
def test_structural_errors(old, new, fragment):
    with pytest.raises(ProblemFileError) as exc:
        load_problem_text(edit(BASE, old, new))
    assert fragment in str(exc.value)


def test_missing_section():
    text = BASE.split("[interval]")[0]
    with pytest.raises(ProblemFileError, match="missing section"):
        load_problem_text(text)


def test_bad_option_values():
    for line in ("preprocess = sometimes", "numeric_branch_filter = maybe"):
        with pytest.raises(ProblemFileError):
            load_problem_text(BASE + "[options]\n" + line + "\n")


def test_duplicate_key_is_rejected():
    with pytest.raises(ProblemFileError, match="malformed"):
        load_problem_text(edit(BASE, "m = 1", "m = 1\nm = 2"))


def test_digest_is_of_the_bytes():
    import hashlib
    path = FIXTURES / "ex4_1.prob"
    assert input_digest(path) == hashlib.sha256(path.read_bytes()).hexdigest()
