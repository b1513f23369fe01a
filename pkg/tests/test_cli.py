"""Command-line contract: exit codes, JSON schema, determinism and the utility subcommands."""
from __future__ import annotations

import json
import re
import shutil
import subprocess
import sys

import pytest

from abelcert.cli import CertifyFlags, certify_directory, certify_file, main
from abelcert.report import stable_view
from conftest import FIXTURES

NUM_DEN = re.compile(r"-?\d+/\d+$")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name, code", [("ex4_1", 0), ("planted_root", 1), ("past_saddle", 2), ("malformed", 3)])
def test_exit_code_matrix(capsys, name, code):
    assert run(capsys, "certify", str(FIXTURES / f"{name}.prob"))[0] == code


def test_text_report_names_the_balances(capsys):
    code, out, _ = run(capsys, "certify", str(FIXTURES / "ex4_1.prob"))
    assert code == 0 and out.startswith("ex4_1: CERTIFIED")
    for k in (1, 2, 3):
        assert re.search(rf"^r_{k}: degree \d+, .*Sturm count 0 on", out, re.M)


def test_single_variable_path_is_reported(capsys):
    code, out, _ = run(capsys, "certify", str(FIXTURES / "rlv3.prob"))
    assert code == 0 and "single-variable" in out


def test_malformed_expression_is_annotated(capsys):
    code, _, err = run(capsys, "certify", str(FIXTURES / "malformed.prob"))
    assert code == 3 and "offset" in err and "^" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "certify", str(tmp_path / "absent.prob"))
    assert code == 3 and "cannot read" in err


def test_quiet_prints_only_the_verdict(capsys):
    code, out, _ = run(capsys, "certify", "--quiet", str(FIXTURES / "ex4_1.prob"))
    assert out == "ex4_1: CERTIFIED\n"


def test_no_preprocess_changes_the_outcome(capsys):
    # without raising the y-power the ex4_1 family fails the order clause
    code, out, _ = run(capsys, "certify", "--no-preprocess", str(FIXTURES / "ex4_1.prob"))
    assert code == 2 and "PRECONDITION_FAILED" in out


def _all_polys(rec):
    yield rec["resultant"]
    num = rec["wronskian_numerator"]
    if num and isinstance(num[0], list):
        yield from num
    else:
        yield num


def test_json_schema(capsys):
    code, out, _ = run(capsys, "certify", "--json", str(FIXTURES / "ex4_1.prob"))
    doc = json.loads(out)
    for key in ("verdict", "mode", "preprocessing", "k_records", "oracle", "preconditions", "version",
                "input_sha256", "timings"):
        assert key in doc
    assert doc["verdict"] == "CERTIFIED" and doc["mode"] == "quadratic"
    for rec in doc["k_records"]:
        for key in ("k", "wronskian_numerator", "resultant", "sturm_count", "adjustments", "dirty_roots"):
            assert key in rec
        for coeffs in _all_polys(rec):
            assert coeffs and all(NUM_DEN.match(c) for c in coeffs)
        assert rec["resultant"][-1] != "0/1"
    assert [r["sturm_count"] for r in doc["k_records"]] == [0, 0, 0]


def test_json_oracle_section(capsys):
    code, out, _ = run(capsys, "certify", "--json", "--numeric", "--grid", "12", str(FIXTURES / "r17.prob"))
    oracle = json.loads(out)["oracle"]
    assert len(oracle["scan_grid"]) == 12
    assert oracle["sign_constant"] == [True, True, True]
    assert oracle["prop33_checks"] and all(c["agree"] for c in oracle["prop33_checks"])
    assert not oracle["inconsistent"]


def test_oracle_skipped_on_failed_preconditions(capsys):
    code, out, _ = run(capsys, "certify", "--json", "--numeric", str(FIXTURES / "past_saddle.prob"))
    oracle = json.loads(out)["oracle"]
    assert code == 2 and oracle["skipped"] and oracle["scan_grid"] == []


def test_json_is_deterministic():
    a = certify_file(str(FIXTURES / "ex4_3.prob"), CertifyFlags(json=True))
    b = certify_file(str(FIXTURES / "ex4_3.prob"), CertifyFlags(json=True))
    assert stable_view(a.document) == stable_view(b.document)
    strip = lambda text: re.sub(r'"timings": \{[^}]*\}', "", text)
    assert strip(a.stdout) == strip(b.stdout)


def test_flag_validation(capsys):
    path = str(FIXTURES / "ex4_1.prob")
    assert run(capsys, "certify", "--grid", "1", path)[0] == 3
    assert run(capsys, "certify", "--tol", "0", path)[0] == 3
    assert run(capsys, "certify")[0] == 3
    assert run(capsys, "certify", "--bogus", path)[0] == 3
    assert run(capsys, "frobnicate")[0] == 3


def test_batch_mode_runs_concurrently(tmp_path):
    for name in ("ex4_1", "planted_root", "past_saddle", "separated_harmonic"):
        shutil.copy(FIXTURES / f"{name}.prob", tmp_path)
    results = certify_directory(str(tmp_path), CertifyFlags(quiet=True), jobs=2)
    codes = {p.rsplit("/", 1)[-1]: o.code for p, o in results}
    assert codes == {"ex4_1.prob": 0, "past_saddle.prob": 2, "planted_root.prob": 1, "separated_harmonic.prob": 0}


def test_batch_exit_code_is_the_worst(capsys, tmp_path):
    for name in ("ex4_1", "malformed"):
        shutil.copy(FIXTURES / f"{name}.prob", tmp_path)
    code, out, err = run(capsys, "certify", "--quiet", "--all", str(tmp_path), "--jobs", "1")
    assert code == 3 and "ex4_1: CERTIFIED" in out and "malformed" in err


def test_batch_on_empty_directory(capsys, tmp_path):
    assert run(capsys, "certify", "--all", str(tmp_path))[0] == 3


@pytest.mark.parametrize("argv, out", [
    (("x^2-2", "0", "2"), "1\n"),
    (("x^2-2", "-2", "2"), "2\n"),
    (("x^2-2", "0", "sqrt(2)"), "0\n# endpoint factor removed at sqrt(2): (x^2 - 2)^1, conjugate root restored\n"),
    (("(x-1)^2*(x+1)", "-2", "2"), "2\n"),
])
def test_sturm_command(capsys, argv, out):
    code, got, _ = run(capsys, "sturm", *argv)
    assert code == 0 and got.splitlines()[0] == out.splitlines()[0]


def test_sturm_usage_errors(capsys):
    assert run(capsys, "sturm", "x^2-2", "2", "0")[0] == 3
    assert run(capsys, "sturm", "0", "0", "1")[0] == 3
    assert run(capsys, "sturm", "x*y", "0", "1")[0] == 3
    code, _, err = run(capsys, "sturm", "x^^2", "0", "1")
    assert code == 3 and "parse error" in err


def test_resultant_command(capsys):
    code, out, _ = run(capsys, "resultant", "x*y-1", "x^2+y^2-4", "x")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "y^4 - 4*y^2 + 1"
    assert json.loads(lines[1]) == ["1/1", "0/1", "-4/1", "0/1", "1/1"]
    assert lines[2].startswith("# content")


def test_resultant_of_identical_inputs_is_zero(capsys):
    code, out, _ = run(capsys, "resultant", "x*y-1", "x*y-1", "x")
    assert code == 0 and out.splitlines()[1] == "[]"


def test_resultant_usage_errors(capsys):
    assert run(capsys, "resultant", "x*y*z", "x", "x")[0] == 3
    assert run(capsys, "resultant", "x", "y", "w")[0] == 3
    assert run(capsys, "resultant", "x +", "y", "x")[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "abelcert", "sturm", "x^2-2", "0", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "1\n"


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and out.startswith("abelcert ")
