import json
import subprocess
import sys

import pytest

from trinv.cli import CHECKS, main, run_check
from trinv.fields import FieldSpec
from trinv.invariants import build_set
from trinv.report import RunConfig
from trinv.spans import verify_generation

from conftest import SURROGATE


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("word,char,expected", [
    ("x1 x2 x1", "0", "- x1^2 x2 - x2 x1^2"),
    ("x1^3", "0", "0"),
    ("x1^2 x2 x3^2", "0", "0"),
    ("x1^2 x2^2 x1", "0", "x1^2 x2^2 x1"),
])
def test_rewrite_outputs(word, char, expected, capsys):
    code, out, _ = run(["rewrite", word, "--char", char], capsys)
    assert code == 0
    assert out.strip() == expected


def test_rewrite_survives_in_char_three(capsys):
    code, out, _ = run(["rewrite", "x1^2 x2 x3^2", "--char", "3"], capsys)
    assert code == 0 and out.strip() != "0"


@pytest.mark.parametrize("argv", [
    ["rewrite", "x1 x0"],
    ["rewrite"],
    ["nosuch"],
    ["counts", "--char", "4"],
    ["counts", "--params", "1,2"],
    ["hsop-cases", "--char", "3", "--params", "1,1,1,1,1"],
    ["counts", "extra"],
])
def test_usage_errors_exit_two(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2
    assert out == ""
    assert "error" in err


@pytest.mark.parametrize("check", ["generators", "counts", "hsop-cases", "teranishi"])
def test_fast_checks_pass(check, capsys):
    code, out, err = run([check], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["status"] == "pass" and rep["check"] == check
    assert rep["schema_version"]
    assert check in err


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(["counts", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["status"] == "pass"


def test_reports_are_deterministic():
    cfg = RunConfig(FieldSpec.small_char(2), 7, None, None, None, None)
    a = run_check("hsop-cases", cfg).to_json(include_timing=False)
    b = run_check("hsop-cases", cfg).to_json(include_timing=False)
    assert a == b
    cfg = RunConfig(SURROGATE, 7, 3, None, None, None)
    a = run_check("hsop-independence", cfg).to_json(include_timing=False)
    b = run_check("hsop-independence", cfg).to_json(include_timing=False)
    assert a == b


def test_failing_report_carries_reproducer():
    rep = verify_generation(build_set("G1", SURROGATE), 6, seed=3)
    d = rep.to_dict()
    assert d["status"] == "fail"
    assert d["reproducer"]["item"] == "m=(0, 3, 3)"
    assert isinstance(d["reproducer"]["seed"], int)
    assert rep.exit_code == 1


def test_every_check_is_registered():
    assert set(CHECKS) == {"generators", "generation", "minimality", "hsop-independence", "hsop-cases",
                           "nullcone", "rewrite-suite", "counts", "teranishi", "lemma2-identities"}


def test_console_module():
    proc = subprocess.run([sys.executable, "-m", "trinv", "rewrite", "x2 x1 x2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.strip() == "- x1 x2^2 - x2^2 x1"
