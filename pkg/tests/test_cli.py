import io
import json
import subprocess
import sys

import pytest

from partition_bounds.cli import main
from partition_bounds.harness import validate_report


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_exact():
    assert run("exact", "--n", "10") == (0, "42\n")
    code, text = run("exact", "--n", "10", "--format", "json")
    assert json.loads(text) == {"n": 10, "p": "42"}


def test_coeffs():
    code, text = run("coeffs", "--kind", "ratio", "--k", "1", "--N", "3", "--format", "json")
    data = json.loads(text)
    assert code == 0 and data["cutoff"] == 529 and len(data["coefficients"]) == 4
    assert data["coefficients"][0].startswith("1.000")
    assert float(data["error_constant"]) == pytest.approx(118.5083972, rel=1e-8)
    code, text = run("coeffs", "--kind", "inverse", "--N", "2", "--format", "csv")
    assert code == 0 and text.splitlines()[0] == "index,coefficient"


def test_approx():
    code, text = run("approx", "--n", "600", "--k", "1", "--N", "1")
    assert code == 0 and json.loads(text)["status"] == "pass"
    code, text = run("approx", "--kind", "inverse", "--n", "50", "--N", "2", "--format", "text")
    assert code == 0 and "status: pass" in text
    code, text = run("approx", "--kind", "shift", "--n", "3000", "--k", "2", "--N", "3", "--format", "csv")
    assert code == 0 and "status,pass" in text


def test_verify_json_validates(tmp_path):
    code, text = run("verify", "--suite", "main_theorem", "--k-max", "1", "--N-max", "1", "--samples", "3",
                     "--cache", str(tmp_path / "p.bin"))
    assert code == 0
    validate_report(json.loads(text))


def test_verify_text_and_csv():
    code, text = run("verify", "--suite", "log_concavity", "--n-max", "60", "--format", "text")
    assert code == 0 and text.startswith("suite log_concavity at 256 bits: 35 pass")
    code, text = run("verify", "--suite", "log_concavity", "--n-max", "40", "--format", "csv")
    assert text.splitlines()[0] == "n,lhs,rhs,margin,status"


def test_violation_exit_code(monkeypatch):
    from partition_bounds import harness

    # below 26 log-concavity fails at odd n
    monkeypatch.setitem(harness.SUITE_DEFAULTS, "log_concavity", {"n_min": 20, "n_max": 30})
    code, text = run("verify", "--suite", "log_concavity", "--format", "text")
    assert code == 1 and "fail" in text


def test_tightness():
    code, text = run("tightness", "--suite", "main_theorem", "--k-max", "1", "--N-max", "1", "--samples", "3",
                     "--format", "csv")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "k,N,n,ratio,flagged" and len(lines) == 5
    code, text = run("tightness", "--suite", "main_theorem", "--k-max", "0", "--format", "json")
    assert code == 0 and json.loads(text)["rows"] == []


@pytest.mark.parametrize("argv", [
    ["exact"],
    ["frobnicate"],
    ["exact", "--n", "5", "--bits", "32"],
    ["exact", "--n", "5", "--bits", "512", "--max-bits", "256"],
    ["approx", "--n", "100", "--k", "1", "--N", "1"],
    ["coeffs", "--kind", "shift", "--N", "2"],
    ["verify", "--suite", "lehmer", "--seed", "4"],
    ["exact", "--n", "-3"],
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "partition_bounds", "exact", "--n", "100"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "190569292\n"
