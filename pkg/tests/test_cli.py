import json
import subprocess
import sys

import pytest

from ksendo import cli
from ksendo.brauer import BrauerResult
from ksendo.errors import ValidationError

from conftest import JOBS, load


def compute(tmp_path, doc, *flags):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(doc))
    out = tmp_path / "report.json"
    code = cli.main(["compute", str(path), "--out", str(out), *flags])
    report = json.loads(out.read_text()) if out.exists() else None
    return code, report


def test_example_one_report(tmp_path):
    code, report = compute(tmp_path, load("ex1"))
    assert code == 0
    assert report["summary"] == "End(KS(X))_Q ≅ Mat_256(Q)"
    (fac,) = report["factors"]
    assert (fac["n"], fac["M"], fac["delta"], fac["stabilizer_order"]) == (8, 256, 1, 24)
    assert report["tower"]["group_order"] == 24
    assert report["identities"]["commutant_dim"] == 256 ** 2


def test_example_two_report(tmp_path):
    code, report = compute(tmp_path, load("ex2"), "--emit", "summary")
    assert code == 0
    assert report["summary"] == "End(KS(X))_Q ≅ Mat_256(Q(√-1)) × Mat_256(Q(√-1, ρ))"
    assert "orbit" not in report["factors"][0]


def test_reports_are_byte_identical(tmp_path):
    path = JOBS / "ex1.json"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["compute", str(path), "--out", str(a)]) == 0
    assert cli.main(["compute", str(path), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_rank_four_is_rejected(tmp_path, capsys):
    doc = load("ex1")
    doc["diag"] = doc["diag"][:4]
    code, report = compute(tmp_path, doc)
    assert code == ValidationError.exit_code and report is None
    err = json.loads(capsys.readouterr().err.strip().splitlines()[0])
    assert err["error"] == "ValidationError" and err["m"] == 4


@pytest.mark.parametrize("mutate", [
    lambda d: d.update(kind="quaternionic"),
    lambda d: d.update(diag=[["x"]] * 5),
    lambda d: d.update(extra=1),
    lambda d: d["options"].update(emit="verbose"),
    lambda d: d["L"].update(min_poly=[-1, 0, 1]),
    lambda d: d.update(theta_sq=["-1"]),
])
def test_malformed_jobs(tmp_path, mutate):
    doc = load("ex1")
    mutate(doc)
    with pytest.raises(ValidationError):
        cli.parse_job(doc)


def test_cm_needs_negative_theta():
    doc = load("cm_m3")
    doc["theta_sq"] = ["2"]
    with pytest.raises(ValidationError):
        cli.parse_job(doc)


def test_rationals_as_strings():
    doc = load("cm_m3")
    doc["diag"] = [["1/2"], ["-3/4"], ["5"]]
    job = cli.parse_job(doc)
    assert str(job.form.diag[1]) == "-3/4"


def test_assume_nonsquare_is_cross_checked():
    doc = load("ex1")
    doc["options"]["assume_nonsquare"] = [["0", "0", "1"]]
    with pytest.raises(ValidationError):
        cli.parse_job(doc)
    doc["options"]["assume_nonsquare"] = [["0", "1"]]
    assert cli.parse_job(doc).assume_nonsquare


def test_group_limit_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("KSENDO_MAX_GROUP", "16")
    code, report = compute(tmp_path, load("ex1"))
    assert code == 3 and report is None


def test_cm_job_with_oracle(tmp_path):
    code, report = compute(tmp_path, load("cm_m3"), "--oracle")
    assert code == 0
    ident = report["identities"]
    assert ident["oracle"]["commutant_dim"] == ident["expected_commutant_dim"] == 64


def test_unresolved_class_has_its_own_exit_code(tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "classify", lambda *a, **k: BrauerResult(None, status="unresolved"))
    code, report = compute(tmp_path, load("ex1"))
    assert code == cli.EXIT_UNRESOLVED
    assert report["status"] == "unresolved"
    assert report["summary"] == "End(KS(X))_Q ≅ Mat_?(unresolved)"


def test_console_entry_point_selftest():
    proc = subprocess.run([sys.executable, "-m", "ksendo", "selftest"], capture_output=True,
                          text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
