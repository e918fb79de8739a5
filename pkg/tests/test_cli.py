import csv
import io
import json
import subprocess
import sys

import pytest

from trispectrum.cli import main, run


def _json(argv):
    status, out = run(argv + ["--output", "json"])
    return status, json.loads(out)


def test_spectrum_37():
    status, doc = _json(["spectrum", "--p", "3", "--q", "7"])
    assert status == 0
    assert doc["schema"] == "spectrum/1"
    assert len(doc["entries"]) == 1
    assert doc["entries"][0]["label"] == "l2(1,q-1)"
    assert doc["entries"][0]["value"] == pytest.approx(0.983987, abs=1e-6)


def test_systole_collision():
    _, a = _json(["systole", "--p", "5", "--q", "5"])
    _, b = _json(["systole", "--p", "3", "--q", "10"])
    assert a["value"] == pytest.approx(b["value"], abs=1e-12)


def test_scan_two_collisions():
    status, doc = _json(["scan", "--p-max", "15", "--q-max", "15"])
    assert status == 0 and doc["schema"] == "scan/1"
    assert len(doc["collisions"]) == 2


def test_scan_csv():
    _, out = run(["scan", "--output", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["pA"], r["qA"], r["pB"], r["qB"]) for r in rows] == [("3", "10", "5", "5"), ("3", "12", "4", "12")]


def test_rho_and_ball_export(tmp_path):
    path = tmp_path / "ball.json"
    status, doc = _json(["rho", "--p", "4", "--q", "7", "--export-ball", str(path)])
    assert status == 0
    assert doc["case"] == "d12" and doc["delta"] < 1e-9
    ball = json.loads(path.read_text())
    assert ball["schema"] == "tiling-ball/1" and len(ball["vertices"]) == doc["ball_vertices"]


def test_levels():
    status, doc = _json(["levels", "--p", "12", "--q", "13"])
    assert status == 0 and doc["holds"] is True


def test_oracle_match_and_incomplete():
    status, doc = _json(["oracle", "--p", "4", "--q", "6", "--word-len", "10"])
    assert status == 0 and doc["verdict"] == "match" and doc["schema"] == "oracle-report/1"
    status, doc = _json(["oracle", "--p", "11", "--q", "11", "--word-len", "4"])
    assert status == 2 and doc["verdict"] == "incomplete"


def test_tolerance_overrides_are_echoed():
    _, doc = _json(["spectrum", "--p", "4", "--q", "5", "--tol", "classify=1e-8", "--tol", "value_merge=1e-11"])
    assert doc["tolerance_overrides"] == {"classify": 1e-8, "value_merge": 1e-11}


def test_byte_stable():
    assert run(["spectrum", "--p", "5", "--q", "7", "--output", "json"]) == run(["spectrum", "--p", "5", "--q", "7", "--output", "json"])


def test_floats_round_trip():
    _, out = run(["spectrum", "--p", "4", "--q", "6", "--output", "csv"])
    from trispectrum import spectrum_begin

    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["value"]) for r in rows] == spectrum_begin((4, 6)).values


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["spectrum", "--p", "3", "--q", "6"], "not hyperbolic"),
        (["spectrum", "--p", "7", "--q", "3"], "p <= q"),
        (["spectrum", "--p", "3"], "--q"),
        (["systole", "--p", "3", "--q", "7", "--tol", "bogus=1e-9"], "unknown tolerance"),
        (["systole", "--p", "3", "--q", "7", "--tol", "classify=0.5"], "outside"),
        (["oracle", "--p", "3", "--q", "7", "--word-len", "30"], "word-len"),
        (["frobnicate"], "invalid choice"),
    ],
)
def test_usage_errors(argv, fragment, capsys):
    assert main(argv) == 1
    assert fragment in capsys.readouterr().err


def test_output_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("TRISPECTRUM_OUTPUT_DIR", str(tmp_path))
    status, out = run(["systole", "--p", "4", "--q", "5", "--output", "json"])
    assert (tmp_path / "systole-4-5.json").read_text() == out


def test_text_output():
    _, out = run(["systole", "--p", "4", "--q", "5"])
    assert out.startswith("tolerance_overrides:")
    assert "label: l1(2)" in out


def test_verify_subset():
    status, doc = _json(["verify", "--only", "3", "--only", "5"])
    assert status == 0 and doc["passed"] == doc["total"] == 2


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "trispectrum", "systole", "--p", "3", "--q", "7", "--output", "csv"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.splitlines()[0] == "label,value,cosh_half"
