import json
import subprocess
import sys

import numpy as np
import pytest


def ppsim(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "ppsim", *args], capture_output=True, text=True, cwd=cwd, timeout=120
    )


def test_list():
    r = ppsim("list")
    assert r.returncode == 0
    assert "three_box" in r.stdout and "mermin_square" in r.stdout


def test_scenario_three_box_json():
    r = ppsim("scenario", "three_box", "--format", "json")
    assert r.returncode == 0
    d = json.loads(r.stdout)
    pc = [e for e in d["entries"] if e["kind"] == "weak" and e["target"] == "P_C"]
    assert pc[0]["computed"] == pytest.approx(-1, abs=1e-12)


def test_scenario_ghz():
    r = ppsim("scenario", "ghz")
    assert r.returncode == 0
    d = json.loads(r.stdout)
    nppp = [e for e in d["entries"] if e["target"] == "N+++"]
    assert nppp[0]["computed"] == pytest.approx(-0.25, abs=1e-12)


def test_scenario_failure_exit_code():
    r = ppsim("scenario", "mermin_nonet_a", "--format", "csv")
    assert r.returncode == 1
    assert "FAIL sequential" in r.stderr
    assert r.stdout.startswith("kind,target,expected,computed,error,pass")


def test_scenario_unknown():
    r = ppsim("scenario", "nope")
    assert r.returncode == 2
    assert "nope" in r.stderr


def test_scenario_output_file(tmp_path):
    out = tmp_path / "r.json"
    r = ppsim("scenario", "epr_ancilla", "--output", str(out))
    assert r.returncode == 0
    assert json.loads(out.read_text())["overall"] is True


def test_weakmeas_files_and_estimate(tmp_path):
    out = tmp_path / "pc.csv"
    r = ppsim("weakmeas", "three_box", "P_C", "--lambda", "0.1", "--samples", "1000000", "--seed", "42",
              "--output", str(out))
    assert r.returncode == 0, r.stderr
    summary = json.loads(r.stdout)
    assert abs(summary["estimate"] + 1) < 3 * summary["stderr"]
    assert out.read_text().startswith("P,density\n")
    sampled = tmp_path / "pc.sampled.csv"
    assert sampled.read_text().startswith("P,count\n")
    first = sampled.read_bytes()
    r2 = ppsim("weakmeas", "three_box", "P_C", "--lambda", "0.1", "--samples", "1000000", "--seed", "42",
               "--output", str(out))
    assert r2.returncode == 0
    assert sampled.read_bytes() == first


def test_weakmeas_strong_bimodal():
    r = ppsim("weakmeas", "three_box", "P_C", "--lambda", "50")
    assert r.returncode == 0, r.stderr
    rows = np.array([[float(x) for x in line.split(",")] for line in r.stdout.splitlines()[1:]])
    p, d = rows[:, 0], rows[:, 1]
    h = p[1] - p[0]
    near0 = d[np.abs(p) <= 4].sum() * h
    near50 = d[np.abs(p - 50) <= 4].sum() * h
    assert near0 == pytest.approx(0.8, abs=1e-3)
    assert near50 == pytest.approx(0.2, abs=1e-3)


def test_weakmeas_errors():
    assert ppsim("weakmeas", "three_box", "P_C", "--lambda", "0", "--samples", "10").returncode == 3
    assert ppsim("weakmeas", "three_box", "P_C", "--lambda", "5", "--grid-halfwidth", "8").returncode == 3
    assert ppsim("weakmeas", "three_box", "P_Q").returncode == 2
    assert ppsim("weakmeas", "nope", "P_C").returncode == 2


def test_hvt_builtins():
    r = ppsim("hvt", "mermin_square")
    assert r.returncode == 0
    assert "0 assignments / 512; certificate: 6 contexts" in r.stdout
    r = ppsim("hvt", "ghz")
    assert r.returncode == 0
    assert "0 assignments / 64" in r.stdout


def test_hvt_satisfiable_file(tmp_path):
    p = tmp_path / "sat.txt"
    p.write_text("obs A z@0\nobs B z@1\nobs C z@0 z@1\nctx +1 A B C\n")
    r = ppsim("hvt", str(p))
    assert r.returncode == 0
    assert r.stdout.splitlines()[-5].startswith("4 assignments / 8")


def test_hvt_parse_error(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("obs A z@0\nfrobnicate\n")
    r = ppsim("hvt", str(p))
    assert r.returncode == 2
    assert "line 2" in r.stderr
