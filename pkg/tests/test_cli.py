import json
import subprocess
import sys

import numpy as np
import pytest

from tanhconnect.cli import main

SAWTOOTH = {"domain": {"x0": 0, "xf": 3}, "cuts": [1, 2], "partitions": ["x", "x - 1", "x - 2"]}


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def test_build_then_sample(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    art = str(tmp_path / "a.json")
    assert main(["build", "--in", spec, "--out", art]) == 0
    assert json.loads(open(art).read())["schema_version"] == 1
    out = str(tmp_path / "s.csv")
    assert main(["sample", "--in", art, "--from", "0", "--to", "3", "--points", "7",
                 "--out", out]) == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "x,omega"
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    assert np.allclose(rows[:, 1], [0, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0], atol=1e-15)


def test_sample_accepts_spec_and_is_deterministic(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    assert main(["sample", "--in", spec, "--points", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["sample", "--in", spec, "--points", "5"]) == 0
    assert capsys.readouterr().out == first
    assert first.splitlines()[2] == "0.75,0.75"


def test_sample_single_point(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    assert main(["sample", "--in", spec, "--from", "1", "--to", "2", "--points", "1"]) == 0
    assert capsys.readouterr().out.splitlines() == ["x,omega", "1,0.5"]


@pytest.mark.parametrize("args", [
    ["--from", "2", "--to", "1"],
    ["--from", "-1", "--to", "1"],
    ["--points", "0"],
])
def test_sample_bad_ranges(tmp_path, args):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    assert main(["sample", "--in", spec, *args]) == 2


def test_sample_nonfinite_partition_exits_numeric(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", {"domain": {"x0": 0, "xf": 1}, "cuts": [0.5],
                                          "partitions": ["1/(x - 0.1)", "1"]})
    assert main(["sample", "--in", spec, "--points", "11"]) == 3
    captured = capsys.readouterr()
    assert "0.10000000000000001,nan" in captured.out
    assert "warning" in captured.err


def test_error_command(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    assert main(["error", "--in", spec, "--grid", "31", "--exclude-around", "1.5:0.05",
                 "--out", str(tmp_path / "e.csv")]) == 0
    summary = capsys.readouterr().out
    assert summary.startswith("max_abs=0 ")
    assert "excluded=3" in summary
    header = open(tmp_path / "e.csv").readline().strip()
    assert header == "x,omega,psi,abs_err,rel_err"


def test_error_grid_file(tmp_path, capsys):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    grid = _write(tmp_path, "g.txt", "x\n0.5\n1.5\n2.5\n")
    assert main(["error", "--in", spec, "--grid-file", grid]) == 0
    assert "counted=3" in capsys.readouterr().out
    bad = _write(tmp_path, "b.txt", "0.5\n0.4\n")
    assert main(["error", "--in", spec, "--grid-file", bad]) == 2


@pytest.mark.parametrize("doc,code", [
    ({"domain": {"x0": 0, "xf": 3}, "cuts": [2, 1], "partitions": ["0", "1", "2"]}, 2),
    ({"domain": {"x0": 0, "xf": 3}, "cuts": [1], "partitions": ["sin(", "1"]}, 2),
    ({"domain": {"x0": 0, "xf": 3}, "cuts": [1], "partitions": ["foo", "1"]}, 2),
    ("{not json", 2),
])
def test_build_invalid_input(tmp_path, doc, code, capsys):
    spec = _write(tmp_path, "spec.json", doc)
    assert main(["build", "--in", spec, "--out", str(tmp_path / "a.json")]) == code
    assert "error" in capsys.readouterr().err


def test_io_errors(tmp_path):
    assert main(["build", "--in", str(tmp_path / "missing.json"), "--out", "x.json"]) == 4
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    assert main(["build", "--in", spec, "--out", str(tmp_path / "no" / "dir.json")]) == 4


def test_corrupt_artifact(tmp_path):
    spec = _write(tmp_path, "spec.json", SAWTOOTH)
    art = tmp_path / "a.json"
    main(["build", "--in", spec, "--out", str(art)])
    doc = json.loads(art.read_text())
    doc["s_inverse"][0][0] = 0.25
    art.write_text(json.dumps(doc))
    assert main(["sample", "--in", str(art)]) == 2


def test_delta_command(capsys):
    assert main(["delta", "--f", "sin(x)"]) == 0
    out = dict(line.split("=") for line in capsys.readouterr().out.split())
    assert abs(float(out["e_I"])) <= 1e-9
    assert float(out["I2"]) == pytest.approx(0.3271946968, abs=5e-9)


def test_oscillator_command(tmp_path, capsys):
    out = tmp_path / "o.csv"
    assert main(["oscillator", "--dt", "0.01", "--method", "both", "--out", str(out)]) == 0
    assert float(capsys.readouterr().out.split("=")[1]) <= 1e-5
    assert out.read_text().splitlines()[0] == "t,x_rk4,v_rk4,x_analytic,v_analytic"
    assert main(["oscillator", "--t1", "20", "--t2", "2"]) == 2


def test_usage_errors_exit_2():
    assert main([]) == 2
    assert main(["demo", "nope"]) == 2


def test_module_entry_point_runs_demo():
    proc = subprocess.run([sys.executable, "-m", "tanhconnect", "demo", "sawtooth"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert all(line.startswith("PASS") for line in proc.stdout.splitlines())
