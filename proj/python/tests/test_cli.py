import json
import os
import subprocess
from pathlib import Path

import pytest

BIN = os.environ.get("KREIN_BIN", str(Path(__file__).resolve().parents[2] / "build" / "krein"))

SWEEP = {
    "family": "Point1D",
    "centers": [[-5], [5]],
    "couplings_lambda": [1, 1],
    "degenerate": True,
    "sweep": {"variable": "a", "from": 4, "to": 12, "steps": 5},
}


def run(tmp_path, cfg, *args, env=None, raw=None):
    path = tmp_path / "cfg.json"
    path.write_text(raw if raw is not None else json.dumps(cfg), encoding="utf-8")
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args, "--config", str(path)], capture_output=True, text=True, env=full_env)


def test_sweep_csv_format(tmp_path):
    r = run(tmp_path, SWEEP, "sweep")
    assert r.returncode == 0, r.stderr
    assert "\r" not in r.stdout
    lines = r.stdout.split("\n")
    assert lines[0] == "a,delta_exact,delta_perturbative,rel_error"
    assert lines[-1] == ""
    rows = [l.split(",") for l in lines[1:-1]]
    assert len(rows) == 5
    assert [float(x[0]) for x in rows] == [4, 6, 8, 10, 12]
    errs = [float(x[3]) for x in rows]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.05
    # 17 significant digits round-trip
    for x in rows[0][1:]:
        assert float(repr(float(x))) == float(x)
        assert len(x.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) >= 15


def test_sweep_bit_stable_across_thread_counts(tmp_path):
    a = run(tmp_path, SWEEP, "sweep", env={"KREIN_THREADS": "1"}).stdout
    b = run(tmp_path, SWEEP, "sweep", env={"KREIN_THREADS": "4"}).stdout
    c = run(tmp_path, SWEEP, "sweep").stdout
    assert a == b == c


def test_out_file(tmp_path):
    out = tmp_path / "o.csv"
    r = run(tmp_path, SWEEP, "sweep", "--out", str(out))
    assert r.returncode == 0
    assert out.read_bytes().startswith(b"a,delta_exact")


def test_solve_json(tmp_path):
    r = run(tmp_path, SWEEP, "solve")
    assert r.returncode == 0, r.stderr
    doc = json.loads(r.stdout)
    assert doc["command"] == "solve"
    assert len(doc["energies"]) == 2
    assert doc["energies"][0] < -0.25 < doc["energies"][1]


def test_split_degenerate(tmp_path):
    doc = json.loads(run(tmp_path, SWEEP, "split").stdout)
    assert doc["mode"] == "degenerate"
    assert doc["degenerate"]["relative_error"] < 0.01


def test_wavefunction_csv(tmp_path):
    cfg = dict(SWEEP)
    del cfg["sweep"]
    cfg["wavefunction"] = {"lower": [-8], "upper": [8], "points": [33]}
    r = run(tmp_path, cfg, "wavefunction")
    assert r.returncode == 0, r.stderr
    lines = r.stdout.strip("\n").split("\n")
    assert len(lines) == 34
    vals = [float(l.split(",")[1]) for l in lines[1:]]
    assert vals[0] == pytest.approx(vals[-1], rel=1e-12)


@pytest.mark.parametrize(
    "raw,path",
    [
        ('{"family": "Point3D", "bogus": 1}', "/bogus"),
        ('{"family": "Nope"}', "/family"),
        ('{"family": "Point1D",\n "centers": [[0]],\n "couplings_lambda": [1], "tol": 5}', "/tol"),
        ('{"family": ', ""),
    ],
)
def test_config_errors_exit_2(tmp_path, raw, path):
    r = run(tmp_path, None, "solve", raw=raw)
    assert r.returncode == 2
    err = json.loads(r.stderr)
    assert err["exit_code"] == 2
    assert err["path"] == path
    assert "message" in err


def test_tol_line_reported(tmp_path):
    raw = '{"family": "Point1D",\n "centers": [[0]],\n "couplings_lambda": [1],\n "tol": 5}'
    err = json.loads(run(tmp_path, None, "solve", raw=raw).stderr)
    assert err["line"] == 4


def test_kappa_message(tmp_path):
    cfg = {"family": "PointH3", "distance_matrix": [[0, 3], [3, 0]], "binding_energies": [2, 0.5]}
    r = run(tmp_path, cfg, "solve")
    assert r.returncode == 2
    assert "κ² = 1" in json.loads(r.stderr)["message"]


def test_numerical_failure_exit_3(tmp_path):
    cfg = {"family": "Point3D", "centers": [[0, 0, 0]], "binding_energies": [-1], "window": {"e_min": -0.5, "e_max": -0.1}}
    r = run(tmp_path, cfg, "solve")
    assert r.returncode == 3
    err = json.loads(r.stderr)
    assert err["exit_code"] == 3


def test_bad_override(tmp_path):
    r = run(tmp_path, SWEEP, "solve", "--quad-order", "1")
    assert r.returncode == 2


def test_missing_config_file(tmp_path):
    r = subprocess.run([BIN, "solve", "--config", str(tmp_path / "nope.json")], capture_output=True, text=True)
    assert r.returncode == 2
