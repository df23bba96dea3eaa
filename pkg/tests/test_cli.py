"""End-to-end CLI runs with tiny workloads."""

import json
import os

import numpy as np
import pytest

from bubblepair.cli import main

FAST = [
    "--rtol", "1e-8", "--atol", "1e-10",
    "--transient", "60", "--measure", "300",
]


def run(args, tmp_path, name="out"):
    out = str(tmp_path / name)
    code = main(args + ["--out", out])
    return code, out


def test_analyze_roundtrip(tmp_path):
    code, out = run(
        ["analyze", "--pac", "1.2e6", "--d-ratio", "13", "--eps", "1.0",
         "--state", "1.0,0.0,1.0,0.0", "--threads", "2"] + FAST,
        tmp_path,
    )
    assert code == 0
    rec = json.loads(open(os.path.join(out, "analyze.json")).read())[0]
    assert rec["class"] == "periodic"
    assert rec["sync"] == "sync"
    assert rec["period"] == 4
    man = json.loads(open(os.path.join(out, "manifest.json")).read())
    assert man["jobs"][0]["status"] in ("ok", "unconverged")
    assert man["config"]["physical"]["eps"] == 1.0
    assert os.path.exists(os.path.join(out, "poincare.csv"))


def test_validation_error_exit_code(tmp_path, capsys):
    code = main(["analyze", "--eps", "-0.5", "--state", "1,0,1,0",
                 "--out", str(tmp_path / "x")])
    assert code == 2
    assert "eps" in capsys.readouterr().err


def test_missing_state_is_validation_error(tmp_path):
    code, _ = run(["analyze"], tmp_path)
    assert code == 2


def test_numerical_breakdown_exit_code(tmp_path):
    code, out = run(
        ["analyze", "--pac", "0", "--d-ratio", "21",
         "--state", "0.005,0.0,1.0,0.0"] + FAST,
        tmp_path,
    )
    assert code == 3
    man = json.loads(open(os.path.join(out, "manifest.json")).read())
    assert "failed" in man["jobs"][0]["status"]


def test_flag_overrides_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "physical": {"eps": 1.01, "p_ac": 1.2e6, "d_ratio": 13},
        "analyze": {"state": [1.0, 0.0, 1.0, 0.0]},
        "analysis": {"transient_periods": 60, "measure_periods": 300},
        "integrator": {"rtol": 1e-8, "atol": 1e-10},
    }))
    code, out = run(["analyze", "--config", str(cfg), "--eps", "1.02"], tmp_path)
    assert code == 0
    man = json.loads(open(os.path.join(out, "manifest.json")).read())
    assert man["config"]["physical"]["eps"] == 1.02


def test_poincare_csv_written(tmp_path):
    code, out = run(
        ["poincare", "--pac", "1.2e6", "--d-ratio", "13",
         "--state", "1.0,0.0,1.0,0.0", "--skip", "50", "--collect", "12",
         "--rtol", "1e-8", "--atol", "1e-10"],
        tmp_path,
    )
    assert code == 0
    lines = open(os.path.join(out, "poincare.csv")).read().splitlines()
    assert lines[0] == "k,r1,u1,r2,u2"
    assert len(lines) == 13


def test_sweep_eps_cli(tmp_path):
    seeds = tmp_path / "seeds.json"
    seeds.write_text(json.dumps([{"label": "cycle", "state": [1.0, 0.0, 1.0, 0.0]}]))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "analysis": {"transient_periods": 200, "measure_periods": 800,
                     "conv_tol": 5e-3, "poincare_collect": 100},
        "integrator": {"rtol": 1e-8, "atol": 1e-10},
    }))
    code, out = run(
        ["sweep-eps", "--config", str(cfg), "--pac", "1.2e6", "--d-ratio", "13",
         "--from", "0.9995", "--to", "1.0005", "--step", "5e-4",
         "--seeds", str(seeds), "--threads", "2"],
        tmp_path,
    )
    assert code == 0
    lines = open(os.path.join(out, "sweep.csv")).read().splitlines()
    assert lines[0].startswith("branch,arm,eps,lambda1")
    assert len(lines) == 1 + 4  # two arms, each with start + one step


def test_chart_cli(tmp_path):
    state = tmp_path / "state.json"
    state.write_text(json.dumps({"state": [1.0, 0.0, 1.0, 0.0]}))
    code, out = run(
        ["chart", "--x", "d_ratio:12.9:13.1:2", "--y", "pac:1.15e6:1.25e6:2",
         "--seed", f"13.0,1.2e6,{state}", "--threads", "2"] + FAST,
        tmp_path,
    )
    assert code == 0
    lines = open(os.path.join(out, "chart.csv")).read().splitlines()
    assert len(lines) == 1 + 4
    man = json.loads(open(os.path.join(out, "manifest.json")).read())
    assert man["jobs"][0]["failed_cells"] == 0


def test_probe_cli(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "analysis": {"transient_periods": 200, "measure_periods": 800,
                     "conv_tol": 5e-3, "poincare_collect": 100},
        "integrator": {"rtol": 1e-8, "atol": 1e-10},
    }))
    code, out = run(
        ["probe", "--config", str(cfg), "--pac", "1.2e6", "--d-ratio", "13",
         "--n-random", "2", "--rng-seed", "42", "--threads", "2"],
        tmp_path,
    )
    assert code == 0
    recs = json.loads(open(os.path.join(out, "probe.json")).read())
    assert len(recs) >= 1


def test_manifest_rerun_reproduces_outputs(tmp_path):
    args = ["poincare", "--pac", "1.2e6", "--d-ratio", "13",
            "--state", "1.0,0.0,1.0,0.0", "--skip", "40", "--collect", "8",
            "--rtol", "1e-8", "--atol", "1e-10"]
    code1, out1 = run(args, tmp_path, "a")
    assert code1 == 0
    manifest = os.path.join(out1, "manifest.json")
    code2 = main(["poincare", "--config", manifest, "--out", str(tmp_path / "b")])
    assert code2 == 0
    a = open(os.path.join(out1, "poincare.csv"), "rb").read()
    b = open(os.path.join(tmp_path / "b", "poincare.csv"), "rb").read()
    assert a == b
