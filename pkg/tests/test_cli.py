import json
import subprocess
import sys

import pytest

from belavin.checks import REGISTRY, CheckReport, RunConfig, run_all, run_check, strip_wall_time
from belavin.cli import main


def test_registry_has_all_checks():
    assert set(REGISTRY) == {"theta", "ybe", "unitarity", "crossing", "re", "dual-re", "face-vertex", "duals",
                             "detformula", "appendix40", "lyb", "linv", "closedform", "commute-t", "trig-limit",
                             "hamiltonian", "family-commute", "poisson", "flow", "scaling"}


def test_check_ybe_passes(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "ybe", "--n", "3", "--seed", "42", "--samples", "20", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["passed"] and rep["max_residual"] < 1e-9


def test_commute_t_n2_passes(tmp_path):
    assert main(["check", "commute-t", "--n", "2", "--seed", "7", "--out", str(tmp_path / "r.json")]) == 0


def test_unknown_check_exit_2_and_no_file(tmp_path):
    out = tmp_path / "r.json"
    assert main(["check", "nope", "--out", str(out)]) == 2
    assert not out.exists()


def test_degenerate_exit_3(tmp_path):
    assert main(["check", "ybe", "--eta", "0,0", "--out", str(tmp_path / "r.json")]) == 3


def test_bad_complex_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["check", "ybe", "--tau", "abc"])
    assert e.value.code == 2


def test_report_round_trip():
    rep = run_check("unitarity", RunConfig(n=2, samples=3))
    again = CheckReport.from_json(rep.to_json())
    assert again.to_json() == rep.to_json()


def test_determinism_modulo_wall_time():
    cfg = RunConfig(n=3, seed=5, samples=3)
    a = strip_wall_time(run_check("face-vertex", cfg).to_dict())
    b = strip_wall_time(run_check("face-vertex", cfg).to_dict())
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_tolerance_override_makes_check_fail():
    rep = run_check("ybe", RunConfig(n=2, samples=2, tol=1e-30))
    assert not rep.passed


def test_all_with_config(tmp_path):
    cfg = tmp_path / "c.json"
    out = tmp_path / "s.json"
    cfg.write_text(json.dumps({"n": 2, "seed": 1, "samples": 2, "only": ["theta", "ybe", "linv"],
                               "checks": {"theta": {"samples": 5}}, "out": str(out)}))
    assert main(["all", "--config", str(cfg)]) == 0
    summary = json.loads(out.read_text())
    assert summary["summary"] == {"theta": True, "ybe": True, "linv": True}
    assert summary["reports"][0]["config"]["samples"] == 5


def test_all_rejects_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert main(["all", "--config", str(cfg)]) == 2


def test_flow_command(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["flow", "--kind", "rational", "--n", "3", "--dt", "1e-3", "--steps", "50", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "t,x_0,x_1,x_2,p_0,p_1,p_2,H,F_2"
    assert len(lines) == 52


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "belavin.cli", "check", "nope"], capture_output=True, text=True)
    assert r.returncode == 2


def test_injected_bug_fails_only_targeted_check(monkeypatch):
    from belavin import vertex
    orig = vertex.crossing_residual
    monkeypatch.setattr(vertex, "crossing_residual", lambda z1, z2, p: orig(z1, z2, p) + 1.0)
    s = run_all(RunConfig(n=2, samples=2), names=["ybe", "unitarity", "crossing"])
    assert s["summary"] == {"ybe": True, "unitarity": True, "crossing": False}
