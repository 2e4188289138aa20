import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from karokit import cli, model


def call(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def value(node):
    return node["value"] if isinstance(node, dict) else node


def test_validate_bundled(capsys):
    code, out, _ = call(capsys, "validate")
    env = json.loads(out)
    assert code == 0 and env["results"]["valid"]
    assert env["spec_sha256"] == model.spec_hash(model.bundled_spec_path())
    assert env["tool"] == "karokit"


def test_validate_bad_spec(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text(model.bundled_spec_path().read_text().replace("total_kg = 85.1", "total_kg = 90.0"))
    code, out, _ = call(capsys, "validate", "--spec", str(bad))
    env = json.loads(out)
    assert code == 1
    assert env["results"]["diagnostics"][0]["field"] == "total_mass"


def test_usage_errors(capsys):
    assert call(capsys)[0] == 2
    assert call(capsys, "fk", "--joints", "0,0")[0] == 2
    assert call(capsys, "nonsense")[0] == 2
    code, out, _ = call(capsys, "fk", "--joints", "0,0", "--format", "json")
    assert code == 2 and json.loads(out)["error"] == "usage"


def test_fk_out_of_range(capsys):
    code, out, _ = call(capsys, "fk", "--joints", "90,0,0,0,0,0", "--format", "json")
    assert code == 1 and json.loads(out)["error"] == "JointRangeError"


def test_fk_home(capsys):
    code, out, _ = call(capsys, "fk", "--joints", "0,0,0,0,0,0")
    pos = [value(v) for v in json.loads(out)["results"]["position_base_m"]]
    assert code == 0 and sum(p * p for p in pos) ** 0.5 <= 1.30


def test_statics_ramp(capsys):
    code, out, _ = call(capsys, "statics", "--case", "ramp40")
    r = json.loads(out)["results"]["ramp40"]
    assert code == 0
    assert r["torque_per_motor_nm"]["value"] == pytest.approx(32.12, rel=0.005)
    assert r["torque_per_motor_nm"]["provenance"] == "published"


def test_statics_csv(capsys):
    code, out, _ = call(capsys, "statics", "--case", "torsion", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "field,value,unit,provenance"
    assert any(line.startswith("torsion.stress_mpa,28.6") for line in lines)


def test_workspace_artifacts_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        code, out, _ = call(capsys, "workspace", "--grid", "15", "--out", str(d))
        assert code == 0
    env = json.loads(out)
    assert env["results"]["max_reach_m"]["value"] == pytest.approx(1.30, abs=0.01)
    names = sorted(p.name for p in a.iterdir())
    assert names == ["workspace.csv", "workspace.json", "workspace_front.svg", "workspace_side.svg",
                     "workspace_top.svg"]
    for name in names:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    for svg in a.glob("*.svg"):
        assert ET.parse(svg).getroot().tag.endswith("svg")


def test_power_profiles(tmp_path, capsys):
    code, out, _ = call(capsys, "power", "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "power.json").exists()
    assert list(tmp_path.glob("*.csv"))


def test_mission_step(tmp_path, capsys):
    code, out, _ = call(capsys, "mission", "--case", "step", "--out", str(tmp_path))
    env = json.loads(out)
    verdicts = [e["verdict"] for e in env["results"]["step"]["elements"]]
    assert verdicts == ["feasible", "infeasible:tipover", "infeasible:reach"]
    by_variant = {k: v["value"] for k, v in env["results"]["max_step_height_by_variant"].items()}
    assert by_variant["two-pair-regular"] >= by_variant["front-pair-regular"] >= by_variant["none"]
    for svg in tmp_path.glob("*.svg"):
        ET.parse(svg)


def test_mission_missing_case(capsys):
    assert call(capsys, "mission", "--case", "no-such-scenario")[0] != 0


def test_ocu_sim_deterministic(capsys):
    args = ("ocu-sim", "--drop", "0.2", "--frames", "200", "--seed", "3")
    _, first, _ = call(capsys, *args)
    _, second, _ = call(capsys, *args)
    assert first == second
    assert json.loads(first)["results"]["summary"]["sent"]["value"] == 200


def test_ocu_sim_teleop(capsys):
    code, out, _ = call(capsys, "ocu-sim", "--case", "teleop")
    assert code == 0 and "stale" in out


def test_spec_env_var(tmp_path, monkeypatch, capsys):
    spec = tmp_path / "alt.toml"
    spec.write_text(model.bundled_spec_path().read_text())
    monkeypatch.setenv("KARO_SPEC", str(spec))
    env = json.loads(call(capsys, "validate")[1])
    assert env["inputs"]["spec"].endswith("alt.toml") or env["spec_sha256"] == model.spec_hash(spec)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "karokit", "statics", "--case", "torsion"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["subcommand"] == "statics"
