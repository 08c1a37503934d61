import json
import subprocess
import sys

import numpy as np
import pytest
import yaml

from supershift.cli import ExperimentConfig, load_config, main, read_output, run
from supershift.errors import ValidationError


def write_cfg(tmp_path, body, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(yaml.safe_dump(body))
    return str(p)


def body_without_stamp(path):
    lines = open(path).read().splitlines()
    return "\n".join(lines[1:])


def test_synth_csv(tmp_path):
    out = tmp_path / "synth.csv"
    cfg = write_cfg(tmp_path, {"experiment": "synth", "parameters": {"a": 2, "N": 20, "nx": 11}, "output_path": str(out)})
    assert main([cfg]) == 0
    parsed = read_output(str(out))
    assert parsed["columns"] == ["x", "re_F", "im_F", "abs_error", "bound"]
    rows = np.array(parsed["rows"], dtype=float)
    assert rows.shape == (11, 5)
    assert np.all(rows[:, 3] <= rows[:, 4])
    assert parsed["meta"]["summary"]["bound_violations"] == 0
    # 17 significant digits round-trip
    x = rows[:, 0]
    assert np.array_equal(x, np.linspace(-5, 5, 11))


def test_overrides_and_json(tmp_path):
    cfg = write_cfg(tmp_path, {"experiment": "probe", "parameters": {"n": 8}})
    out = tmp_path / "probe.json"
    assert main([cfg, "--output", str(out), "--format", "json", "--seed", "4"]) == 0
    obj = json.loads(out.read_text())
    assert set(obj) == {"generated", "meta", "results"}
    assert obj["meta"]["config"]["seed"] == 4
    assert abs(obj["meta"]["summary"]["exponent"] + 0.5) < 0.02
    read_output(str(out))


def test_fresnel_suite_report(tmp_path):
    out = tmp_path / "fv.json"
    cfg = write_cfg(tmp_path, {"experiment": "fresnel-verify", "parameters": {"n": 2}, "output_format": "json",
                               "output_path": str(out)})
    assert main([cfg]) == 0
    meta = read_output(str(out))["meta"]
    assert meta["summary"]["max_oracle_deviation"] < 1e-6


def test_invalid_chi_exits_1(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"experiment": "fresnel-verify", "parameters": {"chi": -1.5, "phase": 1.0},
                               "output_path": str(tmp_path / "x.csv")})
    assert main([cfg]) == 1
    assert "chi must exceed -1" in capsys.readouterr().err
    assert not (tmp_path / "x.csv").exists()


@pytest.mark.parametrize(
    "body",
    [
        {"experiment": "teleport"},
        {"experiment": "synth", "parameters": {"N": 0}},
        {"experiment": "synth", "parameters": {"bogus": 1}},
        {"experiment": "synth", "colour": "red"},
        {"experiment": "evolve", "parameters": {"mu": 3, "nu": 2}},
        {"experiment": "harmonic", "parameters": {"grid": {"t_min": 0.2, "t_max": 1.6}}},
        {"experiment": "centrifugal", "parameters": {"grid": {"t_min": 0.0}}},
        {"experiment": "probe", "parameters": {"t_list": [0.1, 0.2]}},
        {"experiment": "synth", "output_format": "xml"},
    ],
)
def test_validation_failures_exit_1(tmp_path, body):
    assert main([write_cfg(tmp_path, body)]) == 1


def test_unreadable_config(tmp_path):
    assert main([str(tmp_path / "missing.yaml")]) == 1


def test_numerical_failure_exits_2(tmp_path, monkeypatch):
    from supershift import cli
    from supershift.errors import QuadratureError

    def boom(p, seed):
        def compute():
            raise QuadratureError("refinements disagree")
        return compute

    monkeypatch.setitem(cli._PREPARE, "synth", boom)
    cfg = write_cfg(tmp_path, {"experiment": "synth", "output_path": str(tmp_path / "o.csv")})
    assert main([cfg]) == 2


def test_determinism(tmp_path):
    out = tmp_path / "det.csv"
    cfg = write_cfg(tmp_path, {"experiment": "evolve", "parameters": {"Ns": [10, 20, 40], "grid": {"nt": 3, "nx": 5}},
                               "output_path": str(out)})
    assert main([cfg]) == 0
    first = body_without_stamp(out)
    assert main([cfg]) == 0
    assert body_without_stamp(out) == first


def test_run_with_config_object(tmp_path):
    cfg = ExperimentConfig("harmonic", {"Ns": [10, 20], "grid": {"nt": 3, "nx": 3}}, str(tmp_path / "h.json"), "json")
    assert run(cfg) == 0
    parsed = read_output(cfg.output_path)
    assert [int(r[0]) for r in parsed["rows"]] == [10, 20]


def test_centrifugal_small(tmp_path):
    cfg = ExperimentConfig("centrifugal", {"Ns": [10, 20], "grid": {"nt": 1, "nx": 2}}, str(tmp_path / "c.csv"))
    assert run(cfg) == 0
    rows = read_output(cfg.output_path)["rows"]
    assert float(rows[1][1]) < float(rows[0][1])


def test_read_output_rejects_tampering(tmp_path):
    out = tmp_path / "s.csv"
    run(ExperimentConfig("synth", {"nx": 3}, str(out)))
    lines = out.read_text().splitlines()
    out.write_text("\n".join(lines[:-1] + ["1,2"]) + "\n")
    with pytest.raises(ValidationError):
        read_output(str(out))


def test_load_config_requires_mapping(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("- 1\n- 2\n")
    with pytest.raises(ValidationError):
        load_config(str(p))


def test_module_entry_point(tmp_path):
    cfg = write_cfg(tmp_path, {"experiment": "synth", "parameters": {"nx": 3}, "output_path": str(tmp_path / "m.csv")})
    r = subprocess.run([sys.executable, "-m", "supershift", cfg], capture_output=True, text=True)
    assert r.returncode == 0 and (tmp_path / "m.csv").exists()
