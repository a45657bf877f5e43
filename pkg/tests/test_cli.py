import json

import pytest

from sectorflow import cli
from sectorflow.presets import PRESETS, list_presets


def manifest(path):
    return json.loads((path / "manifest.json").read_text())


def write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return p


def test_list_presets(capsys):
    assert cli.main(["list-presets"]) == 0
    text = capsys.readouterr().out
    assert len(PRESETS) >= 6
    for name in PRESETS:
        assert name in text
    assert text.strip() == list_presets().strip()


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_resolves(name):
    p = PRESETS[name]
    assert p["command"] in cli.COMMANDS
    cfg = cli.resolve_config(p["command"], p["config"])
    assert set(cfg) == set(cli.SCHEMAS[p["command"]])


def test_equilibria_preset_passes(tmp_path):
    assert cli.run("equilibria", preset="equilibria", out=tmp_path) == 0
    m = manifest(tmp_path)
    assert m["exit_code"] == 0 and all(c["passed"] for c in m["checks"])
    assert {"rotating_family.csv", "sweep.json"} <= set(m["artifacts"])


def test_cusp_preset_names_collapsing_angle(tmp_path):
    assert cli.run("cusp", preset="cusp", out=tmp_path) == 0
    rows = (tmp_path / "cusp_classification.csv").read_text().splitlines()
    assert rows[0].startswith("index,zeta1_0")
    first = rows[1].split(",")
    assert first[4] == "cusp_zeta1" and first[5] == "zeta1"
    assert abs(float(first[6]) - 0.5) < 0.025


def test_angles_config_file(tmp_path):
    cfg = write(tmp_path, {"m": 4, "zetas": [0.4, 0.2], "gaps": [0.1], "t_end": 1.0, "dt": 0.01})
    assert cli.run("angles", config=cfg, out=tmp_path / "o") == 0
    header = (tmp_path / "o" / "angles.csv").read_text().splitlines()[0]
    assert header == "t,beta1,zeta1,zeta2,gamma1"


def test_portrait_small_grid(tmp_path):
    cfg = write(tmp_path, {"resolution": 16, "t_end": 60.0})
    assert cli.run("portrait", config=cfg, out=tmp_path / "o") == 0
    assert len((tmp_path / "o" / "portrait.csv").read_text().splitlines()) == 16 * 16 + 1


@pytest.mark.parametrize("data,needle", [
    ('{"m": 4, "zetas": [0.4, 0.2],\n "gaps": [0.1,]}', "line 2, column 15"),
    ({"m": 2}, "'m'"),
    ({"dt": -1.0}, "'dt'"),
    ({"zetas": "wide"}, "'zetas'"),
    ({"bogus": 1}, "'bogus'"),
])
def test_bad_config_exits_2_and_names_field(tmp_path, capsys, data, needle):
    cfg = write(tmp_path, data)
    code = cli.run("angles", config=cfg, out=tmp_path / "o")
    assert code == 2
    assert needle in capsys.readouterr().err
    m = manifest(tmp_path / "o")
    assert m["exit_code"] == 2 and needle in m["error"]


def test_unknown_and_mismatched_presets(tmp_path):
    assert cli.run("cusp", preset="nope", out=tmp_path / "a") == 2
    assert cli.run("cusp", preset="portrait", out=tmp_path / "b") == 2


def test_failed_check_exits_1_with_manifest(tmp_path):
    cfg = write(tmp_path, {"initial": [[0.5853981633974483, 0.2, 0.3]], "t_end": 100.0, "rate_tol": 0.0})
    assert cli.run("cusp", config=cfg, out=tmp_path / "o") == 1
    m = manifest(tmp_path / "o")
    assert m["exit_code"] == 1
    assert not all(c["passed"] for c in m["checks"])


def test_halt_exits_3_with_partial_artifacts(tmp_path, monkeypatch):
    from sectorflow.contour import experiment

    real = experiment.run_spiral_experiment

    def halting(params):
        rec = real(params)
        rec.status, rec.message = "halted", "self-intersection at t=0.01"
        return rec

    monkeypatch.setattr(experiment, "run_spiral_experiment", halting)
    cfg = write(tmp_path, {"t_end": 0.01, "dt": 2.5e-3, "sample_every": 2, "min_slope": -1.0})
    assert cli.run("spiral", config=cfg, out=tmp_path / "o") == 3
    m = manifest(tmp_path / "o")
    assert m["exit_code"] == 3 and "self-intersection" in m["error"]
    assert "trajectory.csv" in m["artifacts"]


def test_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SECTORFLOW_OUT", str(tmp_path / "env"))
    assert cli.main(["equilibria", "--config", str(write(tmp_path, {"sweep_divisions": 8}))]) == 0
    assert (tmp_path / "env" / "manifest.json").exists()


def test_reruns_are_byte_identical(tmp_path):
    cfg = write(tmp_path, {"initial": [[0.5853981633974483, 0.2, 0.3]], "t_end": 20.0, "sample_dt": 0.5})
    for d in ("a", "b"):
        cli.run("cusp", config=cfg, out=tmp_path / d, seed=3)
    for name in ("cusp_classification.csv", "cusp_trajectories.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
