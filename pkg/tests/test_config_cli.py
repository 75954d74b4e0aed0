import json
import math

import numpy as np
import pytest

from qactive.cli import main, parse_overrides
from qactive.config import ConfigError, load_config, parse_angle, preset_config
from qactive.experiment import thin_schedule
from qactive.outputs import fmt, read_density_2d


def test_angle_strings():
    assert parse_angle("pi/8") == math.pi / 8
    assert parse_angle("3pi/4") == pytest.approx(3 * math.pi / 4)
    assert parse_angle("-pi") == -math.pi
    assert parse_angle("0.25") == 0.25
    assert parse_angle(1) == 1.0
    with pytest.raises(ConfigError):
        parse_angle("tau/2")


def test_fig7_preset():
    cfg = preset_config("fig7")
    assert cfg.dimension == 1 and cfg.extent_x == 801
    assert cfg.delta_x == 19 and cfg.steps == 400
    assert cfg.theta0 == math.pi / 8 and (cfg.alpha, cfg.beta) == (1.0, 0.025)
    assert cfg.snapshot_schedule() == list(range(401))


def test_fig10_preset():
    cfg = preset_config("fig10")
    assert cfg.lattice.shape == (71, 71)
    assert cfg.delta == (9, 0) and cfg.k == (0.0, math.pi)
    assert (cfg.alpha, cfg.beta, cfg.steps) == (0.5, 0.05, 100)
    assert len(cfg.snapshot_schedule()) == 21


def test_even_extent_names_field():
    with pytest.raises(ConfigError) as info:
        load_config({"lattice.extent_x": 400})
    assert info.value.key == "lattice.extent_x"


@pytest.mark.parametrize("mapping,key", [
    ({"lattice.extnt_x": 401}, "lattice.extnt_x"),
    ({"params.g": 25.0}, "params.g"),
    ({"initial.target_re": 0.5}, "initial.target_re"),
    ({"survival.x_lo": -300}, "survival.x_lo"),
    ({"steps": 1.5}, "steps"),
    ({"dimension": 3}, "dimension"),
    ({"preset": "fig99"}, "preset"),
])
def test_validation_errors(mapping, key):
    with pytest.raises(ConfigError) as info:
        load_config(mapping)
    assert info.value.key == key


def test_bad_json():
    with pytest.raises(ConfigError):
        load_config("{not json")


@pytest.mark.parametrize("name", ["fig3", "fig4", "fig5", "fig6", "fig7", "fig9", "fig10", "fig11"])
def test_round_trip(name):
    cfg = preset_config(name)
    again = load_config(cfg.to_json())
    assert again == cfg
    assert again.to_json() == cfg.to_json()


def test_config_file_and_manifest(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"preset": "fig7", "params.g": 1, "params.theta0": "pi/8"}))
    cfg = load_config(path)
    assert cfg.g == 1.0 and cfg.extent_x == 801
    manifest = {"config": cfg.to_dict(), "version": "x", "wall_time_s": 1.0}
    assert load_config(manifest) == cfg


def test_overrides_parse_json_values():
    assert parse_overrides(["--params.g", "1", "--params.theta0=pi/8", "--sweep.g", "[0, 1]"]) == {
        "params.g": 1, "params.theta0": "pi/8", "sweep.g": [0, 1]}
    with pytest.raises(ConfigError):
        parse_overrides(["--no.such", "1"])


def test_thin_schedule_keeps_ends():
    kept = thin_schedule(list(range(1001)), 200)
    assert len(kept) == 200 and kept[0] == 0 and kept[-1] == 1000


def test_number_format_round_trips():
    for v in (0.1, 1 / 3, 1e-300, -2.5e17):
        assert float(fmt(v)) == v
    assert fmt(7) == "7" and fmt(None) == ""


def test_cli_fig3(tmp_path, capsys):
    assert main(["run", "--preset", "fig3", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "spectrum_g1.csv").read_text().splitlines()
    assert rows[0] == "re,im,abs" and len(rows) == 85
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["config"]["preset"] == "fig3"


def test_cli_spectrum_subcommand(tmp_path):
    assert main(["spectrum", "--preset", "fig7", "--lattice.extent_x", "11", "--spectrum.g", "[2]",
                 "--out", str(tmp_path)]) == 0
    assert (tmp_path / "spectrum_g2.csv").exists()


def test_cli_run_1d_outputs(tmp_path):
    out = tmp_path / "r"
    assert main(["run", "--preset", "fig7", "--steps", "4", "--params.g", "1", "--out", str(out)]) == 0
    header = (out / "records.csv").read_text().splitlines()[0].split(",")
    assert header[:4] == ["T", "total_probability", "mean_x", "sd_x"]
    assert "survival" in header and "mean_x_E" in header
    dens = (out / "density_4.csv").read_text().splitlines()
    assert dens[0] == "x,P_G,P_E,P" and len(dens) == 802
    pair = json.loads((out / "eigenpair.json").read_text())
    assert set(pair) >= {"eigenvalue", "residual", "target", "iterations"}
    assert pair["residual"] < 1e-10


def test_cli_run_2d_outputs(tmp_path):
    out = tmp_path / "r2"
    argv = ["run", "--preset", "fig10", "--lattice.extent_x", "15", "--lattice.extent_y", "15",
            "--initial.delta_x", "3", "--steps", "5", "--out", str(out)]
    assert main(argv) == 0
    header = (out / "records.csv").read_text().splitlines()[0].split(",")
    assert header[:6] == ["T", "total_probability", "mean_x", "sd_x", "mean_y", "sd_y"]
    assert "survival" not in header
    x, y, p = read_density_2d(out / "density_5.csv")
    assert p.shape == (15, 15) and x[0] == -7 and y[-1] == 7


def test_cli_reruns_identical(tmp_path):
    argv = ["run", "--preset", "fig7", "--steps", "3", "--params.g", "1"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b")]) == 0
    for name in ("records.csv", "density_3.csv", "eigenpair.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_cli_survival_sweep(tmp_path):
    argv = ["run", "--preset", "fig5", "--steps", "20", "--sweep.g", "[0, 1]", "--sweep.delta_x", "[9]",
            "--out", str(tmp_path)]
    assert main(argv) == 0
    rows = (tmp_path / "survival_sweep.csv").read_text().splitlines()
    assert rows[0].startswith("delta_x,g,survival") and len(rows) == 3


def test_cli_pump(tmp_path, capsys):
    assert main(["pump", "--g", "1", "--t-max", "60", "--out", str(tmp_path)]) == 0
    data = np.loadtxt(tmp_path / "pump_g1.csv", delimiter=",", skiprows=1)
    assert data[-1, 3] == pytest.approx(math.exp(4), rel=1e-6)


@pytest.mark.parametrize("argv,code", [
    (["run", "--preset", "fig7", "--lattice.extent_x", "400"], 2),
    (["run", "--preset", "fig7", "--bogus", "1"], 2),
    (["run", "--config", "/nonexistent/cfg.json"], 2),
    (["run", "--preset", "fig3", "--out", "/proc/forbidden/x"], 5),
    (["run", "--preset", "fig4", "--lattice.extent_x", "201", "--solver.max_distance", "1e-15",
      "--out", "{tmp}"], 3),
])
def test_exit_codes(argv, code, tmp_path):
    argv = [a.replace("{tmp}", str(tmp_path)) for a in argv]
    assert main(argv) == code


def test_blow_up_exit_code(tmp_path, monkeypatch):
    import qactive.experiment as experiment
    from qactive.observables import NumericalBlowUp

    def explode(*args, **kwargs):
        raise NumericalBlowUp(7)

    monkeypatch.setattr(experiment, "evolve_and_record", explode)
    assert main(["run", "--preset", "fig4", "--lattice.extent_x", "201", "--out", str(tmp_path)]) == 4
