import json

import pytest

from ringcav.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, EXIT_RESOURCE, main
from ringcav.plots import load_csv
from ringcav.runio import verify_outputs

TINY = [
    "--set", "cavity.n_freqs=3",
    "--set", "run.t_end_over_trt=0.5",
]


def test_simulate_single(tmp_path):
    rc = main(["simulate-single", "--out", str(tmp_path)] + TINY)
    assert rc == EXIT_OK
    for name in ("trajectory.csv", "modes.csv", "resolved_config.ini",
                 "trajectory.gp", "trajectory.png", "manifest.json"):
        assert (tmp_path / name).exists(), name
    assert verify_outputs(tmp_path / "manifest.json") == []
    data = load_csv(tmp_path / "trajectory.csv")
    assert set(data) == {"t_Omega0", "t_over_trt", "b1_sq", "b2_sq",
                         "cav_pop", "bs_sq", "ba_sq", "conc"}
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["method"] == "spectral"
    assert manifest["max_norm_drift"] < 1e-9


def test_simulate_double_columns(tmp_path):
    rc = main(["simulate-double", "--out", str(tmp_path), "--no-figure",
               "--set", "initial.preset=ee"] + TINY)
    assert rc == EXIT_OK
    data = load_csv(tmp_path / "trajectory.csv")
    assert set(data) == {"t_Omega0", "t_over_trt", "rho11", "rho22", "rho33",
                         "rho44", "rho23_abs", "c1_paper", "c1_trace",
                         "conc_paper", "conc_trace"}


def test_config_error_exit_code(tmp_path):
    rc = main(["simulate-single", "--out", str(tmp_path), "--set", "cavity.bogus=1"])
    assert rc == EXIT_CONFIG
    rc = main(["simulate-single", "--out", str(tmp_path), "--set", "cavity.n_freqs=4"])
    assert rc == EXIT_CONFIG


def test_resource_cap_exit_code(tmp_path):
    rc = main(["simulate-double", "--out", str(tmp_path),
               "--set", "run.work_cap=1e3"] + TINY)
    assert rc == EXIT_RESOURCE
    # the cap is an override guard, not a wall
    rc = main(["simulate-double", "--out", str(tmp_path), "--no-figure", "--force",
               "--set", "run.work_cap=1e3"] + TINY)
    assert rc == EXIT_OK


def test_norm_drift_exit_code(tmp_path):
    # N=1 has zero detunings, so the rk4 fallback step equals the (huge)
    # output step and the drift guard must trip
    rc = main(["simulate-single", "--out", str(tmp_path), "--no-figure",
               "--set", "cavity.n_freqs=1",
               "--set", "run.method=rk4",
               "--set", "run.t_end_over_trt=10",
               "--set", "run.dt_out_over_trt=0.5"])
    assert rc == EXIT_NUMERICAL


def test_oracle_check(tmp_path, capsys):
    rc = main(["oracle-check", "--samples", "50", "--seed", "7"])
    assert rc == EXIT_OK
    out = capsys.readouterr().out
    assert "within tolerance" in out


def test_spectrum_command(tmp_path):
    rc = main(["spectrum", "--out", str(tmp_path), "--no-figure"] + TINY)
    assert rc == EXIT_OK
    data = load_csv(tmp_path / "spectrum.csv")
    assert set(data) == {"freq_Omega0", "freq_fsr_units", "power"}
    assert verify_outputs(tmp_path / "manifest.json") == []


def test_sweep_command(tmp_path):
    rc = main(["sweep", "--out", str(tmp_path), "--no-figure", "--threads", "2",
               "--set", "cavity.n_freqs=3",
               "--set", "run.t_end_over_trt=2",
               "--set", "analysis.sweep_x_count=3"])
    assert rc == EXIT_OK
    data = load_csv(tmp_path / "sweep.csv")
    assert data["x_over_lambda"].tolist() == [0.0, 0.25, 0.5]
    assert set(data) == {"x_over_lambda", "mean", "min", "max"}


def test_preset_fig3a(tmp_path):
    rc = main(["preset", "fig3a", "--out", str(tmp_path)])
    assert rc == EXIT_OK
    for name in ("fig3a.csv", "fig3a_kinks.csv", "fig3a.png", "fig3a.gp",
                 "modes.csv", "manifest.json"):
        assert (tmp_path / name).exists(), name
    assert verify_outputs(tmp_path / "manifest.json") == []
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["preset"] == "fig3a"
    assert manifest["config"]["cavity"]["n_freqs"] == 99
    # the round-trip revival kinks are recorded near integer t/t_rt
    rows = [line.split(",") for line in
            (tmp_path / "fig3a_kinks.csv").read_text().splitlines()[2:]]
    times = [float(r[2]) for r in rows if r[0] == "b1_sq"]
    assert any(abs(tk - 1.0) <= 0.002 for tk in times)


def test_unknown_preset(tmp_path):
    with pytest.raises(SystemExit):
        main(["preset", "fig99", "--out", str(tmp_path)])
