"""Bundled experiment presets (fig3a .. fig13).

Every preset pins the same cavity geometry (L = 3.48e3 lambda_a,
omega_a = 1.11e4 Omega0, atom 1 at 1 lambda_a) and the sqrt(omega)
coupling scaling of the travelling-wave field amplitude. "desk" scale
substitutes reduced mode counts and averaging windows so a preset
finishes in seconds to a couple of minutes; "paper" scale runs the
full-scale mode counts and windows (long runs warn and the biggest
require --force).
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import detect_kinks, power_spectrum, series_from_grid, sweep_distance
from .cavity import retardation_times
from .config import ConfigError, ResolvedConfig, parse_config_text
from .plots import emit_plot_script, plot_panels, plot_sweep, plot_trajectory
from .runio import (
    RunManifest,
    new_run_id,
    write_mode_table_csv,
    write_spectrum_csv,
    write_sweep_csv,
    write_table_csv,
)
from .runners import RunResult, run_trajectory

PRESET_NAMES = [
    "fig3a", "fig3b", "fig4", "fig5", "fig6a", "fig6b", "fig7a", "fig7b",
    "fig8", "fig9a", "fig9b", "fig10", "fig11", "fig12", "fig13",
]

SCALES = ("desk", "paper")

_BASE = """
[cavity]
L_over_lambda = 3480.0
omega_a_over_Omega0 = 11100.0
n_freqs = {n_freqs}
x1_over_lambda = 1.0
x2_over_lambda = {x2}
coupling_scaling = sqrt_omega

[run]
sector = {sector}
t_end_over_trt = {t_end}
dt_out_over_trt = 0.002

[initial]
preset = {preset}
"""


def _config(sector: str, preset: str, n_freqs: int, x: float, t_end: float) -> ResolvedConfig:
    return parse_config_text(
        _BASE.format(sector=sector, preset=preset, n_freqs=n_freqs, x2=1.0 + x, t_end=t_end)
    )


@dataclass
class PresetOutputs:
    out_dir: Path
    manifest: RunManifest
    files: list[Path] = field(default_factory=list)


class _Emitter:
    """Collects output files and keeps the manifest in sync."""

    def __init__(self, out_dir: Path, manifest: RunManifest):
        self.out_dir = out_dir
        self.manifest = manifest

    def add(self, path: Path) -> Path:
        self.manifest.add_output(path, self.out_dir)
        return path


def _write_run(em: _Emitter, result: RunResult, stem: str, run_id: str) -> Path:
    path = em.out_dir / f"{stem}.csv"
    write_table_csv(path, result.column_names(), result.table(), run_id)
    em.add(path)
    return path


def _population_preset(name, cfg, em, run_id, curves, kink_column, sensitivity=20.0):
    """Shared driver for fig3/4/5/6/7: one trajectory + kinks + figure + script."""
    result = run_trajectory(cfg)
    csv_path = _write_run(em, result, name, run_id)
    trt = cfg.cavity.t_round_trip
    kink_rows = []
    for col in kink_column:
        series = series_from_grid(result.t, result.columns[col], label=col)
        for tk in detect_kinks(series, sensitivity):
            kink_rows.append([col, tk, tk / trt])
        # the arrival kink is gentle: also scan the pre-round-trip window
        rt = retardation_times(cfg.cavity)
        if rt.t_x > 0.05 * trt:
            sub = series.window(0.1 * trt, min(0.4 * trt, series.t_end))
            for tk in detect_kinks(sub, sensitivity):
                if not any(abs(tk - row[1]) < 5 * cfg.dt_out for row in kink_rows):
                    kink_rows.append([col, tk, tk / trt])
    kinks_path = em.out_dir / f"{name}_kinks.csv"
    write_table_csv(kinks_path, ["column", "t_Omega0", "t_over_trt"], kink_rows, run_id)
    em.add(kinks_path)
    fig_path = em.out_dir / f"{name}.png"
    plot_trajectory(
        fig_path,
        result.t_over_trt,
        {c: result.columns[c] for c in curves},
        title=name,
        markers={"kinks": [row[2] for row in kink_rows]},
    )
    em.add(fig_path)
    script = em.out_dir / f"{name}.gp"
    emit_plot_script(script, csv_path, "t_over_trt", list(curves), run_id, title=name)
    em.add(script)
    return result


def _long_run_preset(name, cfg, em, run_id, column):
    """fig8: long trajectory, its spectrum, and a two-panel figure."""
    result = run_trajectory(cfg)
    csv_path = _write_run(em, result, name, run_id)
    series = series_from_grid(result.t, result.columns[column], label=column)
    spec = power_spectrum(series, fsr=cfg.cavity.fsr)
    spec_path = em.out_dir / f"{name}_spectrum.csv"
    write_spectrum_csv(spec_path, spec, run_id)
    em.add(spec_path)
    fig_path = em.out_dir / f"{name}.png"
    plot_panels(
        fig_path,
        [
            {"t": result.t_over_trt, "curves": {column: result.columns[column]}},
            {
                "t": spec.freq_Omega0,
                "curves": {"power": spec.power},
                "xlabel": "frequency (Omega0)",
                "ylabel": "power",
            },
        ],
        title=name,
    )
    em.add(fig_path)
    script = em.out_dir / f"{name}.gp"
    emit_plot_script(script, csv_path, "t_over_trt", [column], run_id, title=name)
    em.add(script)
    return result


def _sweep_preset(name, em, run_id, sector, preset, n_freqs, x_values, window_trt,
                  observable, threads, force):
    base = _config(sector, preset, n_freqs, 0.0, window_trt)

    def run_one(x: float):
        cfg = _config(sector, preset, n_freqs, x, window_trt)
        result = run_trajectory(cfg, force=force)
        return series_from_grid(result.t, result.columns[observable], label=observable)

    trt = base.cavity.t_round_trip
    sweep = sweep_distance(
        x_values, run_one, window=(0.0, window_trt * trt),
        observable=observable, threads=threads,
    )
    sweep_path = em.out_dir / f"{name}_sweep.csv"
    write_sweep_csv(sweep_path, sweep, run_id)
    em.add(sweep_path)
    fig_path = em.out_dir / f"{name}.png"
    plot_sweep(fig_path, sweep.x_values(), sweep.means(), title=name)
    em.add(fig_path)
    script = em.out_dir / f"{name}.gp"
    emit_plot_script(script, sweep_path, "x_over_lambda", ["mean"], run_id, title=name)
    em.add(script)
    return sweep


def _double_pair_preset(name, em, run_id, preset, n_freqs_multi, t_end_single,
                        t_end_multi, x_values, force):
    """fig10/11/12: single-mode frame (a) and multimode frame (b), three spacings."""
    panels = []
    for frame, n_freqs, t_end in (("a", 1, t_end_single), ("b", n_freqs_multi, t_end_multi)):
        curves = {}
        tt = None
        for x in x_values:
            cfg = _config("double", preset, n_freqs, x, t_end)
            result = run_trajectory(cfg, force=force)
            stem = f"{name}{frame}_x{x:g}"
            _write_run(em, result, stem, run_id)
            curves[f"x={x:g}"] = result.columns["c1_paper"]
            tt = result.t_over_trt
        panels.append({
            "t": tt, "curves": curves, "ylabel": "C1",
            "hline": 0.0, "xlabel": "t / t_rt",
        })
    fig_path = em.out_dir / f"{name}.png"
    plot_panels(fig_path, panels, title=f"{name}: N=1 (top) vs N={n_freqs_multi} (bottom)")
    em.add(fig_path)


def run_preset(
    name: str,
    scale: str = "desk",
    out_dir: str | Path = ".",
    threads: int = 1,
    force: bool = False,
) -> PresetOutputs:
    """Run one figure preset and persist trajectories, analysis, figures,
    plot scripts, the mode table, and the manifest."""
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    if scale not in SCALES:
        raise ConfigError(f"unknown scale {scale!r}; choose desk or paper")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    run_id = new_run_id()
    manifest = RunManifest(
        run_id=run_id, command=f"preset {name}", preset=name, scale=scale,
        config={}, code_version=__version__, threads=threads,
    )
    em = _Emitter(out, manifest)
    started = time.time()
    paper = scale == "paper"
    if paper:
        manifest.notes.append(
            "paper scale: full mode counts and windows; expect minutes to "
            "hours for the long-window presets"
        )

    L = 3480.0
    x999 = 999.0
    half_L = L / 2.0

    def note_run(cfg: ResolvedConfig, result: RunResult):
        manifest.config = cfg.as_dict()
        manifest.method = result.stats.method
        manifest.dim = result.stats.dim
        manifest.n_samples = result.stats.n_samples
        manifest.internal_dt = result.stats.internal_dt
        manifest.max_norm_drift = max(manifest.max_norm_drift, result.stats.max_norm_drift)

    if name in ("fig3a", "fig3b", "fig4", "fig5", "fig6a", "fig6b", "fig7a", "fig7b"):
        x = {"fig3a": 0.0, "fig3b": x999, "fig4": 0.0, "fig5": x999,
             "fig6a": 0.0, "fig6b": x999, "fig7a": 0.0, "fig7b": x999}[name]
        initial = "symmetric" if name.startswith("fig7") else "e1g2"
        cfg = _config("single", initial, 99, x, 5.0)
        curves = {
            "fig3a": ["b1_sq", "b2_sq"], "fig3b": ["b1_sq", "b2_sq"],
            "fig4": ["bs_sq", "ba_sq"], "fig5": ["bs_sq", "ba_sq"],
            "fig6a": ["conc"], "fig6b": ["conc"],
            "fig7a": ["conc"], "fig7b": ["conc"],
        }[name]
        kink_cols = curves[:2] if name.startswith("fig3") else curves[:1]
        result = _population_preset(name, cfg, em, run_id, curves, kink_cols)
        note_run(cfg, result)
        mt = out / "modes.csv"
        write_mode_table_csv(mt, result.mode_set, run_id)
        em.add(mt)

    elif name == "fig8":
        t_end = 800.0 if paper else 200.0
        cfg = _config("single", "e1g2", 99, 0.0, t_end)
        result = _long_run_preset(name, cfg, em, run_id, "conc")
        note_run(cfg, result)

    elif name == "fig9a":
        n = 99 if paper else 21
        window = 800.0 if paper else 100.0
        # spacings must stay strictly below the round-trip length
        xs = list(np.arange(0.0, L - 1.0, 87.0)) if paper else list(np.arange(0.0, L - 1.0, 290.0))
        sweep = _sweep_preset(name, em, run_id, "single", "e1g2", n, xs, window,
                              "conc", threads, force)
        manifest.config = _config("single", "e1g2", n, 0.0, window).as_dict()
        manifest.notes.append(f"{len(sweep.points)} sweep points, window {window} t_rt")

    elif name == "fig9b":
        n = 99 if paper else 21
        window = 800.0 if paper else 100.0
        step = 0.025 if paper else 0.05
        xs = list(np.arange(0.0, 0.5 + step / 2, step))
        sweep = _sweep_preset(name, em, run_id, "single", "e1g2", n, xs, window,
                              "conc", threads, force)
        manifest.config = _config("single", "e1g2", n, 0.0, window).as_dict()
        manifest.notes.append(f"{len(sweep.points)} sweep points, window {window} t_rt")

    elif name in ("fig10", "fig11", "fig12"):
        preset_state = {"fig10": "ee", "fig11": "eq37", "fig12": "gg2r"}[name]
        n_multi = 45 if paper else 11
        t_multi = 10.0 if paper else 3.0
        _double_pair_preset(name, em, run_id, preset_state, n_multi, 10.0, t_multi,
                            [0.0, L / 4.0, half_L], force)
        manifest.config = _config("double", preset_state, n_multi, 0.0, t_multi).as_dict()

    elif name == "fig13":
        n = 45 if paper else 11
        t_end = 2000.0 if paper else 100.0
        cfg = _config("double", "eq37", n, half_L, t_end)
        result = run_trajectory(cfg, force=force)
        csv_path = _write_run(em, result, "fig13a", run_id)
        note_run(cfg, result)
        fig_path = out / "fig13a.png"
        plot_trajectory(fig_path, result.t_over_trt,
                        {"c1_paper": result.columns["c1_paper"]}, title="fig13a")
        em.add(fig_path)
        script = out / "fig13a.gp"
        emit_plot_script(script, csv_path, "t_over_trt", ["c1_paper"], run_id, title="fig13a")
        em.add(script)
        xs = list(half_L + np.arange(-0.25, 0.2501, 0.05))
        _sweep_preset("fig13b", em, run_id, "double", "eq37", n, xs, t_end,
                      "conc_paper", threads, force)

    manifest.wall_clock_s = time.time() - started
    manifest_path = manifest.write(out)
    return PresetOutputs(out_dir=out, manifest=manifest, files=[out / f for f in manifest.outputs] + [manifest_path])
