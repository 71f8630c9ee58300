"""Command-line interface.

Subcommands: simulate-single, simulate-double, sweep, spectrum,
oracle-check, preset. Exit codes: 0 success, 2 configuration error,
3 numerical-tolerance failure, 4 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from . import double as dbl
from . import single as sng
from .analysis import power_spectrum, series_from_grid, sweep_distance
from .cavity import CavityConfig, GeometryError, build_mode_set
from .config import ConfigError, ResolvedConfig, parse_config
from .plots import emit_plot_script, plot_spectrum, plot_sweep, plot_trajectory
from .propagate import NormDriftError, StateNormError
from .presets import PRESET_NAMES, run_preset
from .runio import (
    RunManifest,
    new_run_id,
    write_mode_table_csv,
    write_spectrum_csv,
    write_sweep_csv,
    write_table_csv,
)
from .runners import ResourceCapError, RunResult, run_trajectory
from .statespec import StateSpecError
from .wootters import wootters_concurrence

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_RESOURCE = 4


class OracleCheckFailure(RuntimeError):
    pass


def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("--config", type=Path, default=None, help="INI configuration file")
    sub.add_argument("--out", type=Path, default=Path("."), help="output directory")
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="SECTION.KEY=VALUE", help="override one config key (repeatable)")
    sub.add_argument("--scale", choices=["desk", "paper"], default="desk",
                     help="preset parameter scale (presets only)")
    sub.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub.add_argument("--force", action="store_true",
                     help="override the resource cap for heavy paper-scale runs")
    sub.add_argument("--no-figure", action="store_true", help="skip figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringcav",
        description="Two two-level atoms coupled to the discrete modes of a ring "
                    "cavity: retardation, populations, and entanglement dynamics.",
    )
    parser.add_argument("--version", action="version", version=f"ringcav {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    for cmd, txt in (
        ("simulate-single", "run one single-excitation trajectory"),
        ("simulate-double", "run one double-excitation trajectory"),
        ("sweep", "average an observable over a range of atom spacings"),
        ("spectrum", "run a trajectory and write the power spectrum of one column"),
    ):
        sub = subs.add_parser(cmd, help=txt)
        _add_common(sub)

    sub = subs.add_parser("oracle-check", help="compare closed-form concurrences "
                          "with the spin-flip eigenvalue oracle on random states")
    _add_common(sub)
    sub.add_argument("--samples", type=int, default=200)
    sub.add_argument("--seed", type=int, default=2024)
    sub.add_argument("--tolerance", type=float, default=1e-10)

    sub = subs.add_parser("preset", help="reproduce one reference-figure preset")
    sub.add_argument("name", choices=PRESET_NAMES)
    _add_common(sub)
    return parser


def _load_config(args, sector: str | None = None) -> ResolvedConfig:
    overrides = list(args.overrides)
    if sector is not None:
        overrides.append(f"run.sector={sector}")
    return parse_config(args.config, overrides)


def _trajectory_command(args, sector: str) -> int:
    cfg = _load_config(args, sector)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    run_id = new_run_id()
    started = time.time()
    result = run_trajectory(cfg, force=args.force)
    manifest = _manifest_for(args, cfg, result, run_id, f"simulate-{sector}")
    csv_path = out / "trajectory.csv"
    write_table_csv(csv_path, result.column_names(), result.table(), run_id)
    manifest.add_output(csv_path, out)
    modes_path = out / "modes.csv"
    write_mode_table_csv(modes_path, result.mode_set, run_id)
    manifest.add_output(modes_path, out)
    ini_path = out / "resolved_config.ini"
    ini_path.write_text(f"# run_id: {run_id}\n" + cfg.to_ini())
    manifest.add_output(ini_path, out)
    default_col = "conc" if sector == "single" else "c1_paper"
    script = out / "trajectory.gp"
    emit_plot_script(script, csv_path, "t_over_trt", [default_col], run_id)
    manifest.add_output(script, out)
    if not args.no_figure:
        fig = out / "trajectory.png"
        plot_trajectory(fig, result.t_over_trt, {default_col: result.columns[default_col]},
                        title=f"{sector} trajectory")
        manifest.add_output(fig, out)
    manifest.wall_clock_s = time.time() - started
    manifest.write(out)
    print(f"wrote {csv_path} ({result.stats.n_samples} samples, method "
          f"{result.stats.method}, norm drift {result.stats.max_norm_drift:.2e})")
    return EXIT_OK


def _manifest_for(args, cfg: ResolvedConfig, result: RunResult | None, run_id: str,
                  command: str) -> RunManifest:
    manifest = RunManifest(
        run_id=run_id, command=command, preset=None, scale=None,
        config=cfg.as_dict(), code_version=__version__, threads=args.threads,
    )
    if result is not None:
        manifest.method = result.stats.method
        manifest.dim = result.stats.dim
        manifest.n_samples = result.stats.n_samples
        manifest.internal_dt = result.stats.internal_dt
        manifest.max_norm_drift = result.stats.max_norm_drift
    return manifest


def _sweep_command(args) -> int:
    cfg = _load_config(args)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    run_id = new_run_id()
    started = time.time()
    a = cfg.analysis
    xs = np.linspace(a.sweep_x_start, a.sweep_x_stop, a.sweep_x_count)
    observable = a.sweep_observable or ("conc" if cfg.run.sector == "single" else "conc_paper")
    trt = cfg.cavity.t_round_trip
    t0 = a.avg_t0_over_trt * trt
    t1 = (a.avg_t1_over_trt if a.avg_t1_over_trt > a.avg_t0_over_trt else cfg.run.t_end_over_trt) * trt

    base_ini = cfg.to_ini()

    def run_one(x: float):
        from .config import parse_config_text
        cfg_x = parse_config_text(base_ini)
        cav = cfg_x.cavity
        cav_x = CavityConfig(
            L_over_lambda=cav.L_over_lambda,
            omega_a_over_Omega0=cav.omega_a_over_Omega0,
            n_freqs=cav.n_freqs,
            x1_over_lambda=cav.x1_over_lambda,
            x2_over_lambda=cav.x1_over_lambda + x,
            coupling_scaling=cav.coupling_scaling,
            rabi_convention=cav.rabi_convention,
        )
        cfg_point = ResolvedConfig(cavity=cav_x, run=cfg_x.run, initial=cfg_x.initial,
                                   analysis=cfg_x.analysis)
        result = run_trajectory(cfg_point, force=args.force)
        return series_from_grid(result.t, result.columns[observable], label=observable)

    sweep = sweep_distance(xs, run_one, window=(t0, t1), observable=observable,
                           threads=args.threads)
    manifest = _manifest_for(args, cfg, None, run_id, "sweep")
    sweep_path = out / "sweep.csv"
    write_sweep_csv(sweep_path, sweep, run_id)
    manifest.add_output(sweep_path, out)
    script = out / "sweep.gp"
    emit_plot_script(script, sweep_path, "x_over_lambda", ["mean"], run_id)
    manifest.add_output(script, out)
    if not args.no_figure:
        fig = out / "sweep.png"
        plot_sweep(fig, sweep.x_values(), sweep.means(), title=f"<{observable}> vs spacing")
        manifest.add_output(fig, out)
    manifest.wall_clock_s = time.time() - started
    manifest.write(out)
    print(f"wrote {sweep_path} ({len(sweep.points)} points, window [{t0:.3g}, {t1:.3g}])")
    return EXIT_OK


def _spectrum_command(args) -> int:
    cfg = _load_config(args)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    run_id = new_run_id()
    started = time.time()
    result = run_trajectory(cfg, force=args.force)
    column = cfg.analysis.spectrum_column or (
        "conc" if cfg.run.sector == "single" else "c1_paper"
    )
    if column not in result.columns:
        raise ConfigError(f"analysis.spectrum_column {column!r} is not a trajectory column")
    series = series_from_grid(result.t, result.columns[column], label=column)
    spec = power_spectrum(series, fsr=cfg.cavity.fsr, window=cfg.analysis.spectrum_window)
    manifest = _manifest_for(args, cfg, result, run_id, "spectrum")
    spec_path = out / "spectrum.csv"
    write_spectrum_csv(spec_path, spec, run_id)
    manifest.add_output(spec_path, out)
    if not args.no_figure:
        fig = out / "spectrum.png"
        plot_spectrum(fig, spec.freq_Omega0, spec.power, title=f"power spectrum of {column}")
        manifest.add_output(fig, out)
    manifest.wall_clock_s = time.time() - started
    manifest.write(out)
    print(f"wrote {spec_path} ({spec.power.size} bins)")
    return EXIT_OK


def _oracle_check_command(args) -> int:
    rng = np.random.default_rng(args.seed)
    cav = CavityConfig(n_freqs=3)
    mode_set = build_mode_set(cav)
    idx = dbl.index_map(mode_set.n_modes)
    worst_single = 0.0
    worst_double = 0.0
    for _ in range(args.samples):
        v = sng.random_single_state(mode_set, rng)
        rho = sng.reduced_density_single(v[0], v[1])
        closed = sng.concurrence_single(v[0], v[1])
        worst_single = max(worst_single, abs(closed - wootters_concurrence(rho)))
        w = dbl.random_double_state(idx, rng)
        rho = dbl.reduced_density(w, idx)
        closed = dbl.concurrence_double(w, idx, "trace_modulus_of_sum")
        worst_double = max(worst_double, abs(closed - wootters_concurrence(rho)))
    print(f"oracle-check over {args.samples} states per sector:")
    print(f"  single-excitation closed form vs spin-flip oracle: {worst_single:.3e}")
    print(f"  double-excitation trace form  vs spin-flip oracle: {worst_double:.3e}")
    if max(worst_single, worst_double) > args.tolerance:
        raise OracleCheckFailure(
            f"max deviation {max(worst_single, worst_double):.3e} exceeds {args.tolerance:.1e}"
        )
    print(f"  within tolerance {args.tolerance:.1e}")
    return EXIT_OK


def _preset_command(args) -> int:
    outputs = run_preset(args.name, scale=args.scale, out_dir=args.out,
                         threads=args.threads, force=args.force)
    print(f"preset {args.name} ({args.scale}): {len(outputs.manifest.outputs)} outputs in {outputs.out_dir}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate-single":
            return _trajectory_command(args, "single")
        if args.command == "simulate-double":
            return _trajectory_command(args, "double")
        if args.command == "sweep":
            return _sweep_command(args)
        if args.command == "spectrum":
            return _spectrum_command(args)
        if args.command == "oracle-check":
            return _oracle_check_command(args)
        if args.command == "preset":
            return _preset_command(args)
        raise ConfigError(f"unknown command {args.command!r}")
    except (ConfigError, GeometryError, StateSpecError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NormDriftError, StateNormError, OracleCheckFailure) as exc:
        print(f"numerical-tolerance failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ResourceCapError, dbl.DimensionCapError) as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
