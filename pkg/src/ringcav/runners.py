"""High-level trajectory runs: config -> generator -> observable table."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import double as dbl
from . import single as sng
from .cavity import ModeSet, build_mode_set, retardation_times
from .config import ResolvedConfig
from .propagate import Generator, PropagationStats, propagate_observables, uniform_grid


class ResourceCapError(RuntimeError):
    """Run would exceed the configured work or dimension cap."""


@dataclass
class RunResult:
    """One simulated trajectory reduced to its observable table."""

    config: ResolvedConfig
    mode_set: ModeSet
    t: np.ndarray
    columns: dict[str, np.ndarray]
    stats: PropagationStats
    sector: str

    @property
    def t_over_trt(self) -> np.ndarray:
        return self.t / self.config.cavity.t_round_trip

    def column_names(self) -> list[str]:
        order = sng.SINGLE_COLUMNS if self.sector == "single" else dbl.DOUBLE_COLUMNS
        return ["t_Omega0", "t_over_trt"] + order

    def table(self) -> np.ndarray:
        cols = [self.t, self.t_over_trt]
        order = sng.SINGLE_COLUMNS if self.sector == "single" else dbl.DOUBLE_COLUMNS
        cols += [self.columns[name] for name in order]
        return np.column_stack(cols)


def choose_method(config: ResolvedConfig, dim: int) -> str:
    """Resolve method 'auto': spectral up to the cap, rk4 beyond."""
    if config.run.method != "auto":
        return config.run.method
    return "spectral" if dim <= config.run.spectral_dim_cap else "rk4"


def check_resource_cap(config: ResolvedConfig, dim: int, n_samples: int, force: bool = False):
    if dim > config.run.dim_cap:
        raise ResourceCapError(
            f"state-space dimension {dim} exceeds run.dim_cap = {config.run.dim_cap}"
        )
    work = float(n_samples) * dim * dim
    if work > config.run.work_cap and not force:
        raise ResourceCapError(
            f"estimated work {work:.2e} (samples x dim^2) exceeds run.work_cap = "
            f"{config.run.work_cap:.2e}; pass --force to run anyway"
        )


def build_system(config: ResolvedConfig) -> tuple[ModeSet, Generator, np.ndarray]:
    """Mode set, generator, and the normalized initial amplitude vector."""
    mode_set = build_mode_set(config.cavity)
    if config.run.sector == "single":
        gen = sng.build_generator_single(mode_set)
        v0 = sng.initial_state_single(config.initial, mode_set)
    else:
        gen = dbl.build_generator_double(mode_set, dim_cap=config.run.dim_cap)
        v0 = dbl.initial_state_double(config.initial, mode_set)
    return mode_set, gen, v0


def run_trajectory(config: ResolvedConfig, force: bool = False) -> RunResult:
    """Simulate the configured trajectory and reduce it to observables."""
    mode_set, gen, v0 = build_system(config)
    t = uniform_grid(config.t_end, config.dt_out)
    check_resource_cap(config, gen.dim, t.size, force=force)
    method = choose_method(config, gen.dim)
    if config.run.sector == "single":
        extract = sng.single_observables
    else:
        idx = dbl.index_map(mode_set.n_modes)
        extract = lambda amps: dbl.double_observables(amps, idx)
    columns, stats = propagate_observables(gen, v0, t, extract, method=method)
    return RunResult(
        config=config, mode_set=mode_set, t=t, columns=columns,
        stats=stats, sector=config.run.sector,
    )


def predicted_kink_times(config: ResolvedConfig) -> dict[str, float]:
    """Retardation times of the configured geometry, for annotation."""
    rt = retardation_times(config.cavity)
    return {"t_rt": rt.t_rt, "t_x": rt.t_x, "t_Lx": rt.t_Lx}
