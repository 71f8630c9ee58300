"""Run configuration: flat INI sections [cavity], [run], [initial],
[analysis] with defaults, strict key validation, --set overrides, and a
round-trippable resolved form.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass
from pathlib import Path

from .cavity import CavityConfig, GeometryError
from .statespec import InitialStateSpec, StateSpecError, spec_from_config_text


class ConfigError(ValueError):
    """Unknown key, type mismatch, or invariant violation, with key path."""


@dataclass(frozen=True)
class RunSettings:
    sector: str = "single"              # single | double
    t_end_over_trt: float = 5.0
    dt_out_over_trt: float = 0.002      # t_rt / 500
    method: str = "auto"                # auto | spectral | rk4
    spectral_dim_cap: int = 6000        # auto: spectral below, rk4 above
    dim_cap: int = 200_000
    work_cap: float = 2e11              # samples * dim^2 guard


@dataclass(frozen=True)
class AnalysisSettings:
    kink_sensitivity: float = 20.0
    spectrum_window: str = "rect"       # rect | hann
    spectrum_column: str = ""           # empty: sector default (conc / c1_paper)
    avg_t0_over_trt: float = 0.0
    avg_t1_over_trt: float = 0.0        # 0: average to the end of the run
    sweep_x_start: float = 0.0
    sweep_x_stop: float = 0.5
    sweep_x_count: int = 11
    sweep_observable: str = ""          # empty: sector default


@dataclass(frozen=True)
class ResolvedConfig:
    cavity: CavityConfig
    run: RunSettings
    initial: InitialStateSpec
    analysis: AnalysisSettings

    @property
    def t_end(self) -> float:
        return self.run.t_end_over_trt * self.cavity.t_round_trip

    @property
    def dt_out(self) -> float:
        return self.run.dt_out_over_trt * self.cavity.t_round_trip

    def to_ini(self) -> str:
        """Full resolved configuration as INI text (round-trippable)."""
        c, r, a = self.cavity, self.run, self.analysis
        lines = [
            "[cavity]",
            f"L_over_lambda = {c.L_over_lambda!r}",
            f"omega_a_over_Omega0 = {c.omega_a_over_Omega0!r}",
            f"n_freqs = {c.n_freqs}",
            f"x1_over_lambda = {c.x1_over_lambda!r}",
            f"x2_over_lambda = {c.x2_over_lambda!r}",
            f"coupling_scaling = {c.coupling_scaling}",
            f"rabi_convention = {c.rabi_convention}",
            "",
            "[run]",
            f"sector = {r.sector}",
            f"t_end_over_trt = {r.t_end_over_trt!r}",
            f"dt_out_over_trt = {r.dt_out_over_trt!r}",
            f"method = {r.method}",
            f"spectral_dim_cap = {r.spectral_dim_cap}",
            f"dim_cap = {r.dim_cap}",
            f"work_cap = {r.work_cap!r}",
            "",
            "[initial]",
        ]
        if self.initial.preset:
            lines.append(f"preset = {self.initial.preset}")
        else:
            lines.append(f"terms = {self.initial.text()}")
        lines += [
            "",
            "[analysis]",
            f"kink_sensitivity = {a.kink_sensitivity!r}",
            f"spectrum_window = {a.spectrum_window}",
            f"spectrum_column = {a.spectrum_column}",
            f"avg_t0_over_trt = {a.avg_t0_over_trt!r}",
            f"avg_t1_over_trt = {a.avg_t1_over_trt!r}",
            f"sweep_x_start = {a.sweep_x_start!r}",
            f"sweep_x_stop = {a.sweep_x_stop!r}",
            f"sweep_x_count = {a.sweep_x_count}",
            f"sweep_observable = {a.sweep_observable}",
            "",
        ]
        return "\n".join(lines)

    def as_dict(self) -> dict:
        c, r, a = self.cavity, self.run, self.analysis
        return {
            "cavity": {
                "L_over_lambda": c.L_over_lambda,
                "omega_a_over_Omega0": c.omega_a_over_Omega0,
                "n_freqs": c.n_freqs,
                "x1_over_lambda": c.x1_over_lambda,
                "x2_over_lambda": c.x2_over_lambda,
                "coupling_scaling": c.coupling_scaling,
                "rabi_convention": c.rabi_convention,
            },
            "run": {
                "sector": r.sector,
                "t_end_over_trt": r.t_end_over_trt,
                "dt_out_over_trt": r.dt_out_over_trt,
                "method": r.method,
                "spectral_dim_cap": r.spectral_dim_cap,
                "dim_cap": r.dim_cap,
                "work_cap": r.work_cap,
            },
            "initial": {"state": self.initial.text()},
            "analysis": {
                "kink_sensitivity": a.kink_sensitivity,
                "spectrum_window": a.spectrum_window,
                "spectrum_column": a.spectrum_column,
                "avg_t0_over_trt": a.avg_t0_over_trt,
                "avg_t1_over_trt": a.avg_t1_over_trt,
                "sweep_x_start": a.sweep_x_start,
                "sweep_x_stop": a.sweep_x_stop,
                "sweep_x_count": a.sweep_x_count,
                "sweep_observable": a.sweep_observable,
            },
        }


_SECTIONS = {
    "cavity": {
        "L_over_lambda": float,
        "omega_a_over_Omega0": float,
        "n_freqs": int,
        "x1_over_lambda": float,
        "x2_over_lambda": float,
        "coupling_scaling": str,
        "rabi_convention": str,
    },
    "run": {
        "sector": str,
        "t_end_over_trt": float,
        "dt_out_over_trt": float,
        "method": str,
        "spectral_dim_cap": int,
        "dim_cap": int,
        "work_cap": float,
    },
    "initial": {
        "preset": str,
        "terms": str,
    },
    "analysis": {
        "kink_sensitivity": float,
        "spectrum_window": str,
        "spectrum_column": str,
        "avg_t0_over_trt": float,
        "avg_t1_over_trt": float,
        "sweep_x_start": float,
        "sweep_x_stop": float,
        "sweep_x_count": int,
        "sweep_observable": str,
    },
}


def _convert(section: str, key: str, raw: str):
    schema = _SECTIONS[section]
    if key not in schema:
        raise ConfigError(f"unknown key {section}.{key}")
    typ = schema[key]
    try:
        if typ is int:
            value = int(raw)
        elif typ is float:
            value = float(raw)
        else:
            value = raw.strip()
    except ValueError as exc:
        raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {typ.__name__}") from exc
    return value


def resolve_config(values: dict[str, dict[str, str]]) -> ResolvedConfig:
    """Validate raw section/key text and fill defaults."""
    for section in values:
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
    converted: dict[str, dict] = {s: {} for s in _SECTIONS}
    for section, pairs in values.items():
        for key, raw in pairs.items():
            converted[section][key] = _convert(section, key, raw)

    cav = dict(converted["cavity"])
    if "x2_over_lambda" not in cav:
        cav["x2_over_lambda"] = cav.get("x1_over_lambda", CavityConfig.x1_over_lambda)
    try:
        cavity = CavityConfig(**cav)
    except GeometryError as exc:
        raise ConfigError(f"cavity: {exc}") from exc

    run = RunSettings(**converted["run"])
    if run.sector not in ("single", "double"):
        raise ConfigError(f"run.sector must be 'single' or 'double', got {run.sector!r}")
    if run.method not in ("auto", "spectral", "rk4"):
        raise ConfigError(f"run.method must be auto, spectral, or rk4, got {run.method!r}")
    if run.t_end_over_trt <= 0 or run.dt_out_over_trt <= 0:
        raise ConfigError("run.t_end_over_trt and run.dt_out_over_trt must be positive")

    init_section = converted["initial"]
    default_preset = "e1g2" if run.sector == "single" else "ee"
    try:
        initial = spec_from_config_text(
            init_section.get("preset") or (None if init_section.get("terms") else default_preset),
            init_section.get("terms"),
        )
        exc_number = initial.excitation
    except StateSpecError as exc:
        raise ConfigError(f"initial: {exc}") from exc
    expected = 1 if run.sector == "single" else 2
    if exc_number != expected:
        raise ConfigError(
            f"initial state {initial.text()!r} has excitation number {exc_number}, "
            f"but run.sector = {run.sector} needs {expected}"
        )

    analysis = AnalysisSettings(**converted["analysis"])
    if analysis.spectrum_window not in ("rect", "hann"):
        raise ConfigError(f"analysis.spectrum_window must be rect or hann")
    if analysis.sweep_x_count < 1:
        raise ConfigError("analysis.sweep_x_count must be >= 1")
    return ResolvedConfig(cavity=cavity, run=run, initial=initial, analysis=analysis)


def _read_ini(text: str, origin: str) -> dict[str, dict[str, str]]:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive
    try:
        parser.read_string(text, source=origin)
    except configparser.Error as exc:
        raise ConfigError(f"{origin}: {exc}") from exc
    return {s: dict(parser.items(s)) for s in parser.sections()}


def parse_config(path: str | Path | None = None, overrides: list[str] | None = None) -> ResolvedConfig:
    """Load an INI config file (or pure defaults) and apply --set overrides.

    Each override is "section.key=value"; unknown keys are hard errors.
    """
    if path is not None:
        p = Path(path)
        if not p.exists():
            raise ConfigError(f"config file {p} does not exist")
        values = _read_ini(p.read_text(), str(p))
    else:
        values = {}
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"--set needs section.key=value, got {item!r}")
        key_path, raw = item.split("=", 1)
        if "." not in key_path:
            raise ConfigError(f"--set key must be section.key, got {key_path!r}")
        section, key = key_path.split(".", 1)
        section, key = section.strip(), key.strip()
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}] in --set {item!r}")
        values.setdefault(section, {})[key] = raw.strip()
    return resolve_config(values)


def parse_config_text(text: str) -> ResolvedConfig:
    return resolve_config(_read_ini(text, "<string>"))
