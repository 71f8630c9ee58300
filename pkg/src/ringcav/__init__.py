"""ringcav: two two-level atoms coupled to the discrete travelling-wave
modes of a ring cavity; retardation effects in populations and
entanglement.
"""

__version__ = "0.1.0"

from .analysis import (
    PowerSpectrum,
    SweepResult,
    TimeSeries,
    detect_kinks,
    esd_events,
    power_spectrum,
    series_from_grid,
    sweep_distance,
    time_average,
)
from .cavity import (
    CavityConfig,
    ModeId,
    ModeSet,
    RetardationTimes,
    build_mode_set,
    coupling,
    retardation_times,
)
from .config import ConfigError, ResolvedConfig, parse_config, parse_config_text
from .double import (
    DOUBLE_COLUMNS,
    DoubleIndexMap,
    build_generator_double,
    c1,
    c1_dicke,
    concurrence_double,
    index_map,
    initial_state_double,
    reduced_density,
)
from .propagate import (
    Generator,
    NormDriftError,
    StateNormError,
    Trajectory,
    propagate,
    propagate_observables,
    uniform_grid,
)
from .runners import RunResult, run_trajectory
from .single import (
    SINGLE_COLUMNS,
    build_generator_single,
    concurrence_single,
    dicke_transform,
    initial_state_single,
    reduced_density_single,
)
from .statespec import InitialStateSpec, StateTerm, parse_terms
from .wootters import spin_flip, wootters_concurrence

__all__ = [
    "CavityConfig", "ModeId", "ModeSet", "RetardationTimes",
    "build_mode_set", "coupling", "retardation_times",
    "Generator", "Trajectory", "propagate", "propagate_observables",
    "uniform_grid", "NormDriftError", "StateNormError",
    "SINGLE_COLUMNS", "build_generator_single", "initial_state_single",
    "dicke_transform", "concurrence_single", "reduced_density_single",
    "DOUBLE_COLUMNS", "DoubleIndexMap", "index_map", "build_generator_double",
    "initial_state_double", "reduced_density", "c1", "concurrence_double", "c1_dicke",
    "spin_flip", "wootters_concurrence",
    "TimeSeries", "PowerSpectrum", "SweepResult", "series_from_grid",
    "time_average", "power_spectrum", "detect_kinks", "esd_events", "sweep_distance",
    "ConfigError", "ResolvedConfig", "parse_config", "parse_config_text",
    "RunResult", "run_trajectory",
    "InitialStateSpec", "StateTerm", "parse_terms",
]
