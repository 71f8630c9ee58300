"""Ring-cavity geometry, discrete mode lattice, and atom-mode couplings.

Unit system: the vacuum Rabi frequency of the central resonant mode,
Omega0, is the energy unit; times are in 1/Omega0. Lengths are in units
of the atomic wavelength lambda_a. All frequencies below (detunings,
free spectral range) are therefore dimensionless multiples of Omega0.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

DIR_RIGHT = +1
DIR_LEFT = -1

CouplingScaling = Literal["flat", "sqrt_omega"]
RabiConvention = Literal["Omega0_equals_g0", "Omega0_equals_2g0"]


class GeometryError(ValueError):
    """Invalid cavity geometry or mode-lattice parameters."""


@dataclass(frozen=True)
class CavityConfig:
    """Geometry and coupling conventions of the two-atom ring cavity.

    L_over_lambda        cavity round-trip length, units of lambda_a
    omega_a_over_Omega0  atomic transition frequency, units of Omega0
    n_freqs              odd number of frequency rungs per propagation
                         direction, centred on the resonant mode
    x1_over_lambda,
    x2_over_lambda       atom positions along the ring, units of lambda_a
    coupling_scaling     "flat": g_m = g0 for every rung;
                         "sqrt_omega": g_m = g0*sqrt(omega_m/omega_a),
                         the field-amplitude frequency dependence
    rabi_convention      relation between g0 and Omega0
    """

    L_over_lambda: float = 3.48e3
    omega_a_over_Omega0: float = 1.11e4
    n_freqs: int = 11
    x1_over_lambda: float = 1.0
    x2_over_lambda: float = 1.0
    coupling_scaling: CouplingScaling = "flat"
    rabi_convention: RabiConvention = "Omega0_equals_g0"

    def __post_init__(self):
        if self.L_over_lambda <= 0:
            raise GeometryError(f"L_over_lambda must be > 0, got {self.L_over_lambda}")
        if self.omega_a_over_Omega0 <= 0:
            raise GeometryError(
                f"omega_a_over_Omega0 must be > 0, got {self.omega_a_over_Omega0}"
            )
        if self.n_freqs < 1 or self.n_freqs % 2 == 0:
            raise GeometryError(
                f"n_freqs must be an odd positive integer so the central mode "
                f"sits exactly on resonance, got {self.n_freqs}"
            )
        x = self.x2_over_lambda - self.x1_over_lambda
        if not 0.0 <= x < self.L_over_lambda:
            raise GeometryError(
                f"atom spacing x2-x1 must satisfy 0 <= x < L, got {x}"
            )
        if self.coupling_scaling not in ("flat", "sqrt_omega"):
            raise GeometryError(f"unknown coupling_scaling {self.coupling_scaling!r}")
        if self.rabi_convention not in ("Omega0_equals_g0", "Omega0_equals_2g0"):
            raise GeometryError(f"unknown rabi_convention {self.rabi_convention!r}")

    @property
    def spacing_over_lambda(self) -> float:
        return self.x2_over_lambda - self.x1_over_lambda

    @property
    def fsr(self) -> float:
        """Free spectral range in Omega0 units: Delta_FSR = omega_a / (L/lambda_a)."""
        return self.omega_a_over_Omega0 / self.L_over_lambda

    @property
    def g0(self) -> float:
        """Single-mode vacuum coupling g0 in Omega0 units."""
        return 0.5 if self.rabi_convention == "Omega0_equals_2g0" else 1.0

    @property
    def t_round_trip(self) -> float:
        """Cavity round-trip time L/c in 1/Omega0 units."""
        return 2.0 * np.pi * self.L_over_lambda / self.omega_a_over_Omega0


@dataclass(frozen=True)
class ModeId:
    """One travelling-wave cavity mode: frequency rung m and direction."""

    m: int
    dir: int  # DIR_RIGHT or DIR_LEFT

    def __post_init__(self):
        if self.dir not in (DIR_RIGHT, DIR_LEFT):
            raise GeometryError(f"mode direction must be +1 or -1, got {self.dir}")

    @property
    def label(self) -> str:
        return f"{self.m}{'r' if self.dir == DIR_RIGHT else 'l'}"


def coupling(mode: ModeId, atom_index: int, config: CavityConfig) -> complex:
    """Position-dependent coupling g_{mu j} of one atom to one mode, in Omega0.

    g_{mu j} = g_m * exp(i * dir * (omega_m/omega_a) * 2*pi * x_j/lambda_a),
    with g_m = g0 (flat) or g0*sqrt(omega_m/omega_a) (sqrt_omega).
    """
    if atom_index not in (1, 2):
        raise GeometryError(f"atom_index must be 1 or 2, got {atom_index}")
    x = config.x1_over_lambda if atom_index == 1 else config.x2_over_lambda
    w_ratio = 1.0 + mode.m * config.fsr / config.omega_a_over_Omega0
    g_m = config.g0 * (np.sqrt(w_ratio) if config.coupling_scaling == "sqrt_omega" else 1.0)
    return g_m * np.exp(1j * mode.dir * w_ratio * 2.0 * np.pi * x)


@dataclass(frozen=True)
class ModeSet:
    """The full discrete mode lattice with detunings and per-atom couplings.

    Modes are ordered deterministically: m ascending, right-mover before
    left-mover at each rung. detunings[k] = m_k * fsr. g1/g2 are the
    complex couplings of atoms 1 and 2 to each mode.
    """

    config: CavityConfig
    modes: tuple[ModeId, ...]
    detunings: np.ndarray = field(repr=False)
    g1: np.ndarray = field(repr=False)
    g2: np.ndarray = field(repr=False)

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def fsr(self) -> float:
        return self.config.fsr

    def couplings(self, atom_index: int) -> np.ndarray:
        return self.g1 if atom_index == 1 else self.g2

    def index_of(self, mode: ModeId) -> int:
        half = (self.config.n_freqs - 1) // 2
        if abs(mode.m) > half:
            raise GeometryError(
                f"mode rung m={mode.m} outside lattice |m| <= {half}"
            )
        return 2 * (mode.m + half) + (0 if mode.dir == DIR_RIGHT else 1)


def build_mode_set(config: CavityConfig) -> ModeSet:
    """Construct the 2*n_freqs travelling-wave modes about the resonance."""
    half = (config.n_freqs - 1) // 2
    modes = []
    for m in range(-half, half + 1):
        modes.append(ModeId(m, DIR_RIGHT))
        modes.append(ModeId(m, DIR_LEFT))
    detunings = np.array([mode.m * config.fsr for mode in modes])
    g1 = np.array([coupling(mode, 1, config) for mode in modes])
    g2 = np.array([coupling(mode, 2, config) for mode in modes])
    detunings.setflags(write=False)
    g1.setflags(write=False)
    g2.setflags(write=False)
    return ModeSet(config=config, modes=tuple(modes), detunings=detunings, g1=g1, g2=g2)


@dataclass(frozen=True)
class RetardationTimes:
    """Photon flight times, in 1/Omega0 and as fractions of the round trip."""

    t_rt: float
    t_x: float
    t_Lx: float

    @property
    def t_x_over_trt(self) -> float:
        return self.t_x / self.t_rt

    @property
    def t_Lx_over_trt(self) -> float:
        return self.t_Lx / self.t_rt


def retardation_times(config: CavityConfig) -> RetardationTimes:
    """Predicted kink times: round trip L/c and the two inter-atom paths."""
    t_rt = config.t_round_trip
    frac = config.spacing_over_lambda / config.L_over_lambda
    return RetardationTimes(t_rt=t_rt, t_x=t_rt * frac, t_Lx=t_rt * (1.0 - frac))


MODE_TABLE_COLUMNS = ["m", "dir", "detuning_Omega0", "g_abs", "g_phase_atom1", "g_phase_atom2"]


def mode_table_rows(mode_set: ModeSet) -> list[list]:
    """Rows for the mode-table CSV dump, one per mode in lattice order."""
    rows = []
    for k, mode in enumerate(mode_set.modes):
        rows.append([
            mode.m,
            "r" if mode.dir == DIR_RIGHT else "l",
            mode_set.detunings[k],
            abs(mode_set.g1[k]),
            float(np.angle(mode_set.g1[k])),
            float(np.angle(mode_set.g2[k])),
        ])
    return rows
