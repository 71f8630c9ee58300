"""Single-excitation sector: amplitudes (b1, b2, b_mu), populations,
Dicke-basis observables, and the single-excitation concurrence.

Basis layout of the amplitude vector: index 0 -> b1 (atom 1 excited),
index 1 -> b2, index 2+k -> cavity mode k in lattice order. The flow
v' = -i H v reproduces

    db_j/dt  = sum_mu g_{mu j} b_mu
    db_mu/dt = -i Delta_mu b_mu - sum_j conj(g_{mu j}) b_j
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cavity import ModeSet
from .propagate import Generator
from .statespec import InitialStateSpec, StateSpecError

#: Trajectory CSV columns for this sector (after the two time columns).
SINGLE_COLUMNS = ["b1_sq", "b2_sq", "cav_pop", "bs_sq", "ba_sq", "conc"]


@dataclass(frozen=True)
class SingleExcState:
    """Amplitudes of the single-excitation state at one instant."""

    b1: complex
    b2: complex
    b_modes: np.ndarray
    t: float = 0.0

    def norm_sq(self) -> float:
        return abs(self.b1) ** 2 + abs(self.b2) ** 2 + float(np.sum(np.abs(self.b_modes) ** 2))

    @classmethod
    def from_vector(cls, v: np.ndarray, t: float = 0.0) -> "SingleExcState":
        return cls(b1=complex(v[0]), b2=complex(v[1]), b_modes=np.asarray(v[2:]), t=t)


def build_generator_single(mode_set: ModeSet) -> Generator:
    """Hermitian generator of the single-excitation flow, dimension 2 + M."""
    M = mode_set.n_modes
    if mode_set.g1.shape != (M,) or mode_set.g2.shape != (M,):
        raise ValueError("mode set coupling tables are inconsistent with the mode list")
    H = np.zeros((2 + M, 2 + M), dtype=complex)
    for j, g in enumerate((mode_set.g1, mode_set.g2)):
        z = 1j * g
        H[j, 2:] = z
        H[2:, j] = z.conjugate()
    idx = np.arange(2, 2 + M)
    H[idx, idx] = mode_set.detunings
    return Generator(matrix=H, basis_note="single excitation: b1, b2, modes")


def initial_state_single(spec: InitialStateSpec, mode_set: ModeSet) -> np.ndarray:
    """Normalized amplitude vector for a single-excitation initial state."""
    terms = spec.resolve_terms()
    if terms[0].excitation != 1:
        raise StateSpecError(
            f"initial state {spec.text()!r} carries {terms[0].excitation} excitations, "
            "the single-excitation sector needs exactly 1"
        )
    v = np.zeros(2 + mode_set.n_modes, dtype=complex)
    for term in terms:
        if term.atom1 == "e":
            v[0] += term.coeff
        elif term.atom2 == "e":
            v[1] += term.coeff
        else:
            mode, _count = term.photons[0]
            v[2 + mode_set.index_of(mode)] += term.coeff
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise StateSpecError(f"initial state {spec.text()!r} has zero norm")
    return v / norm


def dicke_transform(b1: complex, b2: complex) -> tuple[complex, complex]:
    """Collective amplitudes b_s = (b1+b2)/sqrt2, b_a = (b1-b2)/sqrt2."""
    inv = 1.0 / np.sqrt(2.0)
    return (b1 + b2) * inv, (b1 - b2) * inv


def concurrence_single_bare(b1: complex, b2: complex) -> float:
    """C = 2 max{0, |b1* b2|} in the product basis."""
    return 2.0 * max(0.0, abs(np.conj(b1) * b2))


def concurrence_single_dicke(b1: complex, b2: complex) -> float:
    """Dicke-basis form sqrt[(rho_ss - rho_aa)^2 + (2 Im rho_as)^2]."""
    bs, ba = dicke_transform(b1, b2)
    rho_as = ba * np.conj(bs)
    return float(np.sqrt((abs(bs) ** 2 - abs(ba) ** 2) ** 2 + (2.0 * rho_as.imag) ** 2))


def concurrence_single(b1: complex, b2: complex) -> float:
    """Single-excitation concurrence; bare and Dicke forms must agree."""
    bare = concurrence_single_bare(b1, b2)
    dicke = concurrence_single_dicke(b1, b2)
    if abs(bare - dicke) > 1e-12:
        raise AssertionError(
            f"bare and Dicke concurrence forms disagree: {bare!r} vs {dicke!r}"
        )
    return bare


def reduced_density_single(b1: complex, b2: complex, cav_pop: float | None = None) -> np.ndarray:
    """Two-atom density matrix in basis |ee>, |eg>, |ge>, |gg>.

    For a normalized state the ground population is 1 - |b1|^2 - |b2|^2;
    pass cav_pop explicitly to override.
    """
    p1, p2 = abs(b1) ** 2, abs(b2) ** 2
    if cav_pop is None:
        cav_pop = 1.0 - p1 - p2
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = p1
    rho[2, 2] = p2
    rho[1, 2] = b1 * np.conj(b2)
    rho[2, 1] = np.conj(rho[1, 2])
    rho[3, 3] = cav_pop
    return rho


def single_observables(amps: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized per-sample observables from an amplitude chunk (dim, nt)."""
    b1, b2 = amps[0], amps[1]
    b1_sq = np.abs(b1) ** 2
    b2_sq = np.abs(b2) ** 2
    cav = np.sum(np.abs(amps[2:]) ** 2, axis=0)
    cross = b1 * np.conj(b2)
    bs_sq = 0.5 * (b1_sq + b2_sq) + cross.real
    ba_sq = 0.5 * (b1_sq + b2_sq) - cross.real
    conc = 2.0 * np.abs(cross)
    return {
        "b1_sq": b1_sq,
        "b2_sq": b2_sq,
        "cav_pop": cav,
        "bs_sq": bs_sq,
        "ba_sq": ba_sq,
        "conc": conc,
    }


def random_single_state(mode_set: ModeSet, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random normalized vector in the single-excitation sector."""
    dim = 2 + mode_set.n_modes
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
