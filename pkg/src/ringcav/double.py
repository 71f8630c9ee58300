"""Double-excitation sector: state indexing, generator, reduced two-atom
density matrix, and the thresholded concurrence C = max{0, C1}.

Basis layout: slot 0 holds b12 (both atoms excited, cavity empty);
slots 1..M hold b_{alpha,1} (atom 1 excited plus one photon), slots
M+1..2M hold b_{alpha,2}; the remaining M(M+1)/2 slots hold unordered
photon pairs enumerated lexicographically as (alpha, beta) with
alpha >= beta, where alpha == beta is the doubly occupied mode.

Both coherence conventions for the one-photon term of C1 are kept:

  "paper_sum_of_moduli":   2 * sum_alpha |conj(b_{alpha,2}) b_{alpha,1}|
  "trace_modulus_of_sum":  2 * |sum_alpha b_{alpha,1} conj(b_{alpha,2})| = 2|rho23|

Both share the threshold 2*sqrt(rho11*rho44); only the trace convention
coincides with the Wootters concurrence of the reduced density matrix
(the sum of moduli bounds it from above).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cavity import ModeSet
from .propagate import Generator
from .statespec import InitialStateSpec, StateSpecError

#: Trajectory CSV columns for this sector (after the two time columns).
DOUBLE_COLUMNS = [
    "rho11", "rho22", "rho33", "rho44", "rho23_abs",
    "c1_paper", "c1_trace", "conc_paper", "conc_trace",
]

COHERENCE_MODES = ("paper_sum_of_moduli", "trace_modulus_of_sum")

#: Hard cap on the state-space dimension (1 + 2M + M(M+1)/2).
DEFAULT_DIM_CAP = 200_000


class DimensionCapError(RuntimeError):
    """Requested mode count exceeds the configured state-space cap."""


@dataclass(frozen=True)
class DoubleIndexMap:
    """Bijection between basis kets and amplitude slots for M modes."""

    n_modes: int

    @property
    def dimension(self) -> int:
        M = self.n_modes
        return 1 + 2 * M + M * (M + 1) // 2

    @property
    def slot_b12(self) -> int:
        return 0

    def slot_mode_atom(self, alpha: int, atom_index: int) -> int:
        """Slot of b_{alpha j}: photon in mode alpha, atom j excited."""
        if not 0 <= alpha < self.n_modes:
            raise IndexError(f"mode index {alpha} outside 0..{self.n_modes - 1}")
        if atom_index not in (1, 2):
            raise IndexError(f"atom_index must be 1 or 2, got {atom_index}")
        return 1 + (atom_index - 1) * self.n_modes + alpha

    def slot_pair(self, alpha: int, beta: int) -> int:
        """Slot of the photon pair {alpha, beta}; alpha == beta is |{2}_alpha>."""
        hi, lo = (alpha, beta) if alpha >= beta else (beta, alpha)
        if not 0 <= lo <= hi < self.n_modes:
            raise IndexError(f"pair ({alpha},{beta}) outside 0..{self.n_modes - 1}")
        return 1 + 2 * self.n_modes + hi * (hi + 1) // 2 + lo

    @property
    def atom1_slots(self) -> np.ndarray:
        return np.arange(1, 1 + self.n_modes)

    @property
    def atom2_slots(self) -> np.ndarray:
        return np.arange(1 + self.n_modes, 1 + 2 * self.n_modes)

    @property
    def pair_slots(self) -> np.ndarray:
        return np.arange(1 + 2 * self.n_modes, self.dimension)


@lru_cache(maxsize=32)
def index_map(n_modes: int) -> DoubleIndexMap:
    return DoubleIndexMap(n_modes)


def build_generator_double(mode_set: ModeSet, dim_cap: int = DEFAULT_DIM_CAP) -> Generator:
    """Hermitian generator of the double-excitation flow.

    Implements the coupled amplitude equations: b12 feeds the one-photon
    states through the cross-atom couplings, one-photon states feed the
    photon pairs, and the doubly occupied modes carry the sqrt(2)
    bosonic enhancement.
    """
    M = mode_set.n_modes
    if mode_set.g1.shape != (M,) or mode_set.g2.shape != (M,):
        raise ValueError("mode set coupling tables are inconsistent with the mode list")
    idx = index_map(M)
    D = idx.dimension
    if D > dim_cap:
        raise DimensionCapError(
            f"double-excitation dimension {D} exceeds the cap {dim_cap}"
        )
    g = (mode_set.g1, mode_set.g2)
    det = mode_set.detunings
    H = np.zeros((D, D), dtype=complex)
    sqrt2 = np.sqrt(2.0)

    for alpha in range(M):
        for j in (0, 1):  # atom 1, atom 2 (0-based)
            s = idx.slot_mode_atom(alpha, j + 1)
            H[s, s] = det[alpha]
            # b12 <-> b_{alpha j}: coefficient carries the other atom's coupling
            z = 1j * g[1 - j][alpha]
            H[idx.slot_b12, s] = z
            H[s, idx.slot_b12] = z.conjugate()
            # b_{alpha j} <-> doubly occupied mode alpha
            z = 1j * sqrt2 * g[j][alpha]
            p = idx.slot_pair(alpha, alpha)
            H[s, p] = z
            H[p, s] = z.conjugate()
            # b_{alpha j} <-> pair {alpha, beta}: partner-mode coupling
            for beta in range(M):
                if beta == alpha:
                    continue
                z = 1j * g[j][beta]
                p = idx.slot_pair(alpha, beta)
                H[s, p] = z
                H[p, s] = z.conjugate()
    for hi in range(M):
        for lo in range(hi + 1):
            p = idx.slot_pair(hi, lo)
            H[p, p] = det[hi] + det[lo]
    return Generator(matrix=H, basis_note="double excitation: b12, (alpha,j), pairs")


def initial_state_double(spec: InitialStateSpec, mode_set: ModeSet) -> np.ndarray:
    """Normalized amplitude vector for a double-excitation initial state."""
    terms = spec.resolve_terms()
    if terms[0].excitation != 2:
        raise StateSpecError(
            f"initial state {spec.text()!r} carries {terms[0].excitation} excitations, "
            "the double-excitation sector needs exactly 2"
        )
    idx = index_map(mode_set.n_modes)
    v = np.zeros(idx.dimension, dtype=complex)
    for term in terms:
        photons = [(mode_set.index_of(mode), count) for mode, count in term.photons]
        n_atom = (term.atom1 == "e") + (term.atom2 == "e")
        if n_atom == 2:
            v[idx.slot_b12] += term.coeff
        elif n_atom == 1:
            alpha, _ = photons[0]
            v[idx.slot_mode_atom(alpha, 1 if term.atom1 == "e" else 2)] += term.coeff
        elif len(photons) == 1:
            alpha, count = photons[0]
            assert count == 2
            v[idx.slot_pair(alpha, alpha)] += term.coeff
        else:
            (alpha, _), (beta, _) = photons
            v[idx.slot_pair(alpha, beta)] += term.coeff
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        raise StateSpecError(f"initial state {spec.text()!r} has zero norm")
    return v / norm


def reduced_density(amps: np.ndarray, idx: DoubleIndexMap) -> np.ndarray:
    """Trace out the cavity: 4x4 two-atom matrix in |ee>,|eg>,|ge>,|gg>.

    Only the one-photon coherence rho23 survives the partial trace; the
    two-photon coherence rho14 vanishes identically in this sector.
    """
    b12 = amps[idx.slot_b12]
    ba1 = amps[idx.atom1_slots]
    ba2 = amps[idx.atom2_slots]
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = abs(b12) ** 2
    rho[1, 1] = np.sum(np.abs(ba1) ** 2)
    rho[2, 2] = np.sum(np.abs(ba2) ** 2)
    rho[1, 2] = np.sum(ba1 * np.conj(ba2))
    rho[2, 1] = np.conj(rho[1, 2])
    rho[3, 3] = np.sum(np.abs(amps[idx.pair_slots]) ** 2)
    return rho


def c1(amps: np.ndarray, idx: DoubleIndexMap, coherence_mode: str = "paper_sum_of_moduli") -> float:
    """Signed concurrence precursor C1; the concurrence is max{0, C1}.

    C1 = (one-photon coherence term) - 2*sqrt(rho11*rho44). Negative
    stretches are the separable "dead zones"; sudden death and birth
    show up as sign changes.
    """
    if coherence_mode not in COHERENCE_MODES:
        raise ValueError(f"unknown coherence_mode {coherence_mode!r}")
    ba1 = amps[idx.atom1_slots]
    ba2 = amps[idx.atom2_slots]
    products = ba1 * np.conj(ba2)
    if coherence_mode == "paper_sum_of_moduli":
        coherence = float(np.sum(np.abs(products)))
    else:
        coherence = abs(np.sum(products))
    rho11 = abs(amps[idx.slot_b12]) ** 2
    rho44 = float(np.sum(np.abs(amps[idx.pair_slots]) ** 2))
    return 2.0 * coherence - 2.0 * np.sqrt(rho11 * rho44)


def concurrence_double(
    amps: np.ndarray, idx: DoubleIndexMap, coherence_mode: str = "paper_sum_of_moduli"
) -> float:
    """Two-atom concurrence in the double-excitation sector."""
    return max(0.0, c1(amps, idx, coherence_mode))


def c1_dicke(amps: np.ndarray, idx: DoubleIndexMap) -> float:
    """C1 from the collective one-photon amplitudes b_{alpha s}, b_{alpha a}.

    Uses the per-mode modulus sqrt[(|b_s|^2-|b_a|^2)^2 + (2 Im[b_s* b_a])^2],
    which equals 2|conj(b_{alpha 2}) b_{alpha 1}| identically, so the sum
    reproduces c1(..., "paper_sum_of_moduli") to rounding error.
    """
    ba1 = amps[idx.atom1_slots]
    ba2 = amps[idx.atom2_slots]
    inv = 1.0 / np.sqrt(2.0)
    bs = (ba1 + ba2) * inv
    ba = (ba1 - ba2) * inv
    pop_diff = np.abs(bs) ** 2 - np.abs(ba) ** 2
    coh = 2.0 * (np.conj(bs) * ba).imag
    per_mode = np.sqrt(pop_diff ** 2 + coh ** 2)
    rho11 = abs(amps[idx.slot_b12]) ** 2
    rho44 = float(np.sum(np.abs(amps[idx.pair_slots]) ** 2))
    return float(np.sum(per_mode)) - 2.0 * np.sqrt(rho11 * rho44)


def double_observables(amps: np.ndarray, idx: DoubleIndexMap) -> dict[str, np.ndarray]:
    """Vectorized per-sample observables from an amplitude chunk (dim, nt)."""
    b12 = amps[idx.slot_b12]
    ba1 = amps[idx.atom1_slots]
    ba2 = amps[idx.atom2_slots]
    products = ba1 * np.conj(ba2)
    rho11 = np.abs(b12) ** 2
    rho22 = np.sum(np.abs(ba1) ** 2, axis=0)
    rho33 = np.sum(np.abs(ba2) ** 2, axis=0)
    rho44 = np.sum(np.abs(amps[idx.pair_slots]) ** 2, axis=0)
    rho23_abs = np.abs(np.sum(products, axis=0))
    threshold = 2.0 * np.sqrt(rho11 * rho44)
    c1_paper = 2.0 * np.sum(np.abs(products), axis=0) - threshold
    c1_trace = 2.0 * rho23_abs - threshold
    return {
        "rho11": rho11,
        "rho22": rho22,
        "rho33": rho33,
        "rho44": rho44,
        "rho23_abs": rho23_abs,
        "c1_paper": c1_paper,
        "c1_trace": c1_trace,
        "conc_paper": np.maximum(0.0, c1_paper),
        "conc_trace": np.maximum(0.0, c1_trace),
    }


def random_double_state(idx: DoubleIndexMap, rng: np.random.Generator) -> np.ndarray:
    """Random normalized vector over the double-excitation basis."""
    v = rng.standard_normal(idx.dimension) + 1j * rng.standard_normal(idx.dimension)
    return v / np.linalg.norm(v)
