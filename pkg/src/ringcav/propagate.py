"""Propagation of amplitude vectors under a time-independent Hermitian generator.

The amplitude vector obeys dv/dt = -i H v in the interaction picture.
Two integrators are provided: an exact spectral propagator (one
eigendecomposition, then closed-form evaluation at each output sample)
and a fixed-step classical RK4 integrator kept as an independent
cross-check. Norm drift is measured and reported, never corrected.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

#: Initial states must be normalized to this tolerance.
NORM_TOL = 1e-9
#: RK4 runs abort if the norm drifts beyond this.
RK4_DRIFT_LIMIT = 1e-6
#: RK4 internal step: at most this phase per step at the largest diagonal frequency.
RK4_PHASE_PER_STEP = 0.05


class StateNormError(ValueError):
    """Initial amplitude vector is not normalized."""


class NormDriftError(RuntimeError):
    """RK4 norm drift exceeded the limit; carries the diagnostics."""

    def __init__(self, drift: float, internal_dt: float, n_steps: int):
        self.drift = drift
        self.internal_dt = internal_dt
        self.n_steps = n_steps
        super().__init__(
            f"rk4 norm drift {drift:.3e} exceeds {RK4_DRIFT_LIMIT:.0e} "
            f"(internal dt {internal_dt:.3e}, {n_steps} steps); reduce the step"
        )


@dataclass(frozen=True)
class Generator:
    """Hermitian matrix H generating the flow v' = -i H v (units Omega0)."""

    matrix: np.ndarray
    basis_note: str = ""

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def max_diagonal(self) -> float:
        return float(np.max(np.abs(np.diag(self.matrix))))


@dataclass
class PropagationStats:
    method: str
    dim: int
    n_samples: int
    internal_dt: float
    rk4_steps: int
    max_norm_drift: float


@dataclass
class Trajectory:
    """Amplitudes sampled on a uniform time grid; amps has shape (dim, nt)."""

    t: np.ndarray
    amps: np.ndarray
    stats: PropagationStats

    def state_at(self, k: int) -> np.ndarray:
        return self.amps[:, k]


def _check_initial(generator: Generator, initial: np.ndarray) -> np.ndarray:
    v0 = np.asarray(initial, dtype=complex).ravel()
    if v0.shape[0] != generator.dim:
        raise ValueError(
            f"initial state has dimension {v0.shape[0]}, generator expects {generator.dim}"
        )
    norm = np.linalg.norm(v0)
    if abs(norm - 1.0) > NORM_TOL:
        raise StateNormError(f"initial state norm {norm!r} deviates from 1 beyond {NORM_TOL}")
    return v0


def _check_grid(t_grid: np.ndarray) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float).ravel()
    if t.size < 2:
        raise ValueError("time grid needs at least two samples")
    steps = np.diff(t)
    if np.any(steps <= 0):
        raise ValueError("time grid must be strictly increasing")
    if np.max(np.abs(steps - steps[0])) > 1e-9 * max(steps[0], 1.0):
        raise ValueError("time grid must be uniform")
    return t


def uniform_grid(t_end: float, dt_out: float) -> np.ndarray:
    """Uniform output grid 0, dt, ..., covering [0, t_end]."""
    n = int(round(t_end / dt_out))
    return np.arange(n + 1) * dt_out


def rk4_internal_dt(generator: Generator, dt_out: float) -> float:
    """Fixed internal step: dt <= min(0.05/Delta_max, dt_out)."""
    dmax = generator.max_diagonal()
    if dmax <= 0.0:
        return dt_out
    return min(RK4_PHASE_PER_STEP / dmax, dt_out)


def iter_spectral(
    generator: Generator,
    initial: np.ndarray,
    t_grid: np.ndarray,
    chunk: int = 4096,
    rows: np.ndarray | None = None,
) -> Iterator[tuple[slice, np.ndarray]]:
    """Yield (sample-slice, amplitude-chunk) pairs from the spectral propagator.

    v(t) = U exp(-i w t) U^dag v(0). If ``rows`` is given, only those
    amplitude components are evaluated (cheap for long trajectories).
    """
    v0 = _check_initial(generator, initial)
    t = _check_grid(t_grid)
    w, U = np.linalg.eigh(generator.matrix)
    c0 = U.conj().T @ v0
    U_rows = U if rows is None else U[np.asarray(rows), :]
    for i0 in range(0, t.size, chunk):
        tc = t[i0:i0 + chunk]
        phases = np.exp(-1j * np.outer(w, tc))
        block = U_rows @ (phases * c0[:, None])
        if i0 == 0 and tc[0] == 0.0:
            # v(0) = v0 exactly; skip the eigenbasis round trip at t = 0
            block[:, 0] = v0 if rows is None else v0[np.asarray(rows)]
        yield slice(i0, i0 + tc.size), block


def _rk4_step(H: np.ndarray, v: np.ndarray, dt: float) -> np.ndarray:
    k1 = -1j * (H @ v)
    k2 = -1j * (H @ (v + 0.5 * dt * k1))
    k3 = -1j * (H @ (v + 0.5 * dt * k2))
    k4 = -1j * (H @ (v + dt * k3))
    return v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def iter_rk4(
    generator: Generator,
    initial: np.ndarray,
    t_grid: np.ndarray,
    chunk: int = 4096,
    rows: np.ndarray | None = None,
) -> Iterator[tuple[slice, np.ndarray]]:
    """Fixed-step RK4 integration, yielding chunks on the output grid.

    Raises NormDriftError as soon as the accumulated drift passes the limit.
    """
    v0 = _check_initial(generator, initial)
    t = _check_grid(t_grid)
    dt_out = t[1] - t[0]
    dt_int = rk4_internal_dt(generator, dt_out)
    n_sub = max(1, int(np.ceil(dt_out / dt_int - 1e-12)))
    dt = dt_out / n_sub
    H = generator.matrix

    if abs(t[0]) > 1e-12:
        raise ValueError("rk4 integration requires the grid to start at t=0")
    row_idx = None if rows is None else np.asarray(rows)
    v = v0.copy()
    total_steps = 0
    buf_t0 = 0
    buf: list[np.ndarray] = [v0 if row_idx is None else v0[row_idx]]
    for k in range(1, t.size):
        for _ in range(n_sub):
            v = _rk4_step(H, v, dt)
        total_steps += n_sub
        drift = abs(np.linalg.norm(v) ** 2 - 1.0)
        if drift > RK4_DRIFT_LIMIT:
            raise NormDriftError(drift, dt, total_steps)
        buf.append(v if row_idx is None else v[row_idx])
        if len(buf) == chunk or k == t.size - 1:
            yield slice(buf_t0, buf_t0 + len(buf)), np.stack(buf, axis=1)
            buf_t0 += len(buf)
            buf = []
    if buf:
        yield slice(buf_t0, buf_t0 + len(buf)), np.stack(buf, axis=1)


def propagate(
    generator: Generator,
    initial: np.ndarray,
    t_grid: np.ndarray,
    method: str = "spectral",
) -> Trajectory:
    """Propagate and return the full amplitude trajectory.

    method "spectral": exact up to eigensolver error; "rk4": fixed-step
    classical Runge-Kutta cross-check. Norm drift is recorded in the
    stats; it is never silently renormalized.
    """
    t = _check_grid(t_grid)
    if method == "spectral":
        chunks = iter_spectral(generator, initial, t)
        internal_dt, rk4_steps = 0.0, 0
    elif method == "rk4":
        chunks = iter_rk4(generator, initial, t)
        dt_out = t[1] - t[0]
        internal_dt = rk4_internal_dt(generator, dt_out)
        n_sub = max(1, int(np.ceil(dt_out / internal_dt - 1e-12)))
        internal_dt = dt_out / n_sub
        rk4_steps = n_sub * (t.size - 1)
    else:
        raise ValueError(f"unknown propagation method {method!r}")

    amps = np.empty((generator.dim, t.size), dtype=complex)
    for sl, chunk in chunks:
        amps[:, sl] = chunk
    drift = float(np.max(np.abs(np.sum(np.abs(amps) ** 2, axis=0) - 1.0)))
    stats = PropagationStats(
        method=method,
        dim=generator.dim,
        n_samples=t.size,
        internal_dt=internal_dt,
        rk4_steps=rk4_steps,
        max_norm_drift=drift,
    )
    return Trajectory(t=t, amps=amps, stats=stats)


def propagate_observables(
    generator: Generator,
    initial: np.ndarray,
    t_grid: np.ndarray,
    extract: Callable[[np.ndarray], dict[str, np.ndarray]],
    method: str = "spectral",
    chunk: int = 4096,
    rows: np.ndarray | None = None,
) -> tuple[dict[str, np.ndarray], PropagationStats]:
    """Propagate and keep only derived observables (memory-bounded).

    ``extract`` maps an amplitude chunk (dim_or_rows, nt_chunk) to named
    observable arrays of length nt_chunk; chunks are assembled in grid
    order. Norm drift is tracked from the chunk amplitudes, so ``rows``
    must cover the full vector if drift accounting is required (it is
    skipped when rows is given).
    """
    t = _check_grid(t_grid)
    if method == "spectral":
        chunks = iter_spectral(generator, initial, t, chunk=chunk, rows=rows)
        internal_dt, rk4_steps = 0.0, 0
    elif method == "rk4":
        chunks = iter_rk4(generator, initial, t, chunk=chunk, rows=rows)
        dt_out = t[1] - t[0]
        internal_dt = rk4_internal_dt(generator, dt_out)
        n_sub = max(1, int(np.ceil(dt_out / internal_dt - 1e-12)))
        internal_dt = dt_out / n_sub
        rk4_steps = n_sub * (t.size - 1)
    else:
        raise ValueError(f"unknown propagation method {method!r}")

    columns: dict[str, np.ndarray] = {}
    drift = 0.0
    for sl, amp_chunk in chunks:
        if rows is None:
            norms = np.sum(np.abs(amp_chunk) ** 2, axis=0)
            drift = max(drift, float(np.max(np.abs(norms - 1.0))))
        for name, values in extract(amp_chunk).items():
            if name not in columns:
                columns[name] = np.empty(t.size, dtype=values.dtype)
            columns[name][sl] = values
    stats = PropagationStats(
        method=method,
        dim=generator.dim,
        n_samples=t.size,
        internal_dt=internal_dt,
        rk4_steps=rk4_steps,
        max_norm_drift=drift,
    )
    return columns, stats
