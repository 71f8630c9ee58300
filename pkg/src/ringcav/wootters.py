"""Ground-truth two-qubit concurrence via the spin-flip eigenvalue construction.

C(rho) = max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)} with l_i the
descending eigenvalues of rho * rho_tilde, rho_tilde = (sy x sy) rho* (sy x sy).
The eigenvalues are obtained from the Hermitian matrix
sqrt(rho) rho_tilde sqrt(rho), which shares them with rho*rho_tilde and
avoids a general complex eigensolver.
"""
from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-9
PSD_TOL = 1e-10

# sigma_y (x) sigma_y: antidiagonal (-1, 1, 1, -1)
_FLIP = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)


class DensityMatrixError(ValueError):
    """Input is not a valid two-qubit density matrix within tolerance."""


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DensityMatrixError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > HERMITICITY_TOL:
        raise DensityMatrixError("density matrix is not Hermitian within 1e-12")
    if abs(np.trace(rho).real - 1.0) > TRACE_TOL or abs(np.trace(rho).imag) > TRACE_TOL:
        raise DensityMatrixError(f"trace {np.trace(rho)} deviates from 1 beyond {TRACE_TOL}")
    if np.min(np.linalg.eigvalsh(rho)) < -PSD_TOL:
        raise DensityMatrixError("density matrix has an eigenvalue below -1e-10")
    return rho


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """rho_tilde = (sigma_y x sigma_y) conj(rho) (sigma_y x sigma_y)."""
    rho = np.asarray(rho, dtype=complex)
    return _FLIP @ rho.conj() @ _FLIP


def _sqrtm_psd(rho: np.ndarray) -> np.ndarray:
    w, U = np.linalg.eigh(rho)
    # eigenvalues that are zero up to solver noise must not leak a
    # sqrt(eps)-sized error into the root
    w = np.where(w < 1e-13 * np.max(w), 0.0, w)
    return (U * np.sqrt(w)) @ U.conj().T


def wootters_concurrence(rho: np.ndarray, validate: bool = True) -> float:
    """Concurrence of an arbitrary two-qubit density matrix, in [0, 1].

    With S = sqrt(rho) and A = S F conj(rho-free S) ... concretely
    A = S @ F @ conj(S): A A^dag equals the Hermitian matrix
    S rho_tilde S, which shares its spectrum with rho*rho_tilde, so the
    singular values of A are the sqrt(lambda_i) directly (no squaring,
    stable at rank deficiencies).
    """
    if validate:
        rho = validate_density_matrix(rho)
    else:
        rho = np.asarray(rho, dtype=complex)
    s = _sqrtm_psd(rho)
    a = s @ _FLIP @ s.conj()
    lam = np.linalg.svd(a, compute_uv=False)  # descending sqrt(lambda_i)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
