import numpy as np
import pytest

from ringcav.single import concurrence_single, random_single_state, reduced_density_single
from ringcav.cavity import CavityConfig, build_mode_set
from ringcav.wootters import (
    DensityMatrixError,
    spin_flip,
    validate_density_matrix,
    wootters_concurrence,
)


def _bell_rho():
    psi = np.zeros(4, dtype=complex)
    psi[1] = psi[2] = 1 / np.sqrt(2)  # (|eg> + |ge>)/sqrt(2)
    return np.outer(psi, psi.conj())


def _brute_force_concurrence(rho):
    # independent route: eigenvalues of the non-Hermitian product rho*rho_tilde
    lam = np.linalg.eigvals(rho @ spin_flip(rho))
    lam = np.sqrt(np.clip(np.sort(lam.real)[::-1], 0.0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def test_spin_flip_of_ground_projector():
    rho = np.diag([0.0, 0.0, 0.0, 1.0]).astype(complex)  # |gg><gg|
    flipped = spin_flip(rho)
    assert np.allclose(flipped, np.diag([1.0, 0.0, 0.0, 0.0]))


def test_spin_flip_of_maximally_mixed():
    rho = np.eye(4, dtype=complex) / 4
    assert np.allclose(spin_flip(rho), rho)


def test_spin_flip_of_bell_projector():
    rho = _bell_rho()
    assert np.allclose(spin_flip(rho), rho, atol=1e-14)


def test_concurrence_bell_and_mixed():
    assert wootters_concurrence(_bell_rho()) == pytest.approx(1.0, abs=1e-12)
    assert wootters_concurrence(np.eye(4, dtype=complex) / 4) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("p,expected", [(1 / 3, 0.0), (0.5, 0.25), (0.9, 0.85), (0.2, 0.0)])
def test_werner_states(p, expected):
    rho = p * _bell_rho() + (1 - p) * np.eye(4, dtype=complex) / 4
    c = wootters_concurrence(rho)
    assert c == pytest.approx(_brute_force_concurrence(rho), abs=1e-11)
    # known closed form max{0, (3p-1)/2} as a cross-check only
    assert c == pytest.approx(expected, abs=1e-10)


def test_matches_brute_force_on_random_mixtures():
    # rank-deficient mixtures push an eigenvalue of rho*rho_tilde to zero,
    # where sqrt amplifies eigensolver noise to ~sqrt(eps); both routes
    # must still agree at that scale
    rng = np.random.default_rng(17)
    for _ in range(200):
        vecs = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        weights = rng.dirichlet(np.ones(3))
        rho = sum(w * np.outer(v, v.conj()) / np.vdot(v, v).real
                  for w, v in zip(weights, vecs))
        assert wootters_concurrence(rho) == pytest.approx(
            _brute_force_concurrence(rho), abs=5e-8)


def test_invariant_under_phase_and_local_z_rotations():
    rng = np.random.default_rng(23)
    for _ in range(50):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        rho = np.outer(v, v.conj()) / np.vdot(v, v).real
        base = wootters_concurrence(rho)
        a, b = rng.uniform(0, 2 * np.pi, 2)
        uz = np.kron(np.diag([np.exp(1j * a / 2), np.exp(-1j * a / 2)]),
                     np.diag([np.exp(1j * b / 2), np.exp(-1j * b / 2)]))
        rotated = uz @ rho @ uz.conj().T
        assert wootters_concurrence(rotated) == pytest.approx(base, abs=1e-10)
        assert wootters_concurrence(np.exp(1j * 0.0) * rho) == pytest.approx(base, abs=1e-12)


def test_single_excitation_sector_reduction():
    rng = np.random.default_rng(29)
    ms = build_mode_set(CavityConfig(n_freqs=3))
    for _ in range(200):
        v = random_single_state(ms, rng)
        rho = reduced_density_single(v[0], v[1])
        assert concurrence_single(v[0], v[1]) == pytest.approx(
            wootters_concurrence(rho), abs=1e-10)


def test_validation_rejects_bad_inputs():
    with pytest.raises(DensityMatrixError, match="4x4"):
        validate_density_matrix(np.eye(3))
    bad = np.eye(4, dtype=complex) / 4
    bad[0, 1] = 0.1  # not Hermitian
    with pytest.raises(DensityMatrixError, match="Hermitian"):
        validate_density_matrix(bad)
    with pytest.raises(DensityMatrixError, match="trace"):
        validate_density_matrix(np.eye(4, dtype=complex))
    neg = np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex)
    with pytest.raises(DensityMatrixError, match="eigenvalue"):
        validate_density_matrix(neg)
