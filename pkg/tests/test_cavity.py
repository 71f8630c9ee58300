import numpy as np
import pytest

from ringcav.cavity import (
    DIR_LEFT,
    DIR_RIGHT,
    CavityConfig,
    GeometryError,
    ModeId,
    build_mode_set,
    coupling,
    mode_table_rows,
    retardation_times,
)

FIG3 = dict(L_over_lambda=3.48e3, omega_a_over_Omega0=1.11e4)


def test_single_rung_mode_set():
    ms = build_mode_set(CavityConfig(n_freqs=1, **FIG3))
    assert ms.n_modes == 2
    assert [m.label for m in ms.modes] == ["0r", "0l"]
    assert np.all(ms.detunings == 0.0)


def test_fsr_from_fig3_parameters():
    cfg = CavityConfig(**FIG3)
    assert cfg.fsr == 1.11e4 / 3.48e3
    assert cfg.fsr == pytest.approx(3.18966, abs=1e-5)


def test_five_rung_detuning_multiset():
    ms = build_mode_set(CavityConfig(n_freqs=5, **FIG3))
    fsr = ms.fsr
    expected = sorted([m * fsr for m in (-2, -1, 0, 1, 2)] * 2)
    assert sorted(ms.detunings.tolist()) == pytest.approx(expected)
    # detuning independent of direction
    for k in range(0, ms.n_modes, 2):
        assert ms.detunings[k] == ms.detunings[k + 1]


def test_mode_ordering_is_deterministic():
    ms = build_mode_set(CavityConfig(n_freqs=3, **FIG3))
    assert [(m.m, m.dir) for m in ms.modes] == [
        (-1, DIR_RIGHT), (-1, DIR_LEFT),
        (0, DIR_RIGHT), (0, DIR_LEFT),
        (1, DIR_RIGHT), (1, DIR_LEFT),
    ]
    for k, mode in enumerate(ms.modes):
        assert ms.index_of(mode) == k


@pytest.mark.parametrize("kwargs", [
    dict(n_freqs=4),
    dict(n_freqs=0),
    dict(n_freqs=-3),
    dict(L_over_lambda=0.0),
    dict(L_over_lambda=-1.0),
    dict(omega_a_over_Omega0=0.0),
    dict(x1_over_lambda=5.0, x2_over_lambda=1.0),   # negative spacing
    dict(x1_over_lambda=1.0, x2_over_lambda=3.48e3 + 1.0),  # spacing >= L
])
def test_invalid_configs_rejected(kwargs):
    base = dict(FIG3)
    base.update(kwargs)
    with pytest.raises(GeometryError):
        CavityConfig(**base)


def test_coupling_at_origin_is_real_positive():
    cfg = CavityConfig(x1_over_lambda=0.0, x2_over_lambda=0.0, **FIG3)
    for mode in (ModeId(0, DIR_RIGHT), ModeId(3, DIR_LEFT), ModeId(-5, DIR_RIGHT)):
        g = coupling(mode, 1, cfg)
        assert g.imag == pytest.approx(0.0, abs=1e-15)
        assert g.real > 0


def test_central_mode_phase_periodic_in_wavelength():
    cfg = CavityConfig(x1_over_lambda=1.0, x2_over_lambda=1.0, **FIG3)
    g = coupling(ModeId(0, DIR_RIGHT), 1, cfg)
    assert g == pytest.approx(cfg.g0 + 0.0j, abs=1e-12)


def test_offset_rung_phase():
    # m=+1, right mover, x_j = 1 lambda_a: phase angle = 2*pi*fsr/omega_a = 2*pi/L
    cfg = CavityConfig(x1_over_lambda=1.0, x2_over_lambda=1.0, **FIG3)
    g = coupling(ModeId(1, DIR_RIGHT), 1, cfg)
    assert np.angle(g) == pytest.approx(2.0 * np.pi / 3.48e3, rel=1e-9)


def test_coupling_magnitude_same_for_both_directions():
    cfg = CavityConfig(x1_over_lambda=7.3, x2_over_lambda=100.1,
                       coupling_scaling="sqrt_omega", **FIG3)
    ms = build_mode_set(CavityConfig(n_freqs=9, **FIG3))
    for m in range(-4, 5):
        for atom in (1, 2):
            gr = coupling(ModeId(m, DIR_RIGHT), atom, cfg)
            gl = coupling(ModeId(m, DIR_LEFT), atom, cfg)
            assert abs(gr) == pytest.approx(abs(gl), rel=1e-14)


def test_rabi_convention_sets_g0():
    assert CavityConfig(rabi_convention="Omega0_equals_g0", **FIG3).g0 == 1.0
    assert CavityConfig(rabi_convention="Omega0_equals_2g0", **FIG3).g0 == 0.5


def test_sqrt_omega_scaling():
    cfg = CavityConfig(coupling_scaling="sqrt_omega", x1_over_lambda=0.0,
                       x2_over_lambda=0.0, **FIG3)
    g = coupling(ModeId(10, DIR_RIGHT), 1, cfg)
    expected = cfg.g0 * np.sqrt(1.0 + 10 * cfg.fsr / cfg.omega_a_over_Omega0)
    assert abs(g) == pytest.approx(expected, rel=1e-14)


def test_fsr_times_round_trip_is_two_pi():
    for L, wa in [(3.48e3, 1.11e4), (100.0, 400.0), (7.7, 13.1)]:
        cfg = CavityConfig(L_over_lambda=L, omega_a_over_Omega0=wa,
                           x1_over_lambda=0.0, x2_over_lambda=0.0)
        assert cfg.fsr * cfg.t_round_trip == pytest.approx(2.0 * np.pi, rel=1e-14)


def test_retardation_times_coincident_atoms():
    rt = retardation_times(CavityConfig(x1_over_lambda=1.0, x2_over_lambda=1.0, **FIG3))
    assert rt.t_x == 0.0
    assert rt.t_Lx == rt.t_rt


def test_retardation_times_fig3b():
    cfg = CavityConfig(x1_over_lambda=1.0, x2_over_lambda=1000.0, **FIG3)
    rt = retardation_times(cfg)
    assert rt.t_x_over_trt == pytest.approx(999.0 / 3480.0, rel=1e-12)
    assert rt.t_x_over_trt == pytest.approx(0.28707, abs=1e-5)
    assert rt.t_Lx_over_trt == pytest.approx(0.71293, abs=1e-5)


def test_retardation_times_half_cavity():
    cfg = CavityConfig(x1_over_lambda=0.0, x2_over_lambda=3.48e3 / 2, **FIG3)
    rt = retardation_times(cfg)
    assert rt.t_x == pytest.approx(rt.t_Lx)
    assert rt.t_x == pytest.approx(rt.t_rt / 2)


def test_central_coupling_invariant_under_wavelength_shift():
    cfg_a = CavityConfig(x1_over_lambda=1.0, x2_over_lambda=20.0, **FIG3)
    cfg_b = CavityConfig(x1_over_lambda=1.0, x2_over_lambda=21.0, **FIG3)
    for d in (DIR_RIGHT, DIR_LEFT):
        ga = coupling(ModeId(0, d), 2, cfg_a)
        gb = coupling(ModeId(0, d), 2, cfg_b)
        assert ga == pytest.approx(gb, rel=1e-12)


def test_mode_table_rows():
    ms = build_mode_set(CavityConfig(n_freqs=3, **FIG3))
    rows = mode_table_rows(ms)
    assert len(rows) == 6
    ms_row = rows[2]  # (0, right)
    assert ms_row[0] == 0 and ms_row[1] == "r"
    assert ms_row[2] == 0.0
    assert ms_row[3] == pytest.approx(ms.config.g0)
