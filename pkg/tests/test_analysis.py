import numpy as np
import pytest

from ringcav.analysis import (
    AnalysisError,
    SweepError,
    TimeSeries,
    count_separated_peaks,
    detect_kinks,
    esd_events,
    power_spectrum,
    series_from_grid,
    sweep_distance,
    time_average,
)


def _series(values, dt=0.1, t0=0.0):
    return TimeSeries(t0=t0, dt=dt, values=np.asarray(values, dtype=float))


# ---------- time_average ----------

def test_average_of_constant():
    s = _series(np.full(100, 3.25))
    assert time_average(s, 0.0, 9.9) == pytest.approx(3.25, abs=1e-14)


def test_average_of_full_period_sinusoid():
    t = np.arange(0, 1000) * 0.01
    s = series_from_grid(t, np.sin(2 * np.pi * t / 3.33))
    # 3 full periods on the grid
    assert time_average(s, 0.0, 3 * 3.33) == pytest.approx(0.0, abs=1e-3)
    # exact grid-aligned period: trapezoid cancels to rounding
    s2 = series_from_grid(t, np.sin(2 * np.pi * t / 2.5))
    assert time_average(s2, 0.0, 5.0) == pytest.approx(0.0, abs=1e-10)


def test_average_linearity():
    rng = np.random.default_rng(1)
    f = _series(rng.standard_normal(64))
    g = _series(rng.standard_normal(64))
    combo = _series(2.0 * f.values - 3.5 * g.values)
    lhs = time_average(combo, 0.5, 6.0)
    rhs = 2.0 * time_average(f, 0.5, 6.0) - 3.5 * time_average(g, 0.5, 6.0)
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_average_window_errors():
    s = _series(np.ones(32))
    with pytest.raises(AnalysisError, match="empty"):
        time_average(s, 1.0, 1.0)
    with pytest.raises(AnalysisError, match="outside"):
        time_average(s, 0.0, 100.0)


# ---------- power_spectrum ----------

def test_single_tone_dominates():
    t = np.arange(4096) * 0.05
    f0 = 64 * 2 * np.pi / (4096 * 0.05)  # bin-centred angular frequency
    s = series_from_grid(t, np.sin(f0 * t))
    spec = power_spectrum(s)
    k = np.argmax(spec.power)
    assert spec.freq_Omega0[k] == pytest.approx(f0, abs=2 * np.pi / (4096 * 0.05))
    others = np.delete(spec.power, [k - 1, k, k + 1])
    assert spec.power[k] >= 100 * np.max(others)


def test_two_incommensurate_tones():
    t = np.arange(8192) * 0.05
    s = series_from_grid(t, np.sin(1.7 * t) + 0.8 * np.sin(2.9 * t))
    spec = power_spectrum(s)
    assert count_separated_peaks(spec, f_max=5.0, rel_threshold=0.05) == 2


def test_parseval():
    rng = np.random.default_rng(8)
    for n in (256, 257):  # even and odd lengths
        x = rng.standard_normal(n)
        s = _series(x)
        spec = power_spectrum(s)
        var = np.mean((x - x.mean()) ** 2)
        assert np.sum(spec.power) == pytest.approx(var, rel=1e-9)


def test_hann_window_and_fsr_units():
    t = np.arange(1024) * 0.1
    s = series_from_grid(t, np.sin(1.0 * t))
    spec = power_spectrum(s, fsr=3.1897, window="hann")
    assert np.all(np.isfinite(spec.power))
    assert spec.freq_fsr_units[10] == pytest.approx(spec.freq_Omega0[10] / 3.1897)
    with pytest.raises(AnalysisError):
        power_spectrum(s, window="kaiser")


def test_non_uniform_grid_rejected():
    t = np.array([0.0, 0.1, 0.25, 0.3, 0.4, 0.5, 0.6, 0.7])
    with pytest.raises(AnalysisError, match="uniform"):
        series_from_grid(t, np.ones(8))


# ---------- detect_kinks ----------

def test_slope_break_detected_within_one_step():
    t = np.arange(0, 2000) * 0.005
    t_star = 5.0
    y = np.where(t < t_star, t, 2 * t_star - t)
    s = series_from_grid(t, y)
    kinks = detect_kinks(s)
    assert len(kinks) == 1
    assert abs(kinks[0] - t_star) <= 0.005


def test_smooth_sinusoid_has_no_kinks():
    t = np.arange(0, 2000) * 0.005
    s = series_from_grid(t, np.sin(3.0 * t))
    assert len(detect_kinks(s)) == 0


def test_onset_from_silence_detected():
    # quadratic turn-on occupying a small fraction of the window
    t = np.arange(0, 4000) * 0.005
    t_star = 18.0
    y = np.where(t < t_star, 0.0, (t - t_star) ** 2)
    s = series_from_grid(t, y)
    kinks = detect_kinks(s)
    assert len(kinks) == 1
    assert abs(kinks[0] - t_star) <= 2 * 0.005


def test_translation_equivariance():
    t = np.arange(0, 1500) * 0.01
    y = np.where(t < 7.0, 0.3 * t, 0.3 * 7.0 - 0.9 * (t - 7.0))
    base = detect_kinks(series_from_grid(t, y))
    shifted = detect_kinks(TimeSeries(t0=100.0, dt=0.01, values=y))
    assert len(base) == len(shifted) == 1
    assert shifted[0] - base[0] == pytest.approx(100.0, abs=1e-9)


def test_close_detections_merge():
    t = np.arange(0, 1000) * 0.01
    y = np.zeros_like(t)
    y[500] = 1.0
    y[502] = 1.0  # two spikes closer than 5 samples: one kink
    s = series_from_grid(t, y)
    assert len(detect_kinks(s)) == 1


def test_kink_detection_needs_enough_samples():
    with pytest.raises(AnalysisError):
        detect_kinks(_series(np.zeros(8)))


# ---------- esd_events ----------

def test_all_negative_series_has_no_events():
    s = _series(-np.ones(40))
    assert esd_events(s) == []


def test_event_extraction():
    values = np.array([0.0, -1, 2, 3, 0, -1, 1, 1, -2, 4] + [0] * 10, dtype=float)
    s = _series(values, dt=1.0)
    events = esd_events(s)
    assert events == [(2.0, 3.0), (6.0, 7.0), (9.0, 9.0)]


def test_trailing_positive_run_reports_final_time():
    s = _series(np.array([-1.0, -1.0, 1.0, 2.0, 3.0, 1.0, 0.5, 0.2]), dt=0.5)
    events = esd_events(s)
    assert len(events) == 1
    assert events[0][1] == pytest.approx(s.t_end)


def test_events_cover_exactly_positive_samples():
    rng = np.random.default_rng(44)
    values = rng.standard_normal(200)
    s = _series(values, dt=1.0)
    events = esd_events(s)
    covered = np.zeros(200, dtype=bool)
    for birth, death in events:
        covered[int(birth):int(death) + 1] = True
    assert np.array_equal(covered, values > 0)
    # disjoint and ordered
    flat = [t for ev in events for t in ev]
    assert flat == sorted(flat)


# ---------- sweep_distance ----------

def _runner(x):
    t = np.arange(0, 200) * 0.1
    return series_from_grid(t, np.full(200, np.cos(x)))


def test_single_point_sweep_matches_direct_run():
    sweep = sweep_distance([0.3], _runner, window=(0.0, 19.9))
    assert len(sweep.points) == 1
    assert sweep.points[0].mean == pytest.approx(np.cos(0.3), abs=1e-12)
    assert sweep.points[0].min == sweep.points[0].max == pytest.approx(np.cos(0.3))


def test_sweep_kind_inference_and_ordering():
    sweep = sweep_distance([0.0, 0.25, 0.5], _runner, window=(0.0, 10.0))
    assert sweep.kind == "sub-wavelength"
    sweep = sweep_distance([0.0, 100.0], _runner, window=(0.0, 10.0))
    assert sweep.kind == "multi-wavelength"
    with pytest.raises(AnalysisError, match="increasing"):
        sweep_distance([0.5, 0.1], _runner, window=(0.0, 10.0))


def test_sweep_threads_agree_with_serial():
    serial = sweep_distance([0.0, 0.1, 0.2, 0.3], _runner, window=(0.0, 15.0))
    threaded = sweep_distance([0.0, 0.1, 0.2, 0.3], _runner, window=(0.0, 15.0), threads=3)
    assert serial.means() == pytest.approx(threaded.means(), abs=0)


def test_sweep_failure_carries_partial_result():
    def flaky(x):
        if x > 0.15:
            raise RuntimeError("diverged")
        return _runner(x)

    with pytest.raises(SweepError) as err:
        sweep_distance([0.0, 0.1, 0.2], flaky, window=(0.0, 10.0))
    assert err.value.x_failed == 0.2
    assert len(err.value.partial.points) == 2
