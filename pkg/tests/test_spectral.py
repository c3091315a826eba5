import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crmetrics.spectral import (SpectrumUndefined, e24, false_alarm_level, frequency_grid, lomb_scargle,
                                write_periodogram)
from oracles import lomb_scargle_oracle

T5 = (np.arange(144 * 5) + 0.5) / 6.0


def sinusoid(t, period, phase=0.3):
    return np.cos(2 * math.pi * t / period + phase)


def test_grid_properties():
    f = frequency_grid(T5)
    df = np.diff(f)
    assert np.all(df > 0)
    assert df == pytest.approx(np.full(len(df), 1 / (4 * (T5[-1] - T5[0]))))
    assert f[0] <= 1 / 48 and f[-1] >= 1 / 4
    assert np.min(np.abs(f - 1 / 24)) < 1e-15


def test_equispaced_matches_oracle():
    rng = np.random.default_rng(0)
    y = sinusoid(T5, 24) + 0.5 * sinusoid(T5, 7.3) + rng.normal(0, 0.3, len(T5))
    p = lomb_scargle(T5, y)
    ref = lomb_scargle_oracle(T5, y, p.frequencies)
    np.testing.assert_allclose(p.power, ref, rtol=1e-9)


@settings(max_examples=20)
@given(st.lists(st.floats(0.0, 200.0), min_size=8, max_size=80, unique=True), st.integers(0, 2**32 - 1))
def test_uneven_matches_oracle(times, seed):
    t = np.sort(np.array(times))
    if t[-1] - t[0] < 1.0:
        return
    y = np.random.default_rng(seed).normal(size=len(t))
    freqs = np.linspace(0.02, 0.25, 37)
    # the oracle solve is badly conditioned when the samples barely resolve a frequency
    A_ok = all(np.linalg.cond(np.column_stack([np.cos(2 * math.pi * f * t), np.sin(2 * math.pi * f * t)])) < 1e6
               for f in freqs)
    if not A_ok:
        return
    np.testing.assert_allclose(lomb_scargle(t, y, freqs).power, lomb_scargle_oracle(t, y, freqs),
                               rtol=1e-7, atol=1e-9)


def test_constant_is_undefined():
    with pytest.raises(SpectrumUndefined):
        lomb_scargle(T5, np.ones(len(T5)))


def test_24h_peak_location():
    p = lomb_scargle(T5, sinusoid(T5, 24))
    step = np.diff(p.frequencies)[0]
    assert abs(p.frequencies[np.argmax(p.power)] - 1 / 24) <= step


def test_offset_and_scale_invariance():
    rng = np.random.default_rng(1)
    y = sinusoid(T5, 24) + rng.normal(0, 1, len(T5))
    a, b = lomb_scargle(T5, y), lomb_scargle(T5, 7.0 * y - 3.0)
    np.testing.assert_allclose(a.power, b.power, rtol=1e-9)


def test_gapped_times_used_directly():
    t = np.concatenate([T5[:288], T5[576:]])
    p = lomb_scargle(t, sinusoid(t, 24))
    assert abs(1 / p.frequencies[np.argmax(p.power)] - 24) < 1.0


def test_e24_twelve_hour_sinusoid_is_off_band():
    _, rel = e24(lomb_scargle(T5, sinusoid(T5, 12)))
    assert rel <= 0.05


def test_e24_twenty_four_hour_sinusoid_three_weeks():
    t = (np.arange(144 * 21) + 0.5) / 6.0
    raw, rel = e24(lomb_scargle(t, sinusoid(t, 24)))
    assert rel >= 0.5 and raw > 0


def test_e24_band_energy_five_days_oracle():
    p = lomb_scargle(T5, sinusoid(T5, 24))
    inside = (1 / p.frequencies >= 23.5) & (1 / p.frequencies <= 24.5)
    ref = lomb_scargle_oracle(T5, sinusoid(T5, 24), p.frequencies)
    raw, rel = e24(p)
    assert raw == pytest.approx(ref[inside].sum(), rel=1e-9)
    assert rel == pytest.approx(ref[inside].sum() / ref.sum(), rel=1e-9)


@pytest.mark.xfail(strict=True, reason="over 5 days the 23.5-24.5 h band holds one grid point of a ~4-point "
                                      "main lobe at oversample 4, so the relative band energy is ~0.28")
def test_e24_twenty_four_hour_sinusoid_five_days():
    assert e24(lomb_scargle(T5, sinusoid(T5, 24)))[1] >= 0.5


@given(st.lists(st.floats(-5, 5), min_size=144 * 2, max_size=144 * 2))
def test_relative_e24_in_unit_interval(values):
    y = np.array(values)
    t = (np.arange(len(y)) + 0.5) / 6
    if not y.var() > 1e-9:
        return
    p = lomb_scargle(t, y)
    raw, rel = e24(p)
    assert np.all(p.power >= -1e-12) and 0 <= rel <= 1 and raw >= 0


def test_band_must_be_covered():
    p = lomb_scargle(T5, sinusoid(T5, 24), np.linspace(0.1, 0.2, 20))
    with pytest.raises(SpectrumUndefined):
        e24(p)


def test_white_noise_false_alarm_rate():
    hits = 0
    for seed in range(100):
        y = np.random.default_rng(seed).normal(size=len(T5))
        p = lomb_scargle(T5, y)
        hits += p.power.max() < false_alarm_level(len(p.frequencies))
    assert hits >= 95


def test_periodogram_dump():
    p = lomb_scargle(T5, sinusoid(T5, 24))
    buf = io.StringIO()
    write_periodogram(p, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "frequency,period_hours,power" and len(lines) == len(p.frequencies) + 1
    f, period, power = map(float, lines[1].split(","))
    assert f == p.frequencies[0] and power == p.power[0]
