import math
from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crmetrics.binning import DayVector, ParticipantSeries
from crmetrics.nonparam import (NonparamUndefined, hourly_profile, hourly_resample, interdaily_stability,
                                intradaily_variability, m10_l5_ra, nonparam_metrics)
from oracles import hourly_means_oracle, is_oracle, iv_oracle, m10_l5_indicator, m10_l5_oracle


def series_from(values, day_offsets):
    values = np.asarray(values, dtype=float).reshape(len(day_offsets), 144)
    d0 = date(2018, 10, 1)
    days = [DayVector("p", "accel", d0 + timedelta(days=k), v, True) for k, v in zip(day_offsets, values)]
    return ParticipantSeries("p", "accel", days)


def test_alternating_day_iv_is_four():
    v = np.tile([0.0, 1.0], 72)
    assert intradaily_variability(v) == 4.0


def test_constant_signal_undefined():
    with pytest.raises(NonparamUndefined):
        intradaily_variability(np.ones(144))
    with pytest.raises(NonparamUndefined):
        interdaily_stability(np.ones(144), np.arange(144) // 6)


def test_hourly_cosine_iv_finite_n_matches_oracle():
    t = np.arange(24 * 5) + 0.5
    v = np.cos(2 * math.pi * t / 24)
    assert intradaily_variability(v) == pytest.approx(iv_oracle(v.tolist()), rel=1e-12)


def test_iv_skips_pairs_across_gaps():
    rng = np.random.default_rng(0)
    s = series_from(rng.random(144 * 3), [0, 1, 4])
    v, t = s.values, s.bin_times
    full = intradaily_variability(v)
    gapped = intradaily_variability(v, t)
    assert gapped == pytest.approx(iv_oracle(v.tolist(), t.tolist()), rel=1e-12)
    # the 1 -> 4 day boundary is dropped, the 0 -> 1 boundary is not
    diffs = np.diff(v) ** 2
    expected = np.delete(diffs, 2 * 144 - 1).mean() / v.var()
    assert gapped == pytest.approx(expected, rel=1e-12) and gapped != full


def test_repeated_hourly_constant_days_is_one():
    day = np.repeat(np.random.default_rng(1).random(24), 6)
    v = np.tile(day, 5)
    assert interdaily_stability(v, np.tile(np.arange(144) // 6, 5)) == pytest.approx(1.0, abs=1e-10)


def test_hourly_profile_needs_every_hour():
    with pytest.raises(NonparamUndefined):
        hourly_profile(np.ones(10), np.arange(10))


@pytest.mark.parametrize("profile,expected", [
    ([1.0 if 8 <= h <= 17 else 0.0 for h in range(24)], (1.0, 0.0, 1.0)),
    ([2.5] * 24, (2.5, 2.5, 0.0)),
    ([1.0 if h in (22, 23, 0, 1, 2) else 0.0 for h in range(24)], (0.5, 0.0, 1.0)),
    ([0.0] * 24, (0.0, 0.0, 0.0)),
])
def test_m10_l5_examples(profile, expected):
    assert m10_l5_ra(profile) == pytest.approx(expected, abs=1e-15)


def test_profile_shape_checked():
    with pytest.raises(ValueError):
        m10_l5_ra(np.ones(23))


profiles = st.lists(st.floats(0.0, 100.0), min_size=24, max_size=24)


@given(profiles)
def test_m10_l5_match_brute_force_and_indicator_form(profile):
    m10, l5, ra = m10_l5_ra(profile)
    om10, ol5, ora = m10_l5_oracle(profile)
    im10, il5 = m10_l5_indicator(profile)
    assert (m10, l5) == pytest.approx((om10, ol5), rel=1e-12, abs=1e-12)
    assert (im10, il5) == pytest.approx((om10, ol5), rel=1e-12, abs=1e-12)
    assert ra == pytest.approx(ora, abs=1e-12)
    assert 0.0 <= ra <= 1.0 + 1e-15


days_strategy = st.integers(2, 6).flatmap(
    lambda d: st.lists(st.floats(0.0, 10.0), min_size=144 * d, max_size=144 * d))


@given(days_strategy, st.floats(0.01, 1000.0))
def test_iv_is_match_oracles_and_scale_invariance(values, c):
    v = np.array(values)
    hours = np.tile(np.arange(144) // 6, len(v) // 144)
    if not v.var() > 1e-12:
        return
    iv, is_ = intradaily_variability(v), interdaily_stability(v, hours)
    assert iv == pytest.approx(iv_oracle(values), rel=1e-10)
    assert is_ == pytest.approx(is_oracle(values, hours.tolist()), rel=1e-10)
    assert intradaily_variability(v * c) == pytest.approx(iv, rel=1e-9)
    assert interdaily_stability(v * c, hours) == pytest.approx(is_, rel=1e-9)
    assert 0.0 <= is_ <= 1.0 + 1e-12 and iv >= 0.0


def test_hourly_resample():
    rng = np.random.default_rng(2)
    s = series_from(rng.random(144 * 2), [0, 2])
    v, t, h = hourly_resample(s)
    assert len(v) == 48
    assert v[0] == pytest.approx(s.values[:6].mean())
    assert t[24] == 48.5 and h[25] == 1


def test_metrics_at_both_resolutions():
    rng = np.random.default_rng(3)
    s = series_from(rng.random(144 * 5), [0, 1, 2, 3, 4])
    native = nonparam_metrics(s, "10min")
    hourly = nonparam_metrics(s, "hourly")
    hv, _, hh = hourly_resample(s)
    assert native["iv"] == pytest.approx(iv_oracle(s.values.tolist()), rel=1e-10)
    assert hourly["iv"] == pytest.approx(iv_oracle(hv.tolist(), step=1.0), rel=1e-10)
    assert hourly["is_"] == pytest.approx(is_oracle(hv.tolist(), hh.tolist()), rel=1e-10)
    prof = hourly_means_oracle(s.values.tolist(), s.hour_of_day.tolist())
    assert native["m10"] == hourly["m10"] == pytest.approx(m10_l5_oracle(prof)[0], rel=1e-12)
    with pytest.raises(ValueError):
        nonparam_metrics(s, "5min")


def test_constant_series_gives_nan():
    out = nonparam_metrics(series_from(np.ones(144 * 2), [0, 1]))
    assert math.isnan(out["iv"]) and math.isnan(out["is_"]) and out["ra"] == 0.0
