import numpy as np
import pytest
from hypothesis import given, strategies as st

from crmetrics.binning import DayVector, ParticipantSeries
from crmetrics.quartile import QuartileUndefined, aggregate_quartiles, quartile_times


def brute_force(values):
    total = sum(values)
    out = []
    for q in (0.25, 0.5, 0.75):
        acc = 0.0
        for i, v in enumerate(values):
            acc += v
            if acc >= q * total - 1e-9 * total:
                out.append((i + 1) / 6)
                break
    return tuple(out)


def test_uniform_day():
    qt = quartile_times(np.ones(144))
    assert (qt.t25, qt.t50, qt.t75) == (6.0, 12.0, 18.0)


def test_all_mass_in_one_bin():
    v = np.zeros(144)
    v[60] = 3.0
    qt = quartile_times(v)
    assert (qt.t25, qt.t50, qt.t75) == pytest.approx((61 / 6,) * 3)


def test_zero_day_is_undefined():
    with pytest.raises(QuartileUndefined):
        quartile_times(np.zeros(144))


def test_day_vector_input():
    v = np.zeros(144)
    v[[12, 72, 132]] = 1.0
    dv = DayVector("p", "accel", None, v, True)
    qt = quartile_times(dv)
    assert (qt.t25, qt.t50, qt.t75) == pytest.approx((13 / 6, 73 / 6, 133 / 6))


day = st.lists(st.floats(0.0, 10.0), min_size=144, max_size=144)


@given(day)
def test_quartiles_match_brute_force_and_are_ordered(values):
    v = np.array(values)
    if v.sum() <= 0:
        return
    qt = quartile_times(v)
    assert 1 / 6 <= qt.t25 <= qt.t50 <= qt.t75 <= 24.0
    assert (qt.t25, qt.t50, qt.t75) == pytest.approx(brute_force(values))


@given(day, st.floats(0.01, 100.0))
def test_quartiles_scale_invariant(values, c):
    v = np.array(values)
    if v.sum() <= 0:
        return
    assert quartile_times(v) == quartile_times(v * c)


def test_aggregate_skips_zero_days():
    a = np.zeros(144)
    a[5] = 1
    days = [DayVector("p", "gps", None, a, True), DayVector("p", "gps", None, np.zeros(144), True),
            DayVector("p", "gps", None, np.ones(144), True)]
    qt = aggregate_quartiles(ParticipantSeries("p", "gps", days))
    assert qt.t25 == pytest.approx((1.0 + 6.0) / 2)
    assert qt.t75 == pytest.approx((1.0 + 18.0) / 2)
    with pytest.raises(QuartileUndefined):
        aggregate_quartiles(ParticipantSeries("p", "gps", days[1:2]))
