import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy import special, stats

from crmetrics.cohort import CrMetricSet, compare_sensors
from crmetrics.cohort.compare import GROUPS, METRIC_LABELS
from crmetrics.cohort.welch import DegenerateTest, betainc, stars, t_sf_two_sided, welch_t
from oracles import welch_oracle

A = [1.0, 2.0, 3.0, 4.0, 5.0]
B = [2.0, 4.0, 6.0, 8.0, 10.0]


def test_hand_derived_example():
    res = welch_t(A, B)
    assert res.t == pytest.approx(-3 / math.sqrt(2.5), rel=1e-12)
    assert res.t == pytest.approx(-1.8974, abs=1e-4)
    # df = (0.5 + 2)^2 / (0.5^2/4 + 2^2/4)
    assert res.df == pytest.approx(6.25 / 1.0625, rel=1e-12)
    assert res.df == pytest.approx(5.88, abs=5e-3)
    assert res.p == pytest.approx(2 * stats.t.sf(abs(res.t), res.df), abs=1e-8)
    assert (res.mean_a, res.mean_b, res.n_a, res.n_b) == (3.0, 6.0, 5, 5)


def test_identical_samples():
    res = welch_t(A, A)
    assert res.t == 0.0 and res.p == pytest.approx(1.0, abs=1e-15)


def test_degenerate_inputs():
    with pytest.raises(DegenerateTest):
        welch_t([1.0], [1.0, 2.0])
    with pytest.raises(DegenerateTest):
        welch_t([2.0, 2.0], [3.0, 3.0])
    # one zero variance still defines the test
    assert welch_t([2.0, 2.0, 2.0], [1.0, 2.0, 3.0]).df == pytest.approx(2.0)


# scipy loses accuracy for subnormal x, so the oracle domain stops at normal floats
@given(st.floats(0.01, 200.0), st.one_of(st.just(0.0), st.floats(1e-300, 1.0)))
def test_betainc_matches_scipy(a, x):
    b = a * 0.37 + 0.5
    assert betainc(a, b, x) == pytest.approx(special.betainc(a, b, x), abs=1e-10)


@pytest.mark.parametrize("x", [5e-324, 1e-310, 1e-300])
def test_betainc_tiny_x_leading_term(x):
    # I_x(a, b) = x^a (1-x)^b / (a B(a, b)) * (1 + O(x))
    a = 0.015625
    b = a * 0.37 + 0.5
    lead = math.exp(a * math.log(x) - math.log(a) - special.betaln(a, b))
    assert betainc(a, b, x) == pytest.approx(lead, rel=1e-12)


@given(st.floats(-60, 60), st.floats(0.5, 500))
def test_t_tail_matches_scipy(t, df):
    assert t_sf_two_sided(t, df) == pytest.approx(2 * stats.t.sf(abs(t), df), abs=1e-10)


samples = st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=40)


@given(samples, samples)
def test_matches_oracle_and_swap_antisymmetry(a, b):
    assume(np.var(a) > 1e-6 or np.var(b) > 1e-6)
    r, s = welch_t(a, b), welch_t(b, a)
    t, df, p = welch_oracle(a, b)
    assert r.t == pytest.approx(t, rel=1e-9, abs=1e-12)
    assert r.df == pytest.approx(df, rel=1e-9)
    assert r.p == pytest.approx(p, abs=1e-8)
    assert s.t == -r.t and s.df == pytest.approx(r.df, rel=1e-12) and s.p == pytest.approx(r.p, abs=1e-15)
    assert 0.0 <= r.p <= 1.0
    assert r.df <= len(a) + len(b) - 2 + 1e-9


@given(samples, samples, st.floats(-100, 100))
def test_shift_invariance(a, b, c):
    assume(np.var(a) > 1e-3 and np.var(b) > 1e-3)
    r = welch_t(a, b)
    s = welch_t(np.add(a, c), np.add(b, c))
    assert s.t == pytest.approx(r.t, rel=1e-6, abs=1e-9)
    assert s.df == pytest.approx(r.df, rel=1e-6)
    assert s.p == pytest.approx(r.p, abs=1e-7)


@pytest.mark.parametrize("p,expected", [(0.2, ""), (0.05, ""), (0.049, "*"), (0.009, "**"), (0.0009, "***"),
                                        (float("nan"), "")])
def test_stars(p, expected):
    assert stars(p) == expected


def random_sets(rng, n, shift=0.0):
    return [CrMetricSet.from_labeled({k: rng.normal() + shift for k in METRIC_LABELS}) for _ in range(n)]


def test_compare_null_cohorts_rarely_significant():
    good = 0
    for seed in range(100):
        rng = np.random.default_rng(seed)
        rows = compare_sensors(random_sets(rng, 30), random_sets(rng, 30))
        good += all(r.p > 0.001 for r in rows)
    assert good >= 95


def test_compare_rows_and_reliability():
    rng = np.random.default_rng(0)
    a, b = random_sets(rng, 10, shift=3.0), random_sets(rng, 10)
    for m in a[:6]:
        m.iv = float("nan")
    rows = {r.metric: r for r in compare_sensors(a, b, GROUPS["all"])}
    assert list(rows) == list(METRIC_LABELS)
    assert rows["T25"].p < 0.001 and rows["T25"].stars == "***" and rows["T25"].reliable
    assert rows["IV"].n_a == 4 and not rows["IV"].reliable
    with pytest.raises(KeyError):
        compare_sensors(a, b, ["XYZ"])
