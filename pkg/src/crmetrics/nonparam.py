"""Non-parametric rhythm descriptors: IV, IS, M10, L5 and RA.

Functions take flat sample arrays so they work at either the native
10-minute resolution or on hourly re-binned data; ``nonparam_metrics``
wires them to a ``ParticipantSeries``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binning import BIN_HOURS, BINS_PER_DAY, ParticipantSeries

RESOLUTIONS = ("10min", "hourly")


class NonparamUndefined(ValueError):
    pass


@dataclass
class HourlyProfile:
    means: np.ndarray
    counts: np.ndarray


def hourly_profile(values, hours) -> HourlyProfile:
    """Mean of all samples falling in each local clock hour 0..23."""
    values = np.asarray(values, dtype=float)
    hours = np.asarray(hours, dtype=np.int64)
    counts = np.bincount(hours, minlength=24)
    sums = np.bincount(hours, weights=values, minlength=24)
    if (counts == 0).any():
        missing = np.flatnonzero(counts == 0).tolist()
        raise NonparamUndefined(f"no samples in hours {missing}")
    return HourlyProfile(sums / counts, counts)


def _variance(values: np.ndarray) -> float:
    var = float(np.mean((values - values.mean()) ** 2))
    if not var > 0:
        raise NonparamUndefined("signal has zero variance")
    return var


def intradaily_variability(values, times=None, step: float = BIN_HOURS) -> float:
    """Mean squared successive difference over the population variance.

    With ``times`` given, only pairs exactly one ``step`` apart enter the
    numerator, so gaps between non-consecutive days add nothing.
    """
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        raise NonparamUndefined("need at least two samples")
    var = _variance(values)
    diffs = np.diff(values)
    if times is not None:
        gaps = np.diff(np.asarray(times, dtype=float))
        diffs = diffs[np.abs(gaps - step) < 1e-6 * step]
        if diffs.size == 0:
            raise NonparamUndefined("no adjacent sample pairs")
    return float(np.mean(diffs ** 2) / var)


def interdaily_stability(values, hours) -> float:
    """Variance of the 24-hour mean profile over the total variance."""
    values = np.asarray(values, dtype=float)
    var = _variance(values)
    profile = hourly_profile(values, hours)
    return float(np.mean((profile.means - values.mean()) ** 2) / var)


def m10_l5_ra(profile) -> tuple[float, float, float]:
    """M10, L5 and relative amplitude from a 24-value hourly profile, windows wrapping midnight."""
    means = np.asarray(getattr(profile, "means", profile), dtype=float)
    if means.shape != (24,):
        raise ValueError("hourly profile must have 24 values")
    ring = np.concatenate([[0.0], np.cumsum(np.concatenate([means, means]))])
    m10 = float(np.max(ring[10:34] - ring[0:24]) / 10.0)
    l5 = float(np.min(ring[5:29] - ring[0:24]) / 5.0)
    ra = 0.0 if m10 + l5 == 0 else (m10 - l5) / (m10 + l5)
    return m10, l5, ra


def hourly_resample(series: ParticipantSeries) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hourly means of a 10-minute series: (values, times at hour centers, hour of day)."""
    days = len(series.days)
    values = series.values.reshape(days, 24, BINS_PER_DAY // 24).mean(axis=2).ravel()
    offsets = 24.0 * np.array([d.date.toordinal() - series.days[0].date.toordinal() for d in series.days])
    times = (offsets[:, None] + np.arange(24) + 0.5).ravel()
    return values, times, np.tile(np.arange(24), days)


def nonparam_metrics(series: ParticipantSeries, resolution: str = "10min") -> dict[str, float]:
    """IV, IS, M10, L5, RA for one series; undefined values come back as NaN."""
    if resolution == "10min":
        values, times, hours, step = series.values, series.bin_times, series.hour_of_day, BIN_HOURS
    elif resolution == "hourly":
        values, times, hours = hourly_resample(series)
        step = 1.0
    else:
        raise ValueError(f"resolution must be one of {RESOLUTIONS}, got {resolution!r}")
    out = {}
    try:
        out["iv"] = intradaily_variability(values, times, step)
    except NonparamUndefined:
        out["iv"] = float("nan")
    try:
        out["is_"] = interdaily_stability(values, hours)
    except NonparamUndefined:
        out["is_"] = float("nan")
    # the activity profile is always taken from the native bins
    m10, l5, ra = m10_l5_ra(hourly_profile(series.values, series.hour_of_day))
    out.update(m10=m10, l5=l5, ra=ra)
    return out
