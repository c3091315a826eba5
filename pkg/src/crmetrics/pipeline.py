"""Per-participant metric extraction: binned series in, CR metric rows out."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .binning import SENSORS, ParticipantSeries, bin_participant, build_series
from .cohort.compare import CrMetricSet
from .cosinor import FitError, fit_basic, fit_transformed
from .nonparam import nonparam_metrics
from .quartile import QuartileUndefined, aggregate_quartiles
from .spectral import OVERSAMPLE, SpectrumUndefined, e24, frequency_grid, lomb_scargle

log = logging.getLogger(__name__)

NAN = float("nan")


@dataclass
class ExtractOptions:
    resolution: str = "10min"
    min_period: float = 4.0
    max_period: float = 48.0
    oversample: int = OVERSAMPLE


@dataclass
class MetricRow:
    participant_id: str
    sensor: str
    n_days: int
    metrics: CrMetricSet
    m10: float
    l5: float
    diagnostics: dict = field(default_factory=dict)


def series_metrics(series: ParticipantSeries, opts: ExtractOptions | None = None) -> MetricRow:
    """All CR metrics for one participant and sensor; undefined ones are NaN."""
    opts = opts or ExtractOptions()
    values, times = series.values, series.bin_times
    diag: dict = {}
    try:
        q = aggregate_quartiles(series)
        t25, t50, t75 = q.t25, q.t50, q.t75
    except QuartileUndefined:
        t25 = t50 = t75 = NAN
    try:
        fit = fit_transformed(times, values)
        mes, amp, phi, fs = fit.mesor, fit.amplitude, fit.acrophase, fit.f_stat
        diag.update(converged=int(fit.converged), rss=fit.rss, n_iter=fit.n_iter,
                    alpha=fit.alpha, beta=fit.beta)
        if not np.ptp(values) > 0:
            # a flat signal has a level but no peak time, and F is 0/0
            phi = fs = NAN
        if not fit.converged:
            log.warning("%s/%s: transformed cosinor did not converge", series.participant_id, series.sensor)
    except FitError:
        mes = amp = phi = fs = NAN
        diag.update(converged=0, rss=NAN, n_iter=0, alpha=NAN, beta=NAN)
    try:
        basic = fit_basic(times, values)
        diag.update(basic_MES=basic.mesor, basic_AMP=basic.amplitude, basic_PHI=basic.acrophase,
                    basic_FS=basic.f_stat)
    except FitError:
        diag.update(basic_MES=NAN, basic_AMP=NAN, basic_PHI=NAN, basic_FS=NAN)
    np_metrics = nonparam_metrics(series, opts.resolution)
    try:
        grid = frequency_grid(times, opts.min_period, opts.max_period, opts.oversample)
        e24_raw, e24_rel = e24(lomb_scargle(times, values, grid))
    except SpectrumUndefined:
        e24_raw = e24_rel = NAN
    diag["E24_raw"] = e24_raw
    metrics = CrMetricSet(t25, t50, t75, mes, amp, phi, fs, np_metrics["iv"], np_metrics["is_"],
                          np_metrics["ra"], e24_rel)
    return MetricRow(series.participant_id, series.sensor, series.n_days, metrics,
                     np_metrics["m10"], np_metrics["l5"], diag)


def _participant_metrics(args) -> list[MetricRow]:
    series_by_sensor, opts = args
    return [series_metrics(series_by_sensor[s], opts) for s in SENSORS]


def _participant_days(args):
    accel, gps, tz = args
    return bin_participant(accel, gps, tz)


@dataclass
class ExtractResult:
    rows: list
    rejections: list
    day_vectors: list


def extract_cohort(accel_tracks: dict, gps_tracks: dict, tz: str, min_days: int = 5,
                   opts: ExtractOptions | None = None, jobs: int = 1) -> ExtractResult:
    """Bin, filter and measure a whole cohort; output ordered by participant then sensor."""
    opts = opts or ExtractOptions()
    pids = sorted(set(accel_tracks) | set(gps_tracks))
    bin_args = [(accel_tracks.get(p), gps_tracks.get(p), tz) for p in pids]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_pid = list(pool.map(_participant_days, bin_args))
            days = [dv for chunk in per_pid for dv in chunk]
            built = build_series(days, min_days)
            metric_args = [(built.series[p], opts) for p in sorted(built.series)]
            rows = [r for chunk in pool.map(_participant_metrics, metric_args) for r in chunk]
    else:
        days = [dv for a in bin_args for dv in _participant_days(a)]
        built = build_series(days, min_days)
        rows = [r for p in sorted(built.series) for r in _participant_metrics((built.series[p], opts))]
    return ExtractResult(rows, built.rejections, days)


def metrics_matrix(rows, sensor: str) -> tuple[list[str], np.ndarray]:
    sel = [r for r in rows if r.sensor == sensor]
    labels = list(sel[0].metrics.as_labeled()) if sel else []
    M = np.array([[v for v in r.metrics.as_labeled().values()] for r in sel], dtype=float)
    return [r.participant_id for r in sel], M.reshape(len(sel), len(labels) or 11)


def is_finite_number(v) -> bool:
    return isinstance(v, (int, float)) and math.isfinite(v)
