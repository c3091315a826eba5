"""Quartile activity times: when a day's cumulative activity reaches 25/50/75%."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .binning import BIN_HOURS, ParticipantSeries

log = logging.getLogger(__name__)

FRACTIONS = (0.25, 0.5, 0.75)
# absorbs cumulative-sum rounding so exact ties resolve to the crossing bin
_TIE_RTOL = 1e-9


class QuartileUndefined(ValueError):
    pass


@dataclass(frozen=True)
class QuartileTimes:
    t25: float
    t50: float
    t75: float


def quartile_times(values) -> QuartileTimes:
    """End times (decimal hours) of the first bins reaching each fraction.

    ``values`` is one complete day of 144 non-negative bin values (a
    ``DayVector`` is accepted too).
    """
    values = np.asarray(getattr(values, "values", values), dtype=float)
    total = values.sum()
    if not np.isfinite(total) or total <= 0:
        raise QuartileUndefined("day has no activity")
    running = np.cumsum(values)
    targets = np.array(FRACTIONS) * total * (1.0 - _TIE_RTOL)
    idx = np.searchsorted(running, targets, side="left")
    idx = np.minimum(idx, len(values) - 1)
    t25, t50, t75 = ((idx + 1) * BIN_HOURS).tolist()
    return QuartileTimes(t25, t50, t75)


def aggregate_quartiles(series: ParticipantSeries) -> QuartileTimes:
    """Unweighted mean of per-day quartile times over days where they exist."""
    triples = []
    for day in series.days:
        try:
            triples.append(quartile_times(day.values))
        except QuartileUndefined:
            pass
    dropped = len(series.days) - len(triples)
    if dropped:
        log.info("%s/%s: %d zero-activity days skipped for quartiles",
                 series.participant_id, series.sensor, dropped)
    if not triples:
        raise QuartileUndefined(f"{series.participant_id}/{series.sensor}: no day with activity")
    arr = np.array([(q.t25, q.t50, q.t75) for q in triples])
    return QuartileTimes(*arr.mean(axis=0).tolist())
