"""144-bin daily activity vectors and per-participant series assembly."""

from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from typing import IO, Iterable, NamedTuple

import numpy as np

from .ingest import BINS_PER_DAY, AccelTrack, GpsTrack, day_length_hours, local_bins

EARTH_RADIUS_M = 6_371_000.0
SENSORS = ("accel", "gps")
BIN_HOURS = 1.0 / 6.0


@dataclass
class DayVector:
    """One local day of binned activity for one sensor.

    Missing bins hold NaN; ``complete`` days have all 144 bins finite.
    ``complete`` is also False for 23/25-hour civil days.
    """

    participant_id: str
    sensor: str
    date: date
    values: np.ndarray
    complete: bool
    counts: np.ndarray | None = None

    def __post_init__(self):
        if len(self.values) != BINS_PER_DAY:
            raise ValueError(f"day vector must have {BINS_PER_DAY} bins, got {len(self.values)}")


def accel_bin_value(x, y, z) -> float:
    """Mean absolute deviation of the acceleration magnitude from 1 g."""
    x, y, z = (np.asarray(a, dtype=float) for a in (x, y, z))
    if x.size == 0:
        return float("nan")
    return float(np.mean(np.abs(np.sqrt(x * x + y * y + z * z) - 1.0)))


def haversine(lat1, lon1, lat2, lon2):
    """Great-circle distance in meters; broadcasts over array arguments."""
    p1, p2 = np.radians(lat1), np.radians(lat2)
    dphi = p2 - p1
    dlmb = np.radians(np.asarray(lon2) - np.asarray(lon1))
    h = np.sin(dphi / 2.0) ** 2 + np.cos(p1) * np.cos(p2) * np.sin(dlmb / 2.0) ** 2
    d = 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(h, 0.0, 1.0)))
    return float(d) if np.ndim(d) == 0 else d


def gps_bin_displacement(prev, curr) -> float:
    """Distance from the previous bin's mean coordinate; 0 without a predecessor."""
    if curr is None:
        return float("nan")
    if prev is None:
        return 0.0
    return haversine(prev[0], prev[1], curr[0], curr[1])


def _group_bins(t: np.ndarray, tz: str):
    ordinal, bins = local_bins(t, tz)
    key = ordinal * BINS_PER_DAY + bins
    # tracks are time-sorted, but fall-back hours can reorder local keys
    ukey, first, inverse, counts = np.unique(key, return_index=True, return_inverse=True,
                                             return_counts=True)
    return ukey, first, inverse, counts


def _assemble_days(pid: str, sensor: str, ukey, per_bin, counts, tz: str) -> list[DayVector]:
    days = []
    ordinals = ukey // BINS_PER_DAY
    for ordinal in np.unique(ordinals):
        sel = ordinals == ordinal
        values = np.full(BINS_PER_DAY, np.nan)
        cnt = np.zeros(BINS_PER_DAY, dtype=np.int64)
        b = ukey[sel] - ordinal * BINS_PER_DAY
        values[b] = per_bin[sel]
        cnt[b] = counts[sel]
        d = date.fromordinal(int(ordinal))
        complete = bool((cnt > 0).all()) and day_length_hours(d, tz) == 24.0
        days.append(DayVector(pid, sensor, d, values, complete, cnt))
    return days


def accel_day_vectors(track: AccelTrack, tz: str) -> list[DayVector]:
    if len(track) == 0:
        return []
    ukey, _, inverse, counts = _group_bins(track.t, tz)
    dev = np.abs(np.sqrt(track.x ** 2 + track.y ** 2 + track.z ** 2) - 1.0)
    per_bin = np.bincount(inverse, weights=dev) / counts
    return _assemble_days(track.participant_id, "accel", ukey, per_bin, counts, tz)


def gps_day_vectors(track: GpsTrack, tz: str) -> list[DayVector]:
    """Per-bin displacement between consecutive non-empty bins' mean coordinates.

    The predecessor of a bin is the most recent earlier bin holding any fix,
    across day boundaries; the participant's first bin gets 0.
    """
    if len(track) == 0:
        return []
    ukey, first, inverse, counts = _group_bins(track.t, tz)
    # mean about the bin's first fix: identical fixes give that fix exactly
    lat0, lon0 = track.lat[first], track.lon[first]
    lat = lat0 + np.bincount(inverse, weights=track.lat - lat0[inverse]) / counts
    lon = lon0 + np.bincount(inverse, weights=track.lon - lon0[inverse]) / counts
    disp = np.zeros(len(ukey))
    if len(ukey) > 1:
        disp[1:] = haversine(lat[:-1], lon[:-1], lat[1:], lon[1:])
    return _assemble_days(track.participant_id, "gps", ukey, disp, counts, tz)


@dataclass
class ParticipantSeries:
    """Retained complete days of one participant for one sensor."""

    participant_id: str
    sensor: str
    days: list[DayVector]

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([d.values for d in self.days])

    @property
    def bin_times(self) -> np.ndarray:
        """Hours since local midnight of the first retained day, at bin centers.

        Whole-day gaps between non-consecutive days are preserved, so
        ``bin_times % 24`` is the local clock time of each bin center.
        """
        first = self.days[0].date.toordinal()
        centers = (np.arange(BINS_PER_DAY) + 0.5) * BIN_HOURS
        return np.concatenate([24.0 * (d.date.toordinal() - first) + centers for d in self.days])

    @property
    def hour_of_day(self) -> np.ndarray:
        return np.tile(np.arange(BINS_PER_DAY) // 6, len(self.days))

    @property
    def n_days(self) -> int:
        return len(self.days)


@dataclass
class Rejection:
    participant_id: str
    accel_days: int
    gps_days: int
    joint_days: int
    reason: str


class SeriesSet(NamedTuple):
    series: dict
    rejections: list


def build_series(day_vectors: Iterable[DayVector], min_days: int = 5) -> SeriesSet:
    """Keep days complete for both sensors; keep participants with enough of them.

    Returns ``series[pid][sensor] -> ParticipantSeries`` (participants in id
    order) and a rejection list with per-sensor complete-day counts.
    """
    by_pid: dict[str, dict[str, dict[date, DayVector]]] = defaultdict(lambda: {s: {} for s in SENSORS})
    for dv in day_vectors:
        by_pid[dv.participant_id][dv.sensor][dv.date] = dv
    series, rejections = {}, []
    for pid in sorted(by_pid):
        sensors = by_pid[pid]
        complete = {s: {d for d, dv in sensors[s].items() if dv.complete} for s in SENSORS}
        joint = sorted(complete["accel"] & complete["gps"])
        if len(joint) < min_days:
            rejections.append(Rejection(pid, len(complete["accel"]), len(complete["gps"]), len(joint),
                                        f"{len(joint)} jointly complete days < {min_days}"))
            continue
        series[pid] = {s: ParticipantSeries(pid, s, [sensors[s][d] for d in joint]) for s in SENSORS}
    return SeriesSet(series, rejections)


def bin_participant(accel: AccelTrack | None, gps: GpsTrack | None, tz: str) -> list[DayVector]:
    days = []
    if accel is not None:
        days += accel_day_vectors(accel, tz)
    if gps is not None:
        days += gps_day_vectors(gps, tz)
    return days


def write_day_vectors(days: Iterable[DayVector], dest: IO[str]) -> None:
    """Audit dump: one row per (participant, sensor, date)."""
    writer = csv.writer(dest, lineterminator="\n")
    writer.writerow(["participant_id", "sensor", "date"]
                    + [f"b{i:03d}" for i in range(BINS_PER_DAY)] + ["complete"])
    for dv in sorted(days, key=lambda d: (d.participant_id, d.sensor, d.date)):
        writer.writerow([dv.participant_id, dv.sensor, dv.date.isoformat()]
                        + ["" if np.isnan(v) else repr(float(v)) for v in dv.values]
                        + [int(dv.complete)])
