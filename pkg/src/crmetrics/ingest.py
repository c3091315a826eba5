"""Raw sensor CSV parsing and local-time bin assignment.

Two input layouts are accepted, with exact headers::

    participant_id,timestamp_ms,x,y,z
    participant_id,timestamp_ms,latitude,longitude

Parsed records are held column-wise per participant (``AccelTrack`` /
``GpsTrack``) because a single participant at 10 Hz produces millions of
rows; iterating a track yields the record dataclasses.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from functools import lru_cache
from typing import IO, Iterator, NamedTuple, Union
from zoneinfo import ZoneInfo, ZoneInfoNotFoundError

import numpy as np
import pandas as pd

ACCEL_COLUMNS = ("participant_id", "timestamp_ms", "x", "y", "z")
GPS_COLUMNS = ("participant_id", "timestamp_ms", "latitude", "longitude")

BINS_PER_DAY = 144
BIN_MS = 10 * 60 * 1000
DAY_MS = 24 * 60 * 60 * 1000
_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()

Source = Union[str, os.PathLike, IO[str]]


class ConfigError(ValueError):
    """Invalid run configuration (unknown timezone, bad option values)."""


class IngestError(ValueError):
    """A malformed input record. ``line`` is 1-based and counts the header."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class AccelSample:
    participant_id: str
    t: int
    x: float
    y: float
    z: float


@dataclass(frozen=True)
class GpsFix:
    participant_id: str
    t: int
    lat: float
    lon: float


@dataclass(frozen=True, order=True)
class BinKey:
    date: date
    bin: int


@dataclass
class AccelTrack:
    """Time-sorted accelerometer samples of one participant."""

    participant_id: str
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> AccelSample:
        return AccelSample(self.participant_id, int(self.t[i]), float(self.x[i]),
                           float(self.y[i]), float(self.z[i]))

    def __iter__(self) -> Iterator[AccelSample]:
        for i in range(len(self)):
            yield self[i]


@dataclass
class GpsTrack:
    """Time-sorted GPS fixes of one participant."""

    participant_id: str
    t: np.ndarray
    lat: np.ndarray
    lon: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> GpsFix:
        return GpsFix(self.participant_id, int(self.t[i]), float(self.lat[i]),
                      float(self.lon[i]))

    def __iter__(self) -> Iterator[GpsFix]:
        for i in range(len(self)):
            yield self[i]


@dataclass
class ParseReport:
    n_rows: int = 0
    n_kept: int = 0
    n_duplicates: int = 0
    errors: list[IngestError] = field(default_factory=list)

    @property
    def n_rejected(self) -> int:
        return len(self.errors)


class Parsed(NamedTuple):
    tracks: dict
    report: ParseReport


# --------------------------------------------------------------------------
# parsing

def _open_text(source: Source) -> tuple[IO[str], bool]:
    if isinstance(source, (str, os.PathLike)):
        return open(source, newline=""), True
    return source, False


def _check_header(header: list[str], expected: tuple[str, ...]) -> None:
    if tuple(h.strip() for h in header) != expected:
        raise IngestError(1, f"expected header {','.join(expected)!r}, got {','.join(header)!r}")


def _validate_row(fields: list[str], n_values: int, gps: bool) -> tuple[str, int, list[float]]:
    if len(fields) != n_values + 2:
        raise ValueError(f"expected {n_values + 2} fields, got {len(fields)}")
    pid = fields[0].strip()
    if not pid:
        raise ValueError("empty participant_id")
    try:
        t = int(fields[1])
    except ValueError:
        raise ValueError(f"non-integer timestamp_ms {fields[1]!r}") from None
    if t < 0:
        raise ValueError(f"negative timestamp_ms {t}")
    values = []
    for raw in fields[2:]:
        try:
            v = float(raw)
        except ValueError:
            raise ValueError(f"non-numeric value {raw!r}") from None
        if not math.isfinite(v):
            raise ValueError(f"non-finite value {raw!r}")
        values.append(v)
    if gps:
        lat, lon = values
        if not -90.0 <= lat <= 90.0:
            raise ValueError(f"latitude {lat} outside [-90, 90]")
        if not -180.0 <= lon <= 180.0:
            raise ValueError(f"longitude {lon} outside [-180, 180]")
    return pid, t, values


def _slow_parse(text: str, columns: tuple[str, ...], strict: bool,
                report: ParseReport) -> pd.DataFrame:
    gps = columns == GPS_COLUMNS
    reader = csv.reader(io.StringIO(text))
    _check_header(next(reader), columns)
    pids, ts, vals = [], [], []
    for line_no, fields in enumerate(reader, start=2):
        if not fields:
            continue
        report.n_rows += 1
        try:
            pid, t, values = _validate_row(fields, len(columns) - 2, gps)
        except ValueError as exc:
            err = IngestError(line_no, str(exc))
            if strict:
                raise err from None
            report.errors.append(err)
            continue
        pids.append(pid)
        ts.append(t)
        vals.append(values)
    frame = pd.DataFrame(np.array(vals, dtype=float).reshape(-1, len(columns) - 2),
                         columns=list(columns[2:]))
    frame.insert(0, "timestamp_ms", np.array(ts, dtype=np.int64))
    frame.insert(0, "participant_id", np.array(pids, dtype=object))
    return frame


def _fast_parse(text: str, columns: tuple[str, ...]) -> pd.DataFrame | None:
    """C-engine parse of a clean file; ``None`` when any row needs a closer look."""
    dtypes = {c: np.float64 for c in columns[2:]}
    dtypes.update(participant_id=str, timestamp_ms=np.int64)
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=dtypes, keep_default_na=False,
                            na_values=[""], skip_blank_lines=True, float_precision="round_trip")
    except (ValueError, pd.errors.ParserError):
        return None
    if tuple(frame.columns) != columns:
        return None
    values = frame[list(columns[2:])].to_numpy()
    if not np.isfinite(values).all() or (frame["timestamp_ms"] < 0).any():
        return None
    pid = frame["participant_id"]
    if pid.isna().any() or (pid.str.strip() == "").any():
        return None
    if columns == GPS_COLUMNS:
        lat, lon = values[:, 0], values[:, 1]
        if (np.abs(lat) > 90).any() or (np.abs(lon) > 180).any():
            return None
    frame["participant_id"] = frame["participant_id"].str.strip()
    return frame


def _parse(source: Source, columns: tuple[str, ...], strict: bool) -> tuple[pd.DataFrame, ParseReport]:
    handle, owned = _open_text(source)
    try:
        text = handle.read()
    finally:
        if owned:
            handle.close()
    report = ParseReport()
    first = text.split("\n", 1)[0].rstrip("\r")
    if not first:
        raise IngestError(1, "missing header")
    _check_header(next(csv.reader([first])), columns)
    frame = _fast_parse(text, columns)
    if frame is None:
        frame = _slow_parse(text, columns, strict, report)
    else:
        report.n_rows = len(frame)
    frame = frame.sort_values(["participant_id", "timestamp_ms"], kind="stable")
    dup = frame.duplicated(["participant_id", "timestamp_ms"], keep="first")
    report.n_duplicates = int(dup.sum())
    frame = frame[~dup]
    report.n_kept = len(frame)
    return frame, report


def parse_accel(source: Source, strict: bool = True) -> Parsed:
    """Parse an accelerometer CSV into per-participant tracks sorted by time.

    In strict mode the first malformed row raises ``IngestError``; in lenient
    mode malformed rows are skipped and listed in the report.  Duplicate
    ``(participant_id, timestamp_ms)`` rows keep their first occurrence.
    """
    frame, report = _parse(source, ACCEL_COLUMNS, strict)
    tracks = {}
    for pid, g in frame.groupby("participant_id", sort=True):
        tracks[pid] = AccelTrack(pid, g["timestamp_ms"].to_numpy(np.int64),
                                 g["x"].to_numpy(float), g["y"].to_numpy(float),
                                 g["z"].to_numpy(float))
    return Parsed(tracks, report)


def parse_gps(source: Source, strict: bool = True) -> Parsed:
    """Parse a GPS CSV; out-of-range coordinates are record-level errors."""
    frame, report = _parse(source, GPS_COLUMNS, strict)
    tracks = {}
    for pid, g in frame.groupby("participant_id", sort=True):
        tracks[pid] = GpsTrack(pid, g["timestamp_ms"].to_numpy(np.int64),
                               g["latitude"].to_numpy(float), g["longitude"].to_numpy(float))
    return Parsed(tracks, report)


def write_accel(tracks: dict, dest: IO[str], float_format: str | None = None) -> None:
    frames = [pd.DataFrame({"participant_id": tr.participant_id, "timestamp_ms": tr.t,
                            "x": tr.x, "y": tr.y, "z": tr.z})
              for _, tr in sorted(tracks.items())]
    frame = pd.concat(frames) if frames else pd.DataFrame(columns=list(ACCEL_COLUMNS))
    frame.to_csv(dest, index=False, float_format=float_format, lineterminator="\n")


def write_gps(tracks: dict, dest: IO[str], float_format: str | None = None) -> None:
    frames = [pd.DataFrame({"participant_id": tr.participant_id, "timestamp_ms": tr.t,
                            "latitude": tr.lat, "longitude": tr.lon})
              for _, tr in sorted(tracks.items())]
    frame = pd.concat(frames) if frames else pd.DataFrame(columns=list(GPS_COLUMNS))
    frame.to_csv(dest, index=False, float_format=float_format, lineterminator="\n")


# --------------------------------------------------------------------------
# local time

@lru_cache(maxsize=None)
def get_zone(tz: str) -> ZoneInfo:
    try:
        return ZoneInfo(tz)
    except (ZoneInfoNotFoundError, ValueError) as exc:
        raise ConfigError(f"unknown timezone {tz!r}") from exc


def to_bin_key(t: int, tz: str) -> BinKey:
    """Local calendar date and 10-minute bin of epoch-millisecond ``t``."""
    local = datetime.fromtimestamp(t / 1000.0, tz=get_zone(tz))
    return BinKey(local.date(), (60 * local.hour + local.minute) // 10)


def local_bins(t: np.ndarray, tz: str) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``to_bin_key``: returns (date ordinal, bin index) arrays.

    UTC offsets are resolved once per distinct quarter hour, which is exact
    for every zone whose transitions fall on quarter-hour UTC instants.
    """
    zone = get_zone(tz)
    t = np.asarray(t, dtype=np.int64)
    if t.size == 0:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    quarter = t // 900_000
    uq, inverse = np.unique(quarter, return_inverse=True)
    offsets = np.array([
        zone.utcoffset(datetime.fromtimestamp(int(q) * 900, tz=timezone.utc)) // timedelta(milliseconds=1)
        for q in uq], dtype=np.int64)
    local_ms = t + offsets[inverse]
    day = local_ms // DAY_MS
    bins = (local_ms - day * DAY_MS) // BIN_MS
    return day + _EPOCH_ORDINAL, bins


def day_length_hours(day: date, tz: str) -> float:
    """Civil length of a local calendar day (23 or 25 on DST transitions)."""
    zone = get_zone(tz)
    start = datetime(day.year, day.month, day.day, tzinfo=zone)
    nxt = day + timedelta(days=1)
    end = datetime(nxt.year, nxt.month, nxt.day, tzinfo=zone)
    return (end.timestamp() - start.timestamp()) / 3600.0


def local_to_epoch_ms(day: date, seconds_after_midnight: np.ndarray, tz: str) -> np.ndarray:
    """Map local wall-clock offsets on a 24-hour day to epoch milliseconds."""
    zone = get_zone(tz)
    start = datetime(day.year, day.month, day.day, tzinfo=zone)
    base_ms = int(round(start.timestamp() * 1000))
    return base_ms + np.round(np.asarray(seconds_after_midnight) * 1000).astype(np.int64)
