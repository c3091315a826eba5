"""Synthetic accelerometer/GPS cohorts with known circadian structure.

Accelerometer: every sample in a bin shares one target deviation from 1 g
(a random direction per sample), so the binned value equals the target
exactly.  Targets follow a basic or sigmoidally transformed cosinor curve,
plus optional Gaussian noise and Poisson activity bouts.

GPS: a participant moves between anchor places on a daily schedule;
commutes are straight-line motions of fixed duration and the schedule is
jittered day to day.  Fixes are taken during the first minute of every
10-minute bin.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .binning import EARTH_RADIUS_M
from .cosinor import OMEGA, transformed_curve
from .ingest import (BINS_PER_DAY, AccelTrack, ConfigError, GpsTrack, get_zone, local_to_epoch_ms,
                     write_accel, write_gps)

BIN_SECONDS = 600
M_PER_DEG = EARTH_RADIUS_M * math.pi / 180.0
FLOAT_FORMAT = "%.12g"


@dataclass
class AccelModel:
    mesor: float = 0.3
    amplitude: float = 0.2
    acrophase: float = 16.0
    alpha: float | None = None
    beta: float | None = None
    noise_sd: float = 0.0
    fragmentation_rate: float = 0.0  # bouts per hour
    bout_size: float = 0.3
    mesor_sd: float = 0.0
    amplitude_sd: float = 0.0
    acrophase_sd: float = 0.0


@dataclass
class GpsModel:
    n_anchors: int = 3
    # (local hour, destination anchor); anchor 0 is home
    schedule: list = field(default_factory=lambda: [[8.0, 1], [12.5, 2], [13.5, 1], [18.0, 0]])
    displacement_scale_m: float = 2000.0
    jitter_sd_h: float = 0.5
    commute_minutes: float = 40.0
    fix_noise_m: float = 0.0
    center_lat: float = 30.2849
    center_lon: float = -97.7341


@dataclass
class SynthSpec:
    seed: int
    n_participants: int = 20
    days: int = 7
    start_date: str = "2018-10-01"
    tz: str = "America/Chicago"
    accel_hz: float = 1.0
    gps_fixes_per_bin: int = 6
    dropout_rate: float = 0.0
    accel: AccelModel = field(default_factory=AccelModel)
    gps: GpsModel = field(default_factory=GpsModel)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        def need(ok: bool, path: str, msg: str):
            if not ok:
                raise ConfigError(f"{path}: {msg}")

        need(isinstance(self.seed, int) and not isinstance(self.seed, bool), "seed", "must be an integer")
        need(self.n_participants >= 1, "n_participants", "must be >= 1")
        need(self.days >= 1, "days", "must be >= 1")
        need(self.accel_hz > 0 and self.accel_hz * BIN_SECONDS >= 1, "accel_hz",
             "must give at least one sample per 10-minute bin")
        need(1 <= self.gps_fixes_per_bin <= 60, "gps_fixes_per_bin", "must be in [1, 60]")
        need(0.0 <= self.dropout_rate < 1.0, "dropout_rate", "must be in [0, 1)")
        try:
            date.fromisoformat(self.start_date)
        except (TypeError, ValueError):
            raise ConfigError(f"start_date: not an ISO date: {self.start_date!r}") from None
        get_zone(self.tz)
        a = self.accel
        for name in ("noise_sd", "fragmentation_rate", "bout_size", "mesor_sd", "amplitude_sd",
                     "acrophase_sd", "amplitude"):
            need(getattr(a, name) >= 0, f"accel.{name}", "must be >= 0")
        need((a.alpha is None) == (a.beta is None), "accel.beta", "alpha and beta must be given together")
        if a.beta is not None:
            need(a.beta > 0, "accel.beta", "must be > 0")
            need(-1 < a.alpha < 1, "accel.alpha", "must be in (-1, 1)")
        g = self.gps
        need(g.n_anchors >= 1, "gps.n_anchors", "must be >= 1")
        for name in ("displacement_scale_m", "jitter_sd_h", "fix_noise_m"):
            need(getattr(g, name) >= 0, f"gps.{name}", "must be >= 0")
        need(0 < g.commute_minutes < 240, "gps.commute_minutes", "must be in (0, 240)")
        for i, entry in enumerate(g.schedule):
            need(len(entry) == 2 and 0 <= float(entry[0]) < 24, f"gps.schedule[{i}]",
                 "must be [hour in [0, 24), anchor]")
            need(0 <= int(entry[1]) < g.n_anchors, f"gps.schedule[{i}]", "anchor index out of range")

    @classmethod
    def from_dict(cls, doc: dict) -> "SynthSpec":
        if not isinstance(doc, dict):
            raise ConfigError("spec: must be a mapping")
        if "seed" not in doc:
            raise ConfigError("seed: required field missing")
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"{sorted(unknown)[0]}: unknown field")
        kw = dict(doc)
        for key, model in (("accel", AccelModel), ("gps", GpsModel)):
            if key in kw:
                sub = kw[key] or {}
                bad = set(sub) - {f.name for f in fields(model)}
                if bad:
                    raise ConfigError(f"{key}.{sorted(bad)[0]}: unknown field")
                kw[key] = model(**sub)
        try:
            return cls(**kw)
        except TypeError as exc:
            raise ConfigError(f"spec: {exc}") from None

    def to_dict(self) -> dict:
        return asdict(self)


def _seq(spec: SynthSpec, pid_index: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(pid_index, stream)))


def participant_ids(spec: SynthSpec) -> list[str]:
    width = max(3, len(str(spec.n_participants - 1)))
    return [f"p{i:0{width}d}" for i in range(spec.n_participants)]


def _days(spec: SynthSpec) -> list[date]:
    first = date.fromisoformat(spec.start_date)
    return [first + timedelta(days=k) for k in range(spec.days)]


def _day_epochs(spec: SynthSpec, seconds: np.ndarray) -> np.ndarray:
    return np.concatenate([local_to_epoch_ms(d, seconds, spec.tz) for d in _days(spec)])


def accel_curve(t_hours, truth: dict) -> np.ndarray:
    if truth["model"] == "transformed":
        return transformed_curve(t_hours, truth["minimum"], truth["span"], truth["alpha"],
                                 truth["beta"], truth["acrophase"])
    return truth["mesor"] + truth["amplitude"] * np.cos(OMEGA * (np.asarray(t_hours) - truth["acrophase"]))


def _accel_participant(spec: SynthSpec, i: int, pid: str) -> tuple[AccelTrack, dict]:
    rng = _seq(spec, i, 0)
    m = spec.accel
    truth = {
        "model": "basic" if m.beta is None else "transformed",
        "mesor": m.mesor + (rng.normal(0, m.mesor_sd) if m.mesor_sd else 0.0),
        "amplitude": max(0.0, m.amplitude + (rng.normal(0, m.amplitude_sd) if m.amplitude_sd else 0.0)),
        "acrophase": (m.acrophase + (rng.normal(0, m.acrophase_sd) if m.acrophase_sd else 0.0)) % 24.0,
    }
    if m.beta is not None:
        truth.update(alpha=m.alpha, beta=m.beta, minimum=truth["mesor"] - truth["amplitude"],
                     span=2.0 * truth["amplitude"])
    n_bins = spec.days * BINS_PER_DAY
    centers = (np.arange(n_bins) % BINS_PER_DAY + 0.5) / 6.0
    target = accel_curve(centers, truth)
    if m.noise_sd:
        target = target + rng.normal(0.0, m.noise_sd, n_bins)
    if m.fragmentation_rate:
        target = target + m.bout_size * rng.poisson(m.fragmentation_rate / 6.0, n_bins)
    target = np.clip(target, 0.0, None)

    per_bin = int(round(spec.accel_hz * BIN_SECONDS))
    offsets = np.arange(per_bin) * (BIN_SECONDS / per_bin)
    seconds = (np.arange(BINS_PER_DAY)[:, None] * BIN_SECONDS + offsets[None, :]).ravel()
    t = _day_epochs(spec, seconds)
    keep_bin = rng.random(n_bins) >= spec.dropout_rate if spec.dropout_rate else np.ones(n_bins, bool)
    mag = np.repeat(1.0 + target, per_bin)
    u = rng.normal(size=(mag.size, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    xyz = u * mag[:, None]
    keep = np.repeat(keep_bin, per_bin)
    track = AccelTrack(pid, t[keep], xyz[keep, 0], xyz[keep, 1], xyz[keep, 2])
    return track, truth


def _anchors(model: GpsModel, rng: np.random.Generator) -> np.ndarray:
    """Anchor coordinates (lat, lon) as offsets around the campus center."""
    out = np.empty((model.n_anchors, 2))
    coslat = math.cos(math.radians(model.center_lat))
    for k in range(model.n_anchors):
        r = model.displacement_scale_m * rng.uniform(0.5, 1.0) if k else \
            model.displacement_scale_m * rng.uniform(0.0, 0.5)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        out[k, 0] = model.center_lat + r * math.sin(theta) / M_PER_DEG
        out[k, 1] = model.center_lon + r * math.cos(theta) / (M_PER_DEG * coslat)
    return out


def _day_path(model: GpsModel, anchors: np.ndarray, rng: np.random.Generator):
    """Knot times (s after midnight) and positions of one day's piecewise-linear path."""
    schedule = sorted((float(h), int(a)) for h, a in model.schedule)
    home = schedule[-1][1] if schedule else 0
    commute = model.commute_minutes * 60.0
    knots_t, knots_p = [0.0], [anchors[home]]
    here, clock = home, 0.0
    for hour, dest in schedule:
        start = hour * 3600.0 + (rng.normal(0.0, model.jitter_sd_h) * 3600.0 if model.jitter_sd_h else 0.0)
        start = min(max(start, clock), 86400.0 - commute - 1.0)
        if dest != here:
            knots_t += [start, start + commute]
            knots_p += [anchors[here], anchors[dest]]
            clock = start + commute
            here = dest
    knots_t.append(86400.0)
    knots_p.append(anchors[here])
    return np.array(knots_t), np.array(knots_p)


def _gps_participant(spec: SynthSpec, i: int, pid: str) -> tuple[GpsTrack, dict]:
    rng = _seq(spec, i, 1)
    model = spec.gps
    anchors = _anchors(model, rng)
    k = spec.gps_fixes_per_bin
    offsets = np.arange(k) * (60.0 / k)
    seconds = (np.arange(BINS_PER_DAY)[:, None] * BIN_SECONDS + offsets[None, :]).ravel()
    lat, lon = [], []
    for _ in range(spec.days):
        kt, kp = _day_path(model, anchors, rng)
        lat.append(np.interp(seconds, kt, kp[:, 0]))
        lon.append(np.interp(seconds, kt, kp[:, 1]))
    lat, lon = np.concatenate(lat), np.concatenate(lon)
    if model.fix_noise_m:
        coslat = math.cos(math.radians(model.center_lat))
        lat = lat + rng.normal(0.0, model.fix_noise_m, lat.size) / M_PER_DEG
        lon = lon + rng.normal(0.0, model.fix_noise_m, lon.size) / (M_PER_DEG * coslat)
    t = _day_epochs(spec, seconds)
    n_bins = spec.days * BINS_PER_DAY
    keep_bin = rng.random(n_bins) >= spec.dropout_rate if spec.dropout_rate else np.ones(n_bins, bool)
    keep = np.repeat(keep_bin, k)
    truth = {"anchors": anchors.tolist(), "schedule": [list(e) for e in model.schedule],
             "jitter_sd_h": model.jitter_sd_h}
    return GpsTrack(pid, t[keep], lat[keep], lon[keep]), truth


def gen_accel_cohort(spec: SynthSpec) -> tuple[dict, dict]:
    """Accelerometer tracks and generating parameters for every participant."""
    tracks, truth = {}, {}
    for i, pid in enumerate(participant_ids(spec)):
        tracks[pid], truth[pid] = _accel_participant(spec, i, pid)
    return tracks, truth


def gen_gps_cohort(spec: SynthSpec) -> tuple[dict, dict]:
    tracks, truth = {}, {}
    for i, pid in enumerate(participant_ids(spec)):
        tracks[pid], truth[pid] = _gps_participant(spec, i, pid)
    return tracks, truth


def write_cohort(spec: SynthSpec, out_dir) -> dict[str, Path]:
    """Write ``accel.csv``, ``gps.csv`` and ``ground_truth.json`` into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    accel, accel_truth = gen_accel_cohort(spec)
    gps, gps_truth = gen_gps_cohort(spec)
    paths = {"accel": out / "accel.csv", "gps": out / "gps.csv", "truth": out / "ground_truth.json"}
    with open(paths["accel"], "w", newline="") as fh:
        write_accel(accel, fh, float_format=FLOAT_FORMAT)
    with open(paths["gps"], "w", newline="") as fh:
        write_gps(gps, fh, float_format=FLOAT_FORMAT)
    doc = {"spec": spec.to_dict(),
           "participants": {pid: {"accel": accel_truth[pid], "gps": gps_truth[pid]} for pid in accel}}
    paths["truth"].write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return paths
