"""Per-participant metric records and sensor-vs-sensor Welch comparisons."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .welch import DegenerateTest, stars, welch_t

# column label -> CrMetricSet attribute, in network node order
METRICS = {
    "T25": "t25", "T50": "t50", "T75": "t75",
    "MES": "mesor", "AMP": "amplitude", "PHI": "acrophase", "FS": "f_stat",
    "IV": "iv", "IS": "is_", "RA": "ra", "E24": "e24",
}
METRIC_LABELS = tuple(METRICS)

RQ1_METRICS = ("T25", "T50", "T75", "PHI", "FS", "IV")
RQ2_METRICS = ("E24", "IS")
GROUPS = {
    "rq1": RQ1_METRICS,
    "rq2": RQ2_METRICS,
    "both": RQ1_METRICS + RQ2_METRICS,
    "all": METRIC_LABELS,
}


@dataclass
class CrMetricSet:
    t25: float
    t50: float
    t75: float
    mesor: float
    amplitude: float
    acrophase: float
    f_stat: float
    iv: float
    is_: float
    ra: float
    e24: float

    def get(self, label: str) -> float:
        return getattr(self, METRICS[label])

    def as_labeled(self) -> dict[str, float]:
        return {label: getattr(self, attr) for label, attr in METRICS.items()}

    @classmethod
    def from_labeled(cls, row: dict) -> "CrMetricSet":
        return cls(**{attr: float(row[label]) for label, attr in METRICS.items()})

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in asdict(self).values())


@dataclass
class ComparisonRow:
    metric: str
    mean_a: float
    mean_b: float
    t: float
    df: float
    p: float
    stars: str
    n_a: int
    n_b: int
    reliable: bool


def compare_sensors(metrics_a: Sequence[CrMetricSet], metrics_b: Sequence[CrMetricSet],
                    metric_names: Sequence[str] = GROUPS["both"]) -> list[ComparisonRow]:
    """One Welch row per metric; rows whose metric is undefined for most of a cohort are unreliable."""
    rows = []
    for name in metric_names:
        if name not in METRICS:
            raise KeyError(f"unknown metric {name!r}")
        a = np.array([m.get(name) for m in metrics_a], dtype=float)
        b = np.array([m.get(name) for m in metrics_b], dtype=float)
        fa, fb = a[np.isfinite(a)], b[np.isfinite(b)]
        reliable = fa.size * 2 >= a.size and fb.size * 2 >= b.size and a.size > 0 and b.size > 0
        nan = float("nan")
        try:
            res = welch_t(fa, fb)
        except DegenerateTest:
            rows.append(ComparisonRow(name, float(fa.mean()) if fa.size else nan,
                                      float(fb.mean()) if fb.size else nan,
                                      nan, nan, nan, "", int(fa.size), int(fb.size), False))
            continue
        rows.append(ComparisonRow(name, res.mean_a, res.mean_b, res.t, res.df, res.p, stars(res.p),
                                  res.n_a, res.n_b, reliable))
    return rows


def metric_field_names() -> list[str]:
    return [f.name for f in fields(CrMetricSet)]
