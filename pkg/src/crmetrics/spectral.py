"""Lomb-Scargle periodogram on true sample times and circadian band energy."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MIN_PERIOD_H = 4.0
MAX_PERIOD_H = 48.0
OVERSAMPLE = 4
ANCHOR_PERIOD_H = 24.0
BAND_H = (23.5, 24.5)


class SpectrumUndefined(ValueError):
    pass


@dataclass
class Periodogram:
    frequencies: np.ndarray  # cycles per hour
    power: np.ndarray
    n_samples: int

    @property
    def periods(self) -> np.ndarray:
        return 1.0 / self.frequencies


def frequency_grid(times, min_period: float = MIN_PERIOD_H, max_period: float = MAX_PERIOD_H,
                   oversample: int = OVERSAMPLE) -> np.ndarray:
    """Evenly spaced frequencies at 1/(oversample * T_obs) spacing.

    The grid is anchored so that exactly 1/24 cycles per hour is a grid
    point, and extends to cover [1/max_period, 1/min_period].
    """
    times = np.asarray(times, dtype=float)
    span = float(times.max() - times.min())
    if span <= 0:
        raise SpectrumUndefined("observation span is zero")
    df = 1.0 / (oversample * span)
    f0 = 1.0 / ANCHOR_PERIOD_H
    k_lo = math.floor((1.0 / max_period - f0) / df + 1e-9)
    k_hi = math.ceil((1.0 / min_period - f0) / df - 1e-9)
    freqs = f0 + df * np.arange(k_lo, k_hi + 1)
    return freqs[freqs > 0]


def lomb_scargle(times, values, frequencies=None, chunk: int = 256) -> Periodogram:
    """Classic Lomb-Scargle power normalized by the sample variance.

    Under a white-noise null each ordinate is approximately Exp(1).
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if t.shape != y.shape or t.size < 4:
        raise SpectrumUndefined("need at least four samples with matching times")
    var = float(np.var(y, ddof=1))
    if not var > 0:
        raise SpectrumUndefined("signal has zero variance")
    freqs = frequency_grid(t) if frequencies is None else np.asarray(frequencies, dtype=float)
    yc = y - y.mean()
    power = np.empty(freqs.size)
    for start in range(0, freqs.size, chunk):
        w = 2.0 * math.pi * freqs[start:start + chunk, None]
        wt = w * t[None, :]
        tau = np.arctan2(np.sin(2.0 * wt).sum(axis=1), np.cos(2.0 * wt).sum(axis=1)) / (2.0 * w[:, 0])
        arg = wt - w * tau[:, None]
        c, s = np.cos(arg), np.sin(arg)
        power[start:start + chunk] = ((c @ yc) ** 2 / (c * c).sum(axis=1)
                                      + (s @ yc) ** 2 / (s * s).sum(axis=1)) / (2.0 * var)
    return Periodogram(freqs, power, int(t.size))


def e24(p: Periodogram, band: tuple[float, float] = BAND_H) -> tuple[float, float]:
    """Summed power at grid periods inside ``band`` (hours): (raw, fraction of total)."""
    periods = p.periods
    lo, hi = band
    if periods.min() > lo or periods.max() < hi:
        raise SpectrumUndefined(f"grid does not cover periods {band}")
    inside = (periods >= lo) & (periods <= hi)
    raw = float(p.power[inside].sum())
    total = float(p.power.sum())
    return raw, (raw / total if total > 0 else 0.0)


def false_alarm_level(n_frequencies: int, confidence: float = 0.99) -> float:
    """Power threshold exceeded by the max of n independent Exp(1) ordinates with prob 1-confidence."""
    return -math.log(1.0 - confidence ** (1.0 / n_frequencies))


def write_periodogram(p: Periodogram, dest) -> None:
    dest.write("frequency,period_hours,power\n")
    for f, pw in zip(p.frequencies, p.power):
        dest.write(f"{float(f)!r},{float(1.0 / f)!r},{float(pw)!r}\n")
