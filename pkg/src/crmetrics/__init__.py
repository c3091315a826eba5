"""Circadian-rhythm metrics from smartphone accelerometer and GPS streams."""

__version__ = "0.1.0"

from .binning import DayVector, ParticipantSeries, build_series, haversine
from .cosinor import CosinorFit, fit_basic, fit_transformed, f_statistic
from .ingest import parse_accel, parse_gps, to_bin_key
from .nonparam import interdaily_stability, intradaily_variability, m10_l5_ra
from .quartile import QuartileTimes, aggregate_quartiles, quartile_times
from .spectral import Periodogram, e24, lomb_scargle

__all__ = [
    "DayVector", "ParticipantSeries", "build_series", "haversine", "CosinorFit", "fit_basic",
    "fit_transformed", "f_statistic", "parse_accel", "parse_gps", "to_bin_key",
    "interdaily_stability", "intradaily_variability", "m10_l5_ra", "QuartileTimes",
    "aggregate_quartiles", "quartile_times", "Periodogram", "e24", "lomb_scargle",
]
