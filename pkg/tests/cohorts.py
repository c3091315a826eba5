"""Helpers that push synthetic cohorts through the real ingest path."""

import io

import numpy as np

from crmetrics.ingest import parse_accel, parse_gps, write_accel, write_gps
from crmetrics.pipeline import extract_cohort
from crmetrics.synth import FLOAT_FORMAT, gen_accel_cohort, gen_gps_cohort


def round_trip(tracks, writer, parser):
    buf = io.StringIO()
    writer(tracks, buf, float_format=FLOAT_FORMAT)
    parsed, report = parser(io.StringIO(buf.getvalue()))
    assert report.n_rejected == 0
    return parsed


def synth_tracks(spec):
    accel, accel_truth = gen_accel_cohort(spec)
    gps, gps_truth = gen_gps_cohort(spec)
    accel = round_trip(accel, write_accel, parse_accel)
    gps = round_trip(gps, write_gps, parse_gps)
    return accel, gps, accel_truth, gps_truth


def extract(spec, **kw):
    accel, gps, accel_truth, gps_truth = synth_tracks(spec)
    result = extract_cohort(accel, gps, spec.tz, **kw)
    return result, accel_truth, gps_truth


def metric(rows, sensor, name):
    return np.array([r.metrics.get(name) for r in rows if r.sensor == sensor], dtype=float)
