#!/usr/bin/env python3
"""How IV tracks accelerometer fragmentation and IS tracks GPS schedule jitter."""

import argparse

import numpy as np

from crmetrics.pipeline import extract_cohort
from crmetrics.synth import AccelModel, GpsModel, SynthSpec, gen_accel_cohort, gen_gps_cohort


def metric(spec, sensor, name):
    rows = extract_cohort(gen_accel_cohort(spec)[0], gen_gps_cohort(spec)[0], spec.tz).rows
    return np.array([r.metrics.get(name) for r in rows if r.sensor == sensor], dtype=float)


def cohort(seed, n, **kw):
    return SynthSpec(seed=seed, n_participants=n, days=7, accel_hz=1 / 600, gps_fixes_per_bin=1, **kw)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--participants", type=int, default=15)
    ap.add_argument("--rates", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0, 4.0])
    ap.add_argument("--jitters", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0, 3.0])
    args = ap.parse_args()

    print("fragmentation (bouts/h)   mean IV accel   sd")
    for rate in args.rates:
        spec = cohort(args.seed, args.participants,
                      accel=AccelModel(noise_sd=0.02, fragmentation_rate=rate, acrophase_sd=1.0))
        iv = metric(spec, "accel", "IV")
        print(f"{rate:>23.2f}   {iv.mean():>13.4f}   {iv.std(ddof=1):.4f}")

    print("\njitter sd (h)   mean IS gps   sd")
    for jitter in args.jitters:
        spec = cohort(args.seed, args.participants, gps=GpsModel(jitter_sd_h=jitter))
        is_ = metric(spec, "gps", "IS")
        print(f"{jitter:>13.2f}   {np.nanmean(is_):>11.4f}   {np.nanstd(is_, ddof=1):.4f}")


if __name__ == "__main__":
    main()
