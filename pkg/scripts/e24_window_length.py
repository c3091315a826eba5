#!/usr/bin/env python3
"""Relative 23.5-24.5 h band energy of a pure 24 h sinusoid versus deployment length.

The band is 1 h wide in period, about 1/24 - 1/24.5 + 1/23.5 - 1/24 cycles/h
in frequency, while the grid step is 1/(oversample * T).  Short windows put
only one grid point of the main lobe inside the band.
"""

import argparse

import numpy as np

from crmetrics.spectral import e24, frequency_grid, lomb_scargle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--days", type=int, nargs="+", default=[3, 5, 7, 10, 14, 21, 28])
    ap.add_argument("--oversample", type=int, nargs="+", default=[4, 10])
    args = ap.parse_args()
    print(f"{'days':>4} {'oversample':>10} {'band pts':>8} {'E24 rel':>8} {'12 h rel':>8}")
    for days in args.days:
        t = (np.arange(144 * days) + 0.5) / 6
        for ov in args.oversample:
            grid = frequency_grid(t, oversample=ov)
            periods = 1 / grid
            pts = int(((periods >= 23.5) & (periods <= 24.5)).sum())
            rel24 = e24(lomb_scargle(t, np.cos(2 * np.pi * t / 24), grid))[1]
            rel12 = e24(lomb_scargle(t, np.cos(2 * np.pi * t / 12), grid))[1]
            print(f"{days:>4} {ov:>10} {pts:>8} {rel24:>8.3f} {rel12:>8.4f}")


if __name__ == "__main__":
    main()
