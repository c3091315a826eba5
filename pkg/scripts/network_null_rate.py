#!/usr/bin/env python3
"""Network sanity versus cohort size: null designs and the correlated-pair design."""

import argparse

import numpy as np

from crmetrics.cohort.network import mgm_network


def pair(rng, n, rho=0.99):
    M = rng.normal(size=(n, 11))
    M[:, 1] = rho * M[:, 0] + np.sqrt(1 - rho ** 2) * rng.normal(size=n)
    return M


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 1000, 2000, 5000])
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()
    print(f"{'n':>6} {'null quiet':>10} {'pair ok':>8} {'max null |w|':>13}")
    for n in args.sizes:
        quiet = ok = 0
        worst = []
        for s in range(args.seeds):
            g = mgm_network(np.random.default_rng(1000 + s).normal(size=(n, 11)), seed=s)
            w = np.abs(g.weights).max()
            worst.append(w)
            quiet += w < 0.05
            W = np.abs(mgm_network(pair(np.random.default_rng(s), n), seed=s).weights)
            strong = W[0, 1] > 0.4
            W[0, 1] = W[1, 0] = 0.0
            ok += strong and W.max() < 0.05
        print(f"{n:>6} {quiet:>7}/{args.seeds} {ok:>5}/{args.seeds} {np.median(worst):>13.4f}")


if __name__ == "__main__":
    main()
