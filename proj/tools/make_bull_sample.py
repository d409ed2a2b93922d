#!/usr/bin/env python3
"""Writes a synthetic bull-market price file: two correlated geometric random
walks with positive drift, 93 daily closes (ticks 0..92)."""

import argparse
import math
import random


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data/bull_market_sample.csv")
    ap.add_argument("--seed", type=int, default=20190614)
    ap.add_argument("--ticks", type=int, default=93)
    ap.add_argument("--drift", type=float, default=0.0012)
    ap.add_argument("--vol", type=float, default=0.009)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    a, b = 2750.0, 1180.0
    rows = []
    for t in range(args.ticks):
        if t:
            common = rng.gauss(0.0, 1.0)
            za = 0.7 * common + math.sqrt(1 - 0.49) * rng.gauss(0.0, 1.0)
            zb = 0.7 * common + math.sqrt(1 - 0.49) * rng.gauss(0.0, 1.0)
            a *= math.exp(args.drift - 0.5 * args.vol**2 + args.vol * za)
            b *= math.exp(args.drift - 0.5 * args.vol**2 + args.vol * zb)
        rows.append((t, a, b))

    with open(args.out, "w", newline="\n") as f:
        f.write("tick,price_a,price_b\n")
        for t, pa, pb in rows:
            f.write(f"{t},{pa:.2f},{pb:.2f}\n")


if __name__ == "__main__":
    main()
