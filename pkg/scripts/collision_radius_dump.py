#!/usr/bin/env python3
"""Tabulate collision-free radii R(p/q) for all reduced fractions up to a
denominator cap, with the 1/q^3 lower bound and the margin. Optionally dump
the witness parameters to CSV for plotting.
"""

import argparse
import csv
import sys
from fractions import Fraction
from math import gcd

from mpmath import mpf

from siegelab.explosion import MAX_RESULTANT_Q, estimate_R


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=MAX_RESULTANT_Q)
    ap.add_argument("--csv", default=None, help="write witnesses to this path")
    args = ap.parse_args()
    if args.qmax > MAX_RESULTANT_Q:
        print(f"resultant oracle is exact only up to q = {MAX_RESULTANT_Q}",
              file=sys.stderr)
        return 2

    rows = []
    print(f"{'p/q':>6}  {'R':>14}  {'1/q^3':>12}  {'margin':>12}")
    for q in range(1, args.qmax + 1):
        for p in range(0 if q == 1 else 1, q):
            if gcd(p, q) != 1:
                continue
            est = estimate_R(Fraction(p, q))
            bound = mpf(1) / q ** 3
            print(f"{p}/{q:>4}  {float(est.R):>14.9f}  {float(bound):>12.9f}"
                  f"  {float(est.R - bound):>12.9f}")
            for w in est.witnesses:
                rows.append((p, q, complex(w).real, complex(w).imag))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["p", "q", "witness_re", "witness_im"])
            writer.writerows(rows)
        print(f"wrote {len(rows)} witnesses to {args.csv}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
