#!/usr/bin/env python3
"""Convergence study for the linearization-radius estimators.

For a chosen rotation number, run the coefficient recursion at a ladder of
truncation orders N and print both radius estimators, their spread, and the
running value of B_partial + log r. Useful for picking N and precision
before a long run.
"""

import argparse
import sys

from mpmath import mp

from siegelab.contfrac import approximants, bruno_partial, cf_expand, parse_alpha
from siegelab.siegel import SmallDivisorError, siegel_radius


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", default="[0;2,(1)]")
    ap.add_argument("--precision", type=int, default=256)
    ap.add_argument("--depth", type=int, default=40)
    ap.add_argument("--orders", default="250,500,1000,2000,4000",
                    help="comma-separated truncation orders")
    args = ap.parse_args()

    alpha = parse_alpha(args.alpha)
    orders = [int(s) for s in args.orders.split(",")]

    table = approximants(cf_expand(alpha, args.depth + 4), args.depth + 1)
    B = bruno_partial(table, args.depth, args.precision).partial

    print(f"alpha = {args.alpha}   precision = {args.precision} bits   "
          f"B_partial(depth {args.depth}) = {mp.nstr(B, 12)}")
    print(f"{'N':>6}  {'r_hadamard':>14}  {'r_tailfit':>14}  "
          f"{'spread':>10}  {'B + log r':>12}")
    prev = None
    for N in orders:
        try:
            est = siegel_radius(alpha, N, args.precision)
        except SmallDivisorError as exc:
            print(f"{N:>6}  small divisor underflow at n = {exc.n}")
            return 3
        with mp.workprec(args.precision):
            total = B + mp.log(est.r)
        drift = ("" if prev is None else
                 f"  drift {abs(float(est.r) - prev) / prev:.2e}")
        print(f"{N:>6}  {mp.nstr(est.r_hadamard, 10):>14}  "
              f"{mp.nstr(est.r_tailfit, 10):>14}  {float(est.spread):>10.2e}  "
              f"{mp.nstr(total, 10):>12}{drift}")
        prev = float(est.r)
    return 0


if __name__ == "__main__":
    sys.exit(main())
