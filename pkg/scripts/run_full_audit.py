#!/usr/bin/env python3
"""Run every deterministic check in one go and print a compact report.

Covers: appendix constant brackets, the global budget below 16, the
Yoccoz-disk scan, collision radii for small denominators, the curve
negativity grid, slit-map derivatives, and the punctured-disk radius pair.
Exit status 0 when everything holds, 1 otherwise.
"""

import argparse
import sys
import time
from fractions import Fraction

from mpmath import mp, mpf

from siegelab.conformal import (bcurve_audit, disk_minus_point_radius,
                                douady_constant, phi_q, rho_q)
from siegelab.contfrac import appendix_constants
from siegelab.explosion import estimate_R, key_inequality_audit
from siegelab.ladder import constant_audit


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--qmax", type=int, default=50,
                    help="upper denominator for the Yoccoz-disk scan")
    ap.add_argument("--grid", type=int, default=10 ** 4,
                    help="grid size for the curve negativity audit")
    args = ap.parse_args()

    failures = 0

    def line(name, ok, detail):
        nonlocal failures
        failures += 0 if ok else 1
        print(f"  {'ok  ' if ok else 'FAIL'} {name}: {detail}")

    t0 = time.monotonic()

    ac = appendix_constants(80)
    line("appendix-brackets",
         mpf("1.96") <= ac.s1 and ac.s1 + ac.tail1 < mpf("1.97")
         and mpf("1.35") <= ac.s2 and ac.s2 + ac.tail2 < mpf("1.36"),
         f"logF/F in [{float(ac.s1):.6f}, {float(ac.s1 + ac.tail1):.6f}], "
         f"1/F in [{float(ac.s2):.6f}, {float(ac.s2 + ac.tail2):.6f}]")

    ca = constant_audit(60)
    line("budget-below-16", ca.ok,
         f"total={float(ca.total):.4f}, margin={float(ca.margin):.4f}")

    rep = key_inequality_audit(args.qmax)
    line("yoccoz-scan", rep.ok and rep.min_margin > 0,
         f"qmax={args.qmax}, min margin={float(rep.min_margin):.3e} "
         f"at {rep.argmin}")

    worst = None
    for q in range(1, 6):
        for p in range(0 if q == 1 else 1, q):
            pq = Fraction(p, q)
            if pq.denominator != q:
                continue
            m = estimate_R(pq).R - mpf(1) / q ** 3
            worst = m if worst is None else min(worst, m)
    line("collision-radii-q<=5", worst >= 0,
         f"min R - 1/q^3 = {float(worst):.3e}")

    bc = bcurve_audit(args.grid)
    line("curve-negativity", bc.ok and bc.violations == 0,
         f"grid={args.grid}, violations={bc.violations}, "
         f"min slack={float(bc.min_slack_g):.3e}")

    with mp.workprec(256):
        h = mpf(2) ** -150
        dmax = max(abs(phi_q(h, q) / h - mpf(4) ** (mpf(1) / q))
                   for q in range(1, 65))
        line("slit-derivative", dmax < mpf("1e-12"),
             f"max deviation={float(dmax):.2e}")
        line("slit-constant", douady_constant() < mp.log(24),
             f"C={float(douady_constant()):.5f} < log24")
        line("rho_2", abs(rho_q(2) - (mp.sqrt(2) - 1)) < mpf("1e-12"),
             f"rho_2={float(rho_q(2)):.12f}")
        r14 = disk_minus_point_radius(mpf(1) / 4)
        r12 = disk_minus_point_radius(mpf(1) / 2)
        line("radius-decay", r14 <= r12,
             f"{float(r14):.6f} <= {float(r12):.6f}")

    print(f"{failures} failure(s) in {time.monotonic() - t0:.1f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
