#!/usr/bin/env python3
"""Check (int_0^inf exp(-x^2) dx)^n = pi^(n/2)/2^n for n = 2..6 after
removing the semi-infinite axis analytically: nested quadrature up to the
4D box, randomized QMC for the 5D one.

Example:
    python scripts/discover_powers.py --seed 1
"""

import argparse
import math
import sys

from ahmedtype.numeric import FAST
from ahmedtype.quadnd import integrate_nested, integrate_qmc
from ahmedtype.reduction import gaussian_power_reduced

NESTED_TOL = {1: 3e-11, 2: 1e-10, 3: 1e-9, 4: 1e-8}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--points", type=int, default=1 << 16)
    args = ap.parse_args()

    ok = True
    for n in range(2, 7):
        expected = math.pi ** (n / 2) / 2**n
        nd = gaussian_power_reduced(n)
        if n <= 5:
            res = integrate_nested(nd, NESTED_TOL[n - 1], cfg=FAST)
            gap = abs(res.value - expected)
            bound = max(10 * NESTED_TOL[n - 1], 10 * float(res.error_estimate))
            status = "ok" if gap <= bound else "FAIL"
            print(f"n={n}: nested {res.value:.12f}  expected {expected:.12f}  "
                  f"|error| {gap:.2e}  {status}")
        else:
            est = integrate_qmc(nd, points=args.points, shifts=8,
                                seed=args.seed)
            gap = abs(est.mean - expected)
            status = "ok" if gap <= 3 * est.std_error else "FAIL"
            print(f"n={n}: qmc    {est.mean:.12f}  expected {expected:.12f}  "
                  f"|error| {gap:.2e} (3 sigma = {3 * est.std_error:.2e})  "
                  f"{status}")
        ok = ok and status == "ok"
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
