#!/usr/bin/env python3
"""Run the five-stage Gaussian cascade and print a stage-by-stage report.

Example:
    python scripts/run_chain.py --fast
    python scripts/run_chain.py --precision 50
"""

import argparse
import sys

from ahmedtype.numeric import PrecisionConfig, format_real
from ahmedtype.reduction import verify_chain


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--precision", type=int, default=50)
    ap.add_argument("--fast", action="store_true")
    args = ap.parse_args()
    cfg = PrecisionConfig(16, fast_mode=True) if args.fast \
        else PrecisionConfig(args.precision)

    report = verify_chain(cfg)
    print(f"conserved total: pi^(5/2)/32 = {format_real(report.stages[0].expected, cfg)}")
    print()
    print("stage  dim  prefactor      |error|     tolerance  evals      status")
    for s in report.stages:
        print(f"{s.stage:>5}  {s.dim:>3}  {s.prefactor:<12} "
              f"{float(s.abs_error):>10.2e}  {s.tolerance:>9.0e}  "
              f"{s.evaluations:>9}  {'ok' if s.passed else 'FAIL'}")
    print()
    for e in report.extractions:
        print(f"{e.name}: {format_real(e.value, cfg)}")
        print(f"  expected {format_real(e.expected, cfg)}  "
              f"|error| {float(e.abs_error):.2e}  "
              f"{'ok' if e.passed else 'FAIL'}")
    print()
    for note in report.notes:
        print(f"note: {note}")
    return 0 if report.overall_pass else 1


if __name__ == "__main__":
    sys.exit(main())
