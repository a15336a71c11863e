#!/usr/bin/env python3
"""Build and verify generic-element data over the full type/prime grid.

Writes the deterministic JSON report and prints the timing table.
"""

import argparse
import sys

from forge.sweep import (
    SweepConfig,
    all_irreducible_types,
    report_to_json,
    report_to_text,
    run_sweep,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-rank", type=int, default=8)
    ap.add_argument("--primes-per-type", type=int, default=2)
    ap.add_argument("--q-exponents", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--n-values", type=int, nargs="*", default=[1, 2])
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("-o", "--output", default="sweep_report.json")
    args = ap.parse_args()
    config = SweepConfig(
        types=tuple(all_irreducible_types(args.max_rank)),
        primes_per_type=args.primes_per_type,
        q_exponents=tuple(args.q_exponents),
        n_values=tuple(args.n_values),
        jobs=args.jobs,
    )
    out = run_sweep(config)
    with open(args.output, "w") as fh:
        fh.write(report_to_json(out["report"]))
    sys.stdout.write(report_to_text(out["report"], out["timings"]))
    return 0 if out["report"]["failures"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
