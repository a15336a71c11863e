#!/usr/bin/env python3
"""Cusp-sum and transform-support battery at truncated p-adic precision."""

import argparse
import sys
import time

from forge.cuspcheck import (
    cusp_integral_check,
    default_samples,
    elliptic_seed,
    fourier_support_check,
    lambda_character,
    unipotent_support_profiles,
    x_class_representatives,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--K", type=int, default=8)
    ap.add_argument("--max-m", type=int, default=2)
    ap.add_argument("--samples", type=int, default=20)
    args = ap.parse_args()
    t0 = time.monotonic()
    seed = elliptic_seed(args.p, args.K)
    print(f"seed: p={args.p} epsilon={seed.epsilon} (certificate verified)")
    ok = True
    for m in range(1, args.max_m + 1):
        n = m + 2
        char = lambda_character(seed, n, m)
        samples = default_samples(char, args.samples)
        profiles = unipotent_support_profiles(char, samples)
        xs = x_class_representatives(args.p, m)
        bad = [x for x in xs if not cusp_integral_check(char, x, profiles=profiles)["passed"]]
        four = fourier_support_check(seed, m, 1)
        good = not bad and four["indicator"] == 1
        ok = ok and good
        print(
            f"m={m} n={n}: {len(xs)} character classes x {len(samples)} samples "
            f"x 2 parabolics -> {'all sums vanish' if good else 'FAIL'}"
        )
    print(f"total {time.monotonic() - t0:.1f} s")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
