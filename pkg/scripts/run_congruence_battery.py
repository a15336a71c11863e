#!/usr/bin/env python3
"""Exercise the finite congruence models: space/operator comparisons,
rational decompositions, quotient-map checks, non-constant coefficients."""

import argparse
import json
import sys

from forge.congruence import (
    MatrixRep,
    build_space,
    builtin_cyclic_model,
    builtin_free_model,
    builtin_nonfree_model,
    decompose_rational,
    nonconstant_check,
    quotient_map_check,
    verify_congruence_theorem,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--max-m", type=int, default=2)
    ap.add_argument("--max-N", type=int, default=2)
    args = ap.parse_args()
    ok = True
    for m in range(1, args.max_m + 1):
        model = builtin_free_model(args.p, m)
        for N in range(1, args.max_N + 1):
            rep = verify_congruence_theorem(model, N=N)
            ok = ok and rep.passed
            print(f"{model.name} m={m} N={N}: {'pass' if rep.passed else 'FAIL'}")
        dec = decompose_rational(build_space(model, "am_psi"))
        print(f"{model.name} component ranks: {json.dumps(dec['component_ranks'])}")
        free_ok, _ = quotient_map_check(model)
        nonfree_ok, _ = quotient_map_check(builtin_nonfree_model(args.p, m))
        print(f"quotient map: free={free_ok} nonfree={nonfree_ok}")
        ok = ok and free_ok and (m == 1 or not nonfree_ok)
    model = builtin_cyclic_model(args.p, 3)
    rep = MatrixRep(2, 3, {1: ((1, args.p**2), (0, 1))})
    for m in (2, 3):
        out = nonconstant_check(model, rep, m)
        print(
            f"nonconstant m={m}: "
            + ("shrink" if out.details["shrink"] else ("pass" if out.passed else "FAIL"))
        )
        ok = ok and (out.passed or out.details["shrink"])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
