#!/usr/bin/env python3
"""Timing comparison across schemes and plaintext widths.  Prints the table
and the machine-readable metric lines used by the regression dashboard."""

import argparse
import sys

from acdope import bench
from acdope.prng import seed_from_material


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schemes", nargs="+", default=list(bench.SCHEMES))
    ap.add_argument("--rho", nargs="+", type=int, default=[7, 15, 31, 63, 127])
    ap.add_argument("--count", type=int, default=10_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", default="bench", help="any string; hashed into a seed")
    args = ap.parse_args()

    seed = seed_from_material(args.seed.encode())
    results = []
    for scheme in args.schemes:
        for rho in args.rho:
            if not bench.supported(scheme, rho):
                print(f"# skipping {scheme} rho={rho}", file=sys.stderr)
                continue
            r = bench.bench_scheme(scheme, rho, count=args.count, repeat=args.repeat, seed=seed)
            results.append(r)
            for line in bench.metric_lines(r):
                print(line)
    print()
    print(bench.format_table(results))
    return 0


if __name__ == "__main__":
    sys.exit(main())
