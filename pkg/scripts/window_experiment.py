#!/usr/bin/env python3
"""Monte-Carlo sweep of the window one-wayness game: success rate of the
sample-maximum adversary at the succeed/fail radii, for growing sample
sizes.  The succeed column should hover near 1 - 1/2 = 0.5 (radius m*ln2/n)
and the fail column near 1 - 2^(-1/2) ~ 0.29 asymptotically (radius m/2n)."""

import argparse
import math
import sys

from acdope import analysis
from acdope.prng import seed_from_material


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M-bits", type=int, default=20)
    ap.add_argument("--lam", type=int, default=60)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n", nargs="+", type=int, default=[100, 300, 1000])
    ap.add_argument("--seed", default="window-sweep")
    args = ap.parse_args()

    seed = seed_from_material(args.seed.encode())
    M = 1 << args.M_bits
    print(f"{'n':>6} {'succeed_radius':>15} {'fail_radius':>12}")
    for n in args.n:
        win = analysis.window_success_rate(
            n=n, M=M, lam=args.lam, trials=args.trials,
            radius=lambda m: m * math.log(2) / n if m else 1.0, seed=seed,
        )
        lose = analysis.window_success_rate(
            n=n, M=M, lam=args.lam, trials=args.trials,
            radius=lambda m: m / (2 * n) if m else 1.0, seed=seed,
        )
        print(f"{n:>6} {win:>15.3f} {lose:>12.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
