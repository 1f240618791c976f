#!/usr/bin/env python3
"""Drive the whole encrypt -> sort -> decrypt -> verify pipeline through the
CLI against a temporary directory, then run the ciphertext-only estimators on
the batch.  Handy as a smoke test and as a usage example."""

import argparse
import sys
import tempfile
from pathlib import Path

from acdope import cli


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rho", type=int, default=15, help="plaintext bits; M = 2^rho")
    ap.add_argument("--count", type=int, default=10_000)
    ap.add_argument("--scheme", default="gacd", choices=("gacd", "opf-uniform", "opf-beta"))
    ap.add_argument("--seed", default="42" * 32, help="hex seed for reproducibility")
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        work = Path(tmp)
        keyf = str(work / "pipeline.key")
        ctf = str(work / "batch.ct")

        steps = [
            ["keygen", "--scheme", args.scheme, "--rho", str(args.rho),
             "--seed", args.seed, "--out", keyf],
            ["encrypt", "--key", keyf, "--random", str(args.count),
             "--seed", args.seed, "--out", ctf],
            ["sort-verify", "--key", keyf, "--in", ctf, "--plain", ctf + ".plain"],
        ]
        for argv in steps:
            print(f"$ acdope {' '.join(argv)}")
            rc = cli.main(argv)
            if rc != 0:
                print(f"step failed with exit code {rc}", file=sys.stderr)
                return rc

        if args.scheme == "gacd":
            challenge = open(ctf).readline().strip()
            argv = ["analyze", "--in", ctf, "--M", str(1 << args.rho),
                    "--challenge", challenge]
            print(f"$ acdope {' '.join(argv)}")
            return cli.main(argv)
        return 0


if __name__ == "__main__":
    sys.exit(main())
