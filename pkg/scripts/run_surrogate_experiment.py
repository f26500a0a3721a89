#!/usr/bin/env python3
"""End-to-end experiment on the built-in synthetic corpus.

Generates the seeded corpus, extracts features for the 0.50 mm design, runs the
repeated-split classification, sweeps all four designs over two integration
periods, and renders the class-mean scatter. All artifacts land under --out.
"""

import argparse
import sys
from pathlib import Path

from pehfault.cli import main as pehfault


def run(args: list[str]) -> None:
    print(f"\n$ pehfault {' '.join(args)}")
    code = pehfault(args)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/surrogate", help="artifact directory")
    parser.add_argument("--seed", type=int, default=0)
    opts = parser.parse_args()

    out = Path(opts.out)
    run(["surrogate-gen", "--out", str(out), "--seed", str(opts.seed)])
    manifest = ["--manifest", str(out / "corpus" / "manifest.csv")]
    base = [*manifest, "--out", str(out), "--seed", str(opts.seed)]

    run(["extract", *base, "--thickness", "0.50"])
    run(["classify", *base, "--thickness", "0.50"])
    run(["sweep", *base, "--thicknesses", "0.35,0.40,0.45,0.50", "--t-values", "1,3"])
    run(["scatter", *base])

    print(f"\nartifacts written under {out}/")


if __name__ == "__main__":
    main()
