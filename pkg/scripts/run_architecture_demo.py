#!/usr/bin/env python3
"""Architecture comparison demo: the two-design frequency-shift experiment plus
the sampling/energy cost report for the default rates (51.2 kHz raw vs one
energy sample every 3 s)."""

import argparse
import sys

from pehfault.cli import main as pehfault


def run(args: list[str]) -> None:
    print(f"\n$ pehfault {' '.join(args)}")
    code = pehfault(args)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--f-healthy", type=float, default=200.0)
    parser.add_argument("--f-faulty", type=float, default=150.0)
    parser.add_argument("--T", type=float, default=3.0)
    opts = parser.parse_args()

    run(
        [
            "thought-experiment",
            "--f-healthy",
            str(opts.f_healthy),
            "--f-faulty",
            str(opts.f_faulty),
            "--T",
            str(opts.T),
        ]
    )
    run(["energy-report", "--fs-raw", "51200", "--T", str(opts.T)])


if __name__ == "__main__":
    main()
