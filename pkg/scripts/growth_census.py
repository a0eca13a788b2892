"""Geodesic growth tables for the bundled groups, with classification and recurrence fits.

    python3 scripts/growth_census.py --max-weight 12 --out results/
"""

import argparse
import logging
from pathlib import Path

from vageo.experiments import CensusConfig, run_census


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="+", default=list(CensusConfig.groups))
    ap.add_argument("--max-weight", type=int, default=CensusConfig.max_weight)
    ap.add_argument("--method", choices=["pattern", "oracle"], default="pattern")
    ap.add_argument("--out", type=Path, default=None, help="directory for one CSV per group")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    cfg = CensusConfig(tuple(args.groups), args.max_weight, args.method, args.out)
    for res in run_census(cfg):
        print(f"== {res.group} ({res.seconds:.1f}s)")
        print("spheres:", " ".join(map(str, res.table.spheres)))
        for line in res.summary:
            print("  " + line)


if __name__ == "__main__":
    main()
