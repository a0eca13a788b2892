"""Check a geodesic counter machine against the ball oracle on all short words.

    python3 scripts/machine_check.py --group p4 --window 6
    python3 scripts/machine_check.py --group dinf --exact --max-weight 8
"""

import argparse

from vageo.experiments import MachineCheckConfig, run_machine_check


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--group", default="z2")
    ap.add_argument("--window", type=int, default=6)
    ap.add_argument("--exact", action="store_true", help="use the bundled exact decomposition (z, dinf)")
    ap.add_argument("--max-weight", type=int, default=6)
    args = ap.parse_args()
    cfg = MachineCheckConfig(args.group, None if args.exact else args.window, args.max_weight)
    for k, v in run_machine_check(cfg).items():
        print(f"{k}: {v}")


if __name__ == "__main__":
    main()
