#!/usr/bin/env python3
"""Run the full randomized verification suite and write JSON/CSV reports.

Usage:
    python3 scripts/run_verification.py [--trials N] [--seed S] [--out-dir DIR]
"""

import argparse
import csv
import json
import pathlib
import sys

from rqframes import ExperimentConfig, run_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=ExperimentConfig().seed)
    parser.add_argument("--out-dir", default="results")
    args = parser.parse_args()

    cfg = ExperimentConfig(trials=args.trials, seed=args.seed)
    suite = run_suite(cfg)

    out_dir = pathlib.Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "suite.json").write_text(json.dumps(suite.to_dict(), indent=2) + "\n")
    with open(out_dir / "summary.csv", "w", newline="") as fh:
        csv.writer(fh).writerows(suite.csv_rows())

    print(f"config: {cfg.to_dict()}")
    print(f"wall time: {suite.wall_time_s:.1f}s")
    print(f"{'theorem':<18}{'trials':>8}{'hyp held':>10}{'contained':>11}{'certified':>11}")
    for name, c in suite.aggregate["per_theorem"].items():
        print(f"{name:<18}{c['trials']:>8}{c['hypotheses_held']:>10}"
              f"{c['contained']:>11}{c['certified']:>11}")
    print(f"errors: {suite.aggregate['errors']}")
    print(f"reports written to {out_dir}/")
    return 0 if suite.ok else 1


if __name__ == "__main__":
    sys.exit(main())
