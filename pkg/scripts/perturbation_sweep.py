#!/usr/bin/env python3
"""Sweep the perturbation scale and print predicted-vs-measured margins.

For one random frame, shows how the predicted intervals of the
kappa-perturbation and dual-weighted checks widen with the perturbation
size while the measured bounds stay inside them.

Usage:
    python3 scripts/perturbation_sweep.py [--seed S] [--steps N]
"""

import argparse
import sys

import numpy as np

from rqframes import (
    ExperimentConfig,
    check_dual_weighted_theorem,
    check_kappa_theorem,
    frame_bounds,
    generate_frame,
    generate_perturbation,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--steps", type=int, default=8)
    args = parser.parse_args()

    cfg = ExperimentConfig(trials=1, seed=args.seed)
    F = generate_frame(cfg, 0)
    b = frame_bounds(F)
    print(f"reference bounds: lower={b.lower:.4f} upper={b.upper:.4f}")

    def header(quantity):
        return (f"{'t':>8}{quantity:>12}{'pred lo':>12}{'meas lo':>12}"
                f"{'meas up':>12}{'pred up':>12}{'ok':>5}")

    print("\nkappa-admissible sweep (target kappa = min(t^2, lower/2))")
    print(header("kappa"))
    for t in np.sqrt(np.linspace(0.0, 0.5 * b.lower, args.steps)):
        pert = generate_perturbation(F, float(t), "kappa_admissible", args.seed + 1)
        rep = check_kappa_theorem(F, pert)
        k = rep.conditions[0].value
        print(f"{t:>8.3f}{k:>12.4f}{rep.predicted.lower:>12.4f}{rep.measured.lower:>12.4f}"
              f"{rep.measured.upper:>12.4f}{rep.predicted.upper:>12.4f}{str(bool(rep.contained)):>5}")

    print("\ngamma-admissible sweep (target gamma = min(t, 1/2))")
    print(header("gamma"))
    for t in np.linspace(0.0, 0.5, args.steps):
        pert = generate_perturbation(F, float(t), "gamma_admissible", args.seed + 2)
        rep = check_dual_weighted_theorem(F, pert)
        g = next(c.value for c in rep.conditions if c.name == "gamma_lt_one")
        print(f"{t:>8.3f}{g:>12.4f}{rep.predicted.lower:>12.4f}{rep.measured.lower:>12.4f}"
              f"{rep.measured.upper:>12.4f}{rep.predicted.upper:>12.4f}{str(bool(rep.contained)):>5}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
