"""Command-line harness.

Subcommands:
  gen      emit a random frame-family JSON for a config and trial index
  analyze  print operator, bounds, dual bounds and reconstruction residual
  perturb  emit a perturbed copy of a family
  check    run a single theorem check on a (family, perturbed) pair
  verify   run the full randomized suite from a config
  gap      print the directional gap between the spans of two families

The containment tolerance (default 1e-9) can be overridden through the
RQFRAMES_TOL environment variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import RQFramesError
from .frames import (
    FrameFamily,
    analysis,
    bessel_bound,
    canonical_dual,
    frame_bounds,
    frame_operator,
    reconstruct,
    riesz_bounds,
    synthesis,
)
from .harness import (
    ExperimentConfig,
    PERTURBATION_MODES,
    generate_frame,
    generate_perturbation,
    run_suite,
)
from .linalg import basis_vector, gap as subspace_gap, orthonormalize
from .perturb import CHECKERS, THEOREMS, check_gap_theorem


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(payload: dict, out_path) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out_path)


def _load_family(path: str) -> FrameFamily:
    with open(path) as fh:
        return FrameFamily.from_dict(json.load(fh))


def _cmd_gen(args) -> int:
    cfg = ExperimentConfig(dim=args.dim, rank=args.rank, node_count=args.nodes,
                           trials=max(1, args.trial + 1), seed=args.seed)
    family = generate_frame(cfg, args.trial)
    _dump(family.to_dict(), args.out)
    return 0


def _cmd_analyze(args) -> int:
    family = _load_family(args.family)
    bounds = frame_bounds(family)
    payload = {
        "dim": family.dim,
        "rank": family.rank,
        "node_count": family.node_count,
        "frame_operator": frame_operator(family).to_dict(),
        "bounds": bounds.to_dict(),
        "is_frame": bounds.is_frame,
        "bessel_bound": bessel_bound(family),
        "riesz_bounds": dict(zip(("lower", "upper"), riesz_bounds(family))),
    }
    if bounds.is_frame:
        dual = canonical_dual(family)
        payload["dual_bounds"] = frame_bounds(dual).to_dict()
        residual = 0.0
        both_forms = 0.0
        for a in range(family.dim):
            e = basis_vector(family.dim, a)
            rec = reconstruct(family, e)
            residual = max(residual, (rec - e).norm())
            alt = synthesis(dual, analysis(family, e))
            both_forms = max(both_forms, (rec - alt).norm())
        payload["reconstruction_residual"] = residual
        payload["decomposition_form_gap"] = both_forms
    _dump(payload, args.out)
    return 0


def _cmd_perturb(args) -> int:
    family = _load_family(args.family)
    perturbed = generate_perturbation(family, args.scale, args.mode, args.seed)
    _dump(perturbed.to_dict(), args.out)
    return 0


def _cmd_check(args) -> int:
    F = _load_family(args.family)
    G = _load_family(args.perturbed)
    checker = CHECKERS[args.theorem]
    if checker is check_gap_theorem:
        report = checker(F, G, seed=args.seed)
    else:
        report = checker(F, G)
    _dump(report.to_dict(), args.out)
    return 0 if report.passed else 1


def _cmd_verify(args) -> int:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_dict(json.load(fh))
    else:
        cfg = ExperimentConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), **overrides})
    suite = run_suite(cfg)
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf).writerows(suite.csv_rows())
        _emit(buf.getvalue(), args.out)
    else:
        _dump(suite.to_dict(), args.out)
    return 0 if suite.ok else 1


def _cmd_gap(args) -> int:
    A = _load_family(args.family_a)
    B = _load_family(args.family_b)
    K = orthonormalize(A.all_vectors())
    L = orthonormalize(B.all_vectors())
    _emit(repr(subspace_gap(K, L)) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rqframes",
        description="Frame families over right quaternionic vector spaces: "
                    "generation, analysis and perturbation-bound verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a random frame-family JSON")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--nodes", type=int, default=8)
    p.add_argument("--seed", type=int, default=ExperimentConfig().seed)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("analyze", help="operator, bounds, dual bounds, reconstruction residual")
    p.add_argument("family")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("perturb", help="emit a perturbed copy of a family")
    p.add_argument("family")
    p.add_argument("--mode", choices=PERTURBATION_MODES, default="kappa_admissible")
    p.add_argument("--scale", type=float, default=1e9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("check", help="run one theorem check on a family pair")
    p.add_argument("family")
    p.add_argument("perturbed")
    p.add_argument("--theorem", choices=THEOREMS, required=True)
    p.add_argument("--seed", type=int, default=0, help="sampling seed for T_gap")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("verify", help="run the full randomized suite")
    p.add_argument("--config", default=None, help="ExperimentConfig JSON path")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("gap", help="directional gap between the spans of two families")
    p.add_argument("family_a")
    p.add_argument("family_b")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_gap)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RQFramesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
