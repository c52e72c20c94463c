"""Seeded instance generation and theorem-suite execution.

Every trial is a pure function of (config seed, trial index): per-trial
seeds come from XOR-ing the config seed with a splitmix64 hash of the
trial index, so scheduling order can never change results.

Perturbation modes rescale the drawn directions so the relevant
admissibility quantity lands exactly on its target: kappa-admissible
instances hit kappa = min(t^2, lower/2) and gamma-admissible instances hit
gamma = min(t, 1/2); large t therefore saturates the admissible ceiling.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationExhausted, RQFramesError
from .frames import FrameFamily, QuadratureMeasure, frame_bounds, node_vectors_independent
from .perturb import CHECKERS, THEOREMS, _dual_vector_norms, check_gap_theorem
from .quat import Quaternion, qabs2

MASK64 = (1 << 64) - 1

PERTURBATION_MODES = ("kappa_admissible", "gamma_admissible", "free")

# mode used for each theorem's perturbations inside run_suite
MODE_FOR_THEOREM = {
    "T_kappa": "kappa_admissible",
    "T_sum": "kappa_admissible",
    "T_dual_weighted": "gamma_admissible",
    "T_gap": "gamma_admissible",
    "T_riesz": "gamma_admissible",
}

KAPPA_CEILING_FACTOR = 0.5
GAMMA_CEILING = 0.5

NODE_RETRIES = 100
FAMILY_RETRIES = 20


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int = 4
    rank: int = 2
    node_count: int = 8
    trials: int = 200
    seed: int = 20250810
    perturbation_scale: float = 1e9
    theorem_set: tuple = THEOREMS

    def __post_init__(self):
        names = tuple(self.theorem_set)
        for name in names:
            if name not in THEOREMS:
                raise ValueError(f"unknown theorem id {name!r}")
        object.__setattr__(self, "theorem_set",
                           tuple(t for t in THEOREMS if t in set(names)))
        if not (2 <= self.dim <= 16):
            raise ValueError(f"dim must be in 2..16, got {self.dim}")
        if not (1 <= self.rank <= 4):
            raise ValueError(f"rank must be in 1..4, got {self.rank}")
        if self.rank > self.dim:
            raise ValueError("rank may not exceed dim")
        if not (1 <= self.node_count <= 16):
            raise ValueError(f"node_count must be in 1..16, got {self.node_count}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not (0 <= self.seed <= MASK64):
            raise ValueError("seed must fit in 64 bits")
        if not (self.perturbation_scale >= 0.0):
            raise ValueError("perturbation_scale must be nonnegative")
        if not self.theorem_set:
            raise ValueError("theorem_set must name at least one theorem")

    def to_dict(self) -> dict:
        return {
            "dim": self.dim, "rank": self.rank, "node_count": self.node_count,
            "trials": self.trials, "seed": self.seed,
            "perturbation_scale": self.perturbation_scale,
            "theorem_set": list(self.theorem_set),
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        kwargs = {}
        for key in ("dim", "rank", "node_count", "trials", "seed"):
            if key in payload:
                kwargs[key] = int(payload[key])
        if "perturbation_scale" in payload:
            kwargs["perturbation_scale"] = float(payload["perturbation_scale"])
        if "theorem_set" in payload:
            names = tuple(payload["theorem_set"])
            for name in names:
                if name not in THEOREMS:
                    raise ValueError(f"unknown theorem id {name!r}")
            kwargs["theorem_set"] = names
        return cls(**kwargs)


def trial_seed(cfg: ExperimentConfig, trial: int) -> int:
    return (cfg.seed ^ splitmix64(trial)) & MASK64


def _unit_directions(rng, shape) -> np.ndarray:
    u = rng.standard_normal(shape)
    norms = np.sqrt(qabs2(u).sum(axis=2))
    return u / norms[:, :, None, None]


def generate_frame(cfg: ExperimentConfig, trial: int) -> FrameFamily:
    """Deterministic random family for (cfg.seed, trial); retries until the
    frame predicate holds."""
    rng = np.random.default_rng(trial_seed(cfg, trial))
    d, n, K = cfg.dim, cfg.rank, cfg.node_count
    for _ in range(FAMILY_RETRIES):
        nodes = []
        blocks = np.empty((K, n, d, 4))
        for k in range(K):
            label = Quaternion(*rng.standard_normal(4))
            weight = float(rng.uniform(0.5, 1.5))
            for _ in range(NODE_RETRIES):
                vecs = rng.standard_normal((n, d, 4))
                if node_vectors_independent(vecs):
                    break
            else:
                raise GenerationExhausted(f"node {k}: no independent draw in {NODE_RETRIES} tries")
            nodes.append((label, weight))
            blocks[k] = vecs
        family = FrameFamily(d, n, QuadratureMeasure(tuple(nodes)), blocks)
        if frame_bounds(family).is_frame:
            return family
    raise GenerationExhausted(f"no frame after {FAMILY_RETRIES} family draws")


def generate_perturbation(F: FrameFamily, t: float, mode: str, seed: int) -> FrameFamily:
    """zeta_ik = eta_ik + s * u_ik with unit directions u and mode-dependent s.

    free:             s = t
    kappa_admissible: s chosen so kappa(F, result) = min(t^2, lower/2) exactly
    gamma_admissible: s chosen so gamma(F, result) = min(t, 1/2) exactly
    """
    if mode not in PERTURBATION_MODES:
        raise ValueError(f"unknown perturbation mode {mode!r}")
    if t < 0:
        raise ValueError("perturbation scale must be nonnegative")
    rng = np.random.default_rng(seed & MASK64)
    u = _unit_directions(rng, F.data.shape)
    weights = F.weights
    if mode == "free":
        s = t
    elif mode == "kappa_admissible":
        target = min(t * t, KAPPA_CEILING_FACTOR * frame_bounds(F).lower)
        base = float(np.sum(weights) * F.rank)  # kappa at s=1 with unit directions
        s = np.sqrt(target / base) if target > 0 else 0.0
    else:
        target = min(t, GAMMA_CEILING)
        base = float(np.einsum("k,ki->", weights, _dual_vector_norms(F)))
        s = target / base if target > 0 else 0.0
    return F.with_data(F.data + s * u)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    reports: list = field(default_factory=list)
    error: str | None = None

    def to_dict(self) -> dict:
        payload = {"trial": self.trial, "trial_seed": self.seed,
                   "reports": [r.to_dict() for r in self.reports]}
        if self.error is not None:
            payload["error"] = self.error
        return payload


@dataclass
class SuiteReport:
    config: ExperimentConfig
    trials: list
    aggregate: dict
    wall_time_s: float

    @property
    def ok(self) -> bool:
        return bool(self.aggregate["all_passed"]) and self.aggregate["errors"] == 0

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "trials": [t.to_dict() for t in self.trials],
            "aggregate": self.aggregate,
            "wall_time_s": self.wall_time_s,
        }

    def csv_rows(self) -> list:
        header = ["trial", "theorem_id", "hypotheses_hold", "contained", "certified",
                  "predicted_lower", "predicted_upper", "measured_lower", "measured_upper"]
        rows = [header]
        for record in self.trials:
            for rep in record.reports:
                rows.append([
                    record.trial, rep.theorem_id, rep.hypotheses_hold,
                    rep.contained, rep.certified,
                    rep.predicted.lower if rep.predicted else "",
                    rep.predicted.upper if rep.predicted else "",
                    rep.measured.lower, rep.measured.upper,
                ])
        return rows


def _run_checker(theorem: str, F: FrameFamily, pert: FrameFamily, tseed: int,
                 sample_seed: int):
    checker = CHECKERS[theorem]
    if checker is check_gap_theorem:
        return checker(F, pert, seed=sample_seed, trial_seed=tseed)
    return checker(F, pert, trial_seed=tseed)


def run_suite(cfg: ExperimentConfig) -> SuiteReport:
    """Run every configured theorem on every trial; order-independent."""
    start = time.perf_counter()
    records = []
    counts = {t: {"trials": 0, "hypotheses_held": 0, "contained": 0,
                  "certified": 0, "passed": 0} for t in cfg.theorem_set}
    errors = 0
    for trial in range(cfg.trials):
        tseed = trial_seed(cfg, trial)
        record = TrialRecord(trial=trial, seed=tseed)
        try:
            F = generate_frame(cfg, trial)
            for idx, theorem in enumerate(cfg.theorem_set):
                pseed = splitmix64((tseed + idx + 1) & MASK64)
                sample_seed = splitmix64((pseed + 1) & MASK64)
                pert = generate_perturbation(
                    F, cfg.perturbation_scale, MODE_FOR_THEOREM[theorem], pseed)
                report = _run_checker(theorem, F, pert, tseed, sample_seed)
                record.reports.append(report)
                c = counts[theorem]
                c["trials"] += 1
                c["hypotheses_held"] += int(report.hypotheses_hold)
                c["contained"] += int(bool(report.contained))
                c["certified"] += int(report.certified)
                c["passed"] += int(report.passed)
        except RQFramesError as exc:
            record.error = f"{type(exc).__name__}: {exc}"
            errors += 1
        records.append(record)
    all_passed = errors == 0 and all(
        c["passed"] == c["trials"] for c in counts.values())
    aggregate = {"per_theorem": counts, "errors": errors, "all_passed": all_passed}
    return SuiteReport(cfg, records, aggregate, time.perf_counter() - start)
