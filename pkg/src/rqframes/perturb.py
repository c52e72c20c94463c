"""Perturbation quantities and bound-containment checks.

Each checker compares the sharp measured constants of a perturbed family
against the closed-form interval predicted from the reference family and
the perturbation size, and reports hypotheses, certificates and the
containment verdict as one value object.

Containment is decided with an absolute slack of ``tol * upper`` where
``upper`` is the reference family's upper constant, i.e. the tolerance is
read on bounds normalized by that constant.  The default (1e-9) can be
overridden with the RQFRAMES_TOL environment variable.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import GapTooLarge, NotAFrame, NotARieszFamily
from .frames import (
    FrameBounds,
    FrameFamily,
    _require_same_shape,
    analysis_energy,
    canonical_dual,
    frame_bounds,
    frame_operator,
    riesz_bounds,
)
from .linalg import QMatrix, adjoint, gap, hermitian_spectrum, orthonormalize, solve_columns
from .quat import qabs2, qmul

DEFAULT_CONTAINMENT_TOL = 1e-9
TOL_ENV_VAR = "RQFRAMES_TOL"

THEOREMS = ("T_kappa", "T_sum", "T_dual_weighted", "T_gap", "T_riesz")

GAP_SAMPLES = 1000
PSD_ATOL = 1e-10
ISO_MIN_SV = 1e-10


def containment_tolerance(tol=None) -> float:
    if tol is not None:
        return float(tol)
    return float(os.environ.get(TOL_ENV_VAR, DEFAULT_CONTAINMENT_TOL))


@dataclass(frozen=True)
class Condition:
    """One named scalar check: value against threshold."""

    name: str
    value: float
    threshold: float
    holds: bool

    def to_dict(self) -> dict:
        threshold = self.threshold if math.isfinite(self.threshold) else None
        return {"name": self.name, "value": self.value,
                "threshold": threshold, "holds": self.holds}


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of one theorem check on one (reference, perturbed) pair."""

    theorem_id: str
    conditions: tuple
    predicted: FrameBounds | None
    measured: FrameBounds
    contained: bool | None
    certificates: tuple = ()
    lower_candidates: dict | None = None
    trial_seed: int | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(c.holds for c in self.conditions)

    @property
    def certified(self) -> bool:
        return all(c.holds for c in self.certificates)

    @property
    def passed(self) -> bool:
        """A hypotheses-holding report must be contained and certified."""
        if not self.hypotheses_hold:
            return True
        return bool(self.contained) and self.certified

    def to_dict(self) -> dict:
        payload = {
            "theorem_id": self.theorem_id,
            "conditions": [c.to_dict() for c in self.conditions],
            "hypotheses_hold": self.hypotheses_hold,
            "predicted": self.predicted.to_dict() if self.predicted is not None else None,
            "measured": self.measured.to_dict(),
            "contained": self.contained,
            "trial_seed": self.trial_seed,
        }
        if self.certificates:
            payload["certificates"] = [c.to_dict() for c in self.certificates]
        if self.lower_candidates is not None:
            payload["lower_candidates"] = dict(self.lower_candidates)
        return payload


@dataclass(frozen=True)
class PerturbationQuantities:
    """The four scalar perturbation measurements plus the dual bounds."""

    kappa: float
    lam: float
    gamma: float
    delta: float
    dual_bounds: FrameBounds

    def to_dict(self) -> dict:
        return {"kappa": self.kappa, "lambda": self.lam, "gamma": self.gamma,
                "delta": self.delta, "dual_bounds": self.dual_bounds.to_dict()}


def kappa(F: FrameFamily, G: FrameFamily) -> float:
    """Integrated squared vector distance sum_{i,k} w_k |eta_ik - zeta_ik|^2."""
    _require_same_shape(F, G)
    return float(np.einsum("k,ki->", F.weights, qabs2(F.data - G.data).sum(axis=2)))


def _dual_vector_norms(F: FrameFamily) -> np.ndarray:
    dual = canonical_dual(F)
    return np.sqrt(qabs2(dual.data).sum(axis=2))


def gamma(F: FrameFamily, P: FrameFamily) -> float:
    """Distance weighted by canonical-dual norms:
    sum_{i,k} w_k |eta_ik - psi_ik| * |dual_ik|."""
    _require_same_shape(F, P)
    diff_norms = np.sqrt(qabs2(F.data - P.data).sum(axis=2))
    return float(np.einsum("k,ki->", F.weights, diff_norms * _dual_vector_norms(F)))


def perturbation_quantities(F: FrameFamily, P: FrameFamily) -> PerturbationQuantities:
    bounds = frame_bounds(F)
    if not bounds.is_frame:
        raise NotAFrame("reference family is not a frame")
    value = kappa(F, P)
    g = gamma(F, P)
    K = orthonormalize(P.all_vectors())
    L = orthonormalize(F.all_vectors())
    return PerturbationQuantities(
        kappa=value,
        lam=value,
        gamma=g,
        delta=gap(K, L),
        dual_bounds=FrameBounds(1.0 / bounds.upper, 1.0 / bounds.lower),
    )


def _containment(predicted: FrameBounds, measured: FrameBounds, slack: float) -> bool:
    return (predicted.lower <= measured.lower + slack
            and measured.upper <= predicted.upper + slack)


def _frame_or_raise(F: FrameFamily) -> FrameBounds:
    bounds = frame_bounds(F)
    if not bounds.is_frame:
        raise NotAFrame(f"lower bound {bounds.lower:.3e} vs upper {bounds.upper:.3e}")
    return bounds


def check_kappa_theorem(F: FrameFamily, G: FrameFamily, *, tol=None,
                        trial_seed=None) -> TheoremReport:
    """Perturbed-family bounds from the integrated squared distance.

    Hypothesis kappa < lower; predicted interval
    (lower*(1-sqrt(kappa/lower))^2, upper*(1+sqrt(kappa/upper))^2).
    """
    _require_same_shape(F, G)
    bounds = _frame_or_raise(F)
    m, M = bounds.lower, bounds.upper
    k = kappa(F, G)
    conditions = (Condition("kappa_lt_lower_bound", k, m, k < m),)
    measured = frame_bounds(G)
    predicted = None
    contained = None
    if k < m:
        predicted = FrameBounds(m * (1.0 - math.sqrt(k / m)) ** 2,
                                M * (1.0 + math.sqrt(k / M)) ** 2)
        contained = _containment(predicted, measured, containment_tolerance(tol) * M)
    return TheoremReport("T_kappa", conditions, predicted, measured, contained,
                         trial_seed=trial_seed)


def check_sum_theorem(F: FrameFamily, G: FrameFamily, *, tol=None,
                      trial_seed=None) -> TheoremReport:
    """Bounds for the vector-sum family {eta + zeta} plus operator certificates.

    Predicted interval (lower*[1+(1-sqrt(kappa/lower))^2],
    upper*[1+(1+sqrt(kappa/upper))^2]).  The sum-family operator is also
    certified self-adjoint and positive semidefinite.

    Note: the predicted upper expression is not a valid bound for
    near-duplicate perturbations (zeta close to eta makes the sum family
    close to {2*eta}, whose sharp upper constant is near 4*upper), so
    containment routinely fails even with hypotheses satisfied; the report
    states this honestly rather than patching the formula.
    """
    _require_same_shape(F, G)
    bounds = _frame_or_raise(F)
    m, M = bounds.lower, bounds.upper
    k = kappa(F, G)
    conditions = (Condition("kappa_lt_lower_bound", k, m, k < m),)

    sum_family = F.with_data(F.data + G.data)
    A_sum = frame_operator(sum_family)
    sym_dev = float(np.max(np.abs(A_sum.array - adjoint(A_sum).array)))
    spectrum = hermitian_spectrum(A_sum)
    min_eig = float(spectrum[0])
    certificates = (
        Condition("sum_operator_self_adjoint", sym_dev, PSD_ATOL, sym_dev <= PSD_ATOL),
        Condition("sum_operator_psd", min_eig, -PSD_ATOL, min_eig >= -PSD_ATOL),
    )
    measured = FrameBounds(max(0.0, min_eig), max(0.0, float(spectrum[-1])))

    predicted = None
    contained = None
    if k < m:
        predicted = FrameBounds(m * (1.0 + (1.0 - math.sqrt(k / m)) ** 2),
                                M * (1.0 + (1.0 + math.sqrt(k / M)) ** 2))
        contained = _containment(predicted, measured, containment_tolerance(tol) * M)
    return TheoremReport("T_sum", conditions, predicted, measured, contained,
                         certificates=certificates, trial_seed=trial_seed)


def _dual_weighted_pieces(F: FrameFamily, P: FrameFamily):
    bounds = _frame_or_raise(F)
    lam = kappa(F, P)
    g = gamma(F, P)
    return bounds, lam, g


def check_dual_weighted_theorem(F: FrameFamily, P: FrameFamily, *, tol=None,
                                trial_seed=None) -> TheoremReport:
    """Bounds for a family close to the reference in dual-weighted distance.

    With the canonical dual (upper constant D = 1/lower), the predicted
    interval is ((1-gamma)^2/D, upper*(1+sqrt(lambda/upper))^2), valid
    whenever gamma < 1.
    """
    _require_same_shape(F, P)
    bounds, lam, g = _dual_weighted_pieces(F, P)
    m, M = bounds.lower, bounds.upper
    conditions = (
        Condition("lambda_finite", lam, math.inf, math.isfinite(lam)),
        Condition("gamma_lt_one", g, 1.0, g < 1.0),
    )
    measured = frame_bounds(P)
    predicted = None
    contained = None
    if all(c.holds for c in conditions):
        predicted = FrameBounds((1.0 - g) ** 2 * m,
                                M * (1.0 + math.sqrt(lam / M)) ** 2)
        contained = _containment(predicted, measured, containment_tolerance(tol) * M)
    return TheoremReport("T_dual_weighted", conditions, predicted, measured, contained,
                         trial_seed=trial_seed)


def _sample_unit_vectors(S, count: int, rng) -> np.ndarray:
    """Random unit vectors of the subspace S as an (count, d, 4) batch."""
    basis = np.stack([b.array for b in S.basis])          # (r, d, 4)
    coeffs = rng.standard_normal((count, S.dim, 4))
    batch = np.sum(qmul(basis[None, :, :, :], coeffs[:, :, None, :]), axis=1)
    norms = np.sqrt(qabs2(batch).sum(axis=1))
    return batch / norms[:, None, None]


def check_gap_theorem(F: FrameFamily, P: FrameFamily, *, samples: int = GAP_SAMPLES,
                      seed: int = 0, tol=None, trial_seed=None) -> TheoremReport:
    """Dual-weighted bounds for P restricted to its own span.

    K is the right span of P's vectors, L that of the reference vectors.
    The upper bound picks up the factor 1/(1-delta)^2 from the gap
    delta(K, L); the measured interval is the range of energy sums over
    random unit vectors of K, and the restriction of the projector onto L
    to K is certified injective through its smallest singular value.
    """
    _require_same_shape(F, P)
    K = orthonormalize(P.all_vectors())
    L = orthonormalize(F.all_vectors())
    delta = gap(K, L)
    if delta >= 1.0 - 1e-12:
        raise GapTooLarge(f"gap {delta!r} leaves no projection margin")

    bounds, lam, g = _dual_weighted_pieces(F, P)
    m, M = bounds.lower, bounds.upper
    conditions = (
        Condition("lambda_finite", lam, math.inf, math.isfinite(lam)),
        Condition("gamma_lt_one", g, 1.0, g < 1.0),
        Condition("delta_lt_one", delta, 1.0, delta < 1.0),
    )

    restricted = L.projector() @ K.basis_matrix()
    sv_spectrum = hermitian_spectrum(adjoint(restricted) @ restricted)
    min_sv = math.sqrt(max(0.0, float(sv_spectrum[0])))
    certificates = (
        Condition("projection_min_singular_value", min_sv, ISO_MIN_SV, min_sv > ISO_MIN_SV),
    )

    rng = np.random.default_rng(seed)
    energies = analysis_energy(P, _sample_unit_vectors(K, samples, rng))
    measured = FrameBounds(max(0.0, float(energies.min())), float(energies.max()))

    predicted = None
    contained = None
    if all(c.holds for c in conditions):
        predicted = FrameBounds(
            (1.0 - g) ** 2 * m,
            M * (1.0 + math.sqrt(lam / M)) ** 2 / (1.0 - delta) ** 2,
        )
        contained = _containment(predicted, measured, containment_tolerance(tol) * M)
    return TheoremReport("T_gap", conditions, predicted, measured, contained,
                         certificates=certificates, trial_seed=trial_seed)


def span_restricted_dual_norms(F: FrameFamily) -> np.ndarray:
    """|S^{-1} eta_ik| where S is the family operator restricted to the
    right span L of all family vectors; shaped (nodes, rank).

    For a family whose vectors span the whole space this reduces to the
    canonical-dual vector norms.
    """
    L = orthonormalize(F.all_vectors())
    if L.dim == 0:
        raise NotARieszFamily("family spans only the zero subspace")
    B = L.basis_matrix()
    A_restricted = adjoint(B) @ frame_operator(F) @ B
    K, n, d, _ = F.data.shape
    columns = QMatrix._wrap(np.ascontiguousarray(
        np.transpose(F.data.reshape(K * n, d, 4), (1, 0, 2))))
    rhs = adjoint(B) @ columns
    coords = solve_columns(A_restricted, rhs).array
    # basis columns are orthonormal, so coordinate norms are ambient norms
    return np.sqrt(qabs2(coords).sum(axis=0)).reshape(K, n)


def check_riesz_theorem(F: FrameFamily, X: FrameFamily, *, tol=None,
                        trial_seed=None) -> TheoremReport:
    """Integrated-vector Gram bounds for a perturbed family.

    gamma weighs vector distances by |S^{-1} eta| on the span of the
    reference vectors.  The stated lower factor (1 - gamma^2) and the
    factor (1 - gamma)^2 that the norm estimate actually yields disagree;
    both candidates are recorded and containment is tested against the
    weaker (smaller) one.
    """
    _require_same_shape(F, X)
    m_r, M_r = riesz_bounds(F)
    if M_r <= 0.0 or m_r <= 1e-10 * M_r:
        raise NotARieszFamily(f"integrated Gram bounds ({m_r:.3e}, {M_r:.3e})")

    diff_norms = np.sqrt(qabs2(F.data - X.data).sum(axis=2))
    g = float(np.einsum("k,ki->", F.weights, diff_norms * span_restricted_dual_norms(F)))
    lam = kappa(F, X)
    conditions = (
        Condition("lambda_finite", lam, math.inf, math.isfinite(lam)),
        Condition("gamma_lt_one", g, 1.0, g < 1.0),
    )
    measured = FrameBounds(*riesz_bounds(X))

    predicted = None
    contained = None
    candidates = None
    if all(c.holds for c in conditions):
        stated = m_r * (1.0 - g * g)
        derived = m_r * (1.0 - g) ** 2
        candidates = {"m*(1-gamma^2)": stated, "m*(1-gamma)^2": derived}
        predicted = FrameBounds(min(stated, derived),
                                M_r * (1.0 + math.sqrt(lam / M_r)) ** 2)
        contained = _containment(predicted, measured, containment_tolerance(tol) * M_r)
    return TheoremReport("T_riesz", conditions, predicted, measured, contained,
                         lower_candidates=candidates, trial_seed=trial_seed)


CHECKERS = {
    "T_kappa": check_kappa_theorem,
    "T_sum": check_sum_theorem,
    "T_dual_weighted": check_dual_weighted_theorem,
    "T_gap": check_gap_theorem,
    "T_riesz": check_riesz_theorem,
}
