import math

import numpy as np
import pytest

from rqframes import (
    GapTooLarge,
    NotAFrame,
    NotARieszFamily,
    Quaternion,
    ShapeMismatch,
    check_dual_weighted_theorem,
    check_gap_theorem,
    check_kappa_theorem,
    check_riesz_theorem,
    check_sum_theorem,
    containment_tolerance,
    frame_bounds,
    gamma,
    kappa,
    perturbation_quantities,
    riesz_bounds,
    span_restricted_dual_norms,
)
from rqframes.harness import generate_perturbation
from rqframes.quat import J

from helpers import e, family, qv, random_family


def diag_family():
    # one node, weight 1, vectors e1 and 2*e2: operator diag(1, 4)
    return family(2, 2, [1.0], [[e(2, 0), e(2, 1) * 2]])


def shifted_copy(F, rng, scale):
    return F.with_data(F.data + scale * rng.standard_normal(F.data.shape))


# ---------------------------------------------------------------- quantities


def test_kappa_identical_families():
    F = diag_family()
    assert kappa(F, F) == 0.0


def test_kappa_hand_value():
    F = family(1, 1, [1.0], [[qv(Quaternion(1))]])
    G = family(1, 1, [1.0], [[qv(Quaternion(0.5))]])
    assert math.isclose(kappa(F, G), 0.25, abs_tol=1e-15)


def test_kappa_reversed_order_oracle():
    rng = np.random.default_rng(60)
    F = random_family(rng)
    G = shifted_copy(F, rng, 0.1)
    total = 0.0
    for k in reversed(range(F.node_count)):
        for i in reversed(range(F.rank)):
            total += F.weights[k] * (F.vector(k, i) - G.vector(k, i)).norm() ** 2
    assert math.isclose(kappa(F, G), total, rel_tol=1e-12)


def test_kappa_scales_quadratically():
    rng = np.random.default_rng(61)
    F = random_family(rng)
    direction = rng.standard_normal(F.data.shape)
    base = kappa(F, F.with_data(F.data + direction))
    for t in (0.5, 0.25, 2.0):
        val = kappa(F, F.with_data(F.data + t * direction))
        assert math.isclose(val, t * t * base, rel_tol=1e-10)


def test_kappa_zero_iff_identical():
    rng = np.random.default_rng(62)
    F = random_family(rng)
    assert kappa(F, F) == 0.0
    G = F.with_data(F.data + 1e-5 * rng.standard_normal(F.data.shape))
    assert kappa(F, G) > 1e-12


def test_kappa_shape_mismatch():
    rng = np.random.default_rng(63)
    with pytest.raises(ShapeMismatch):
        kappa(random_family(rng, nodes=4), random_family(rng, nodes=5))


def test_gamma_values():
    F = diag_family()
    assert gamma(F, F) == 0.0
    # scalar case: eta = [2], dual = [0.5], psi = [1.5]
    F1 = family(1, 1, [1.0], [[qv(Quaternion(2))]])
    P1 = family(1, 1, [1.0], [[qv(Quaternion(1.5))]])
    assert math.isclose(gamma(F1, P1), 0.25, abs_tol=1e-14)


def test_gamma_precomputed_norms_oracle():
    rng = np.random.default_rng(64)
    F = random_family(rng)
    P = shifted_copy(F, rng, 0.05)
    from rqframes import canonical_dual
    dual = canonical_dual(F)
    total = 0.0
    for k in range(F.node_count):
        for i in range(F.rank):
            total += (F.weights[k]
                      * (F.vector(k, i) - P.vector(k, i)).norm()
                      * dual.vector(k, i).norm())
    assert math.isclose(gamma(F, P), total, rel_tol=1e-12)


def test_perturbation_quantities_bundle():
    rng = np.random.default_rng(65)
    F = random_family(rng)
    P = shifted_copy(F, rng, 0.05)
    q = perturbation_quantities(F, P)
    assert q.kappa == q.lam == kappa(F, P)
    assert math.isclose(q.gamma, gamma(F, P), rel_tol=1e-12)
    assert 0.0 <= q.delta <= 1.0
    b = frame_bounds(F)
    assert math.isclose(q.dual_bounds.lower, 1.0 / b.upper, rel_tol=1e-12)
    payload = q.to_dict()
    assert "lambda" in payload and "kappa" in payload


# ---------------------------------------------------------------- T_kappa


def test_kappa_theorem_zero_perturbation():
    F = diag_family()
    rep = check_kappa_theorem(F, F)
    assert rep.hypotheses_hold
    assert rep.contained
    assert math.isclose(rep.predicted.lower, 1.0, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 4.0, abs_tol=1e-12)


def test_kappa_theorem_hand_numbers():
    # m=1, M=4, kappa=0.25: predicted (1*(1-0.5)^2, 4*(1+0.25)^2) = (0.25, 6.25)
    F = diag_family()
    G = family(2, 2, [1.0], [[e(2, 0) * 0.5, e(2, 1) * 2]])
    rep = check_kappa_theorem(F, G)
    assert rep.hypotheses_hold
    assert math.isclose(rep.predicted.lower, 0.25, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 6.25, abs_tol=1e-12)
    assert math.isclose(rep.measured.lower, 0.25, abs_tol=1e-12)
    assert math.isclose(rep.measured.upper, 4.0, abs_tol=1e-12)
    assert rep.contained


def test_kappa_theorem_hypothesis_violation():
    F = diag_family()
    G = family(2, 2, [1.0], [[e(2, 1) * 2, e(2, 0)]])  # swapped: kappa is large
    rep = check_kappa_theorem(F, G)
    assert kappa(F, G) >= frame_bounds(F).lower
    assert not rep.hypotheses_hold
    assert rep.contained is None
    assert rep.predicted is None
    assert rep.passed  # hypothesis-violating trials are flagged, not failed


def test_kappa_theorem_random_contained():
    rng = np.random.default_rng(66)
    for trial in range(10):
        F = random_family(rng)
        pert = generate_perturbation(F, 1e9, "kappa_admissible", int(rng.integers(2**32)))
        rep = check_kappa_theorem(F, pert)
        assert rep.hypotheses_hold and rep.contained


def test_kappa_theorem_predicted_continuity():
    rng = np.random.default_rng(67)
    F = random_family(rng)
    b = frame_bounds(F)
    m, M = b.lower, b.upper
    rep0 = check_kappa_theorem(F, F)
    assert math.isclose(rep0.predicted.lower, m, rel_tol=1e-12)
    assert math.isclose(rep0.predicted.upper, M, rel_tol=1e-12)
    for target in (1e-8, 1e-6):
        pert = generate_perturbation(F, math.sqrt(target), "kappa_admissible", 99)
        k = kappa(F, pert)
        assert math.isclose(k, target, rel_tol=1e-9)
        rep = check_kappa_theorem(F, pert)
        # exact first-order envelope: m - lower = 2*sqrt(k m) - k, etc.
        assert 0.0 <= m - rep.predicted.lower <= 2 * math.sqrt(k * m) + 1e-9
        assert 0.0 <= rep.predicted.upper - M <= 2 * math.sqrt(k * M) + k + 1e-9


# ---------------------------------------------------------------- T_sum


def test_sum_theorem_duplicate_family_bounds():
    # zeta = eta doubles every vector: measured operator is 4A
    F = diag_family()
    rep = check_sum_theorem(F, F)
    assert rep.hypotheses_hold  # kappa = 0 < m
    assert math.isclose(rep.measured.lower, 4.0, abs_tol=1e-12)
    assert math.isclose(rep.measured.upper, 16.0, abs_tol=1e-12)
    # stated prediction: (m[1+1], M[1+1]) = (2, 8); the upper is exceeded
    assert math.isclose(rep.predicted.lower, 2.0, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 8.0, abs_tol=1e-12)
    assert rep.contained is False
    assert rep.certified  # operator certificates still hold


def test_sum_theorem_scalar_counterexample():
    # eta=[1], zeta=[0.9]: kappa=0.01 admissible, sum family [1.9]
    # stated interval (1.81, 2.21) misses the sharp value 3.61 from above
    F = family(1, 1, [1.0], [[qv(Quaternion(1))]])
    G = family(1, 1, [1.0], [[qv(Quaternion(0.9))]])
    rep = check_sum_theorem(F, G)
    assert rep.hypotheses_hold
    assert math.isclose(rep.predicted.lower, 1.81, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 2.21, abs_tol=1e-12)
    assert math.isclose(rep.measured.lower, 3.61, abs_tol=1e-12)
    assert math.isclose(rep.measured.upper, 3.61, abs_tol=1e-12)
    assert rep.contained is False  # stated upper is not a valid bound


def test_sum_theorem_lower_bound_and_certificates_random():
    rng = np.random.default_rng(68)
    tol = containment_tolerance()
    for _ in range(10):
        F = random_family(rng)
        pert = generate_perturbation(F, 1e9, "kappa_admissible", int(rng.integers(2**32)))
        rep = check_sum_theorem(F, pert)
        assert rep.hypotheses_hold
        assert rep.certified
        # the stated lower IS a valid bound
        assert rep.predicted.lower <= rep.measured.lower + tol * frame_bounds(F).upper


# ---------------------------------------------------------------- T_dual_weighted


def test_dual_weighted_identity_case():
    F = diag_family()
    rep = check_dual_weighted_theorem(F, F)
    assert rep.hypotheses_hold
    assert math.isclose(rep.predicted.lower, 1.0, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 4.0, abs_tol=1e-12)
    assert rep.contained


def test_dual_weighted_hand_numbers():
    # m=1, M=4, D=1: perturb the second vector by a unit step so that
    # gamma = 1*0.5 = 0.5 and lambda = 1; predicted ((1-g)^2/D, M(1+sqrt(1/4))^2)
    F = diag_family()
    P = family(2, 2, [1.0], [[e(2, 0), qv(Quaternion(1), Quaternion(2))]])
    assert math.isclose(gamma(F, P), 0.5, abs_tol=1e-12)
    assert math.isclose(kappa(F, P), 1.0, abs_tol=1e-12)
    rep = check_dual_weighted_theorem(F, P)
    assert rep.hypotheses_hold
    assert math.isclose(rep.predicted.lower, 0.25, abs_tol=1e-12)
    assert math.isclose(rep.predicted.upper, 9.0, abs_tol=1e-12)
    assert rep.contained


def test_dual_weighted_gamma_too_large():
    F = diag_family()
    P = family(2, 2, [1.0], [[e(2, 0) * 4, e(2, 1) * 8]])
    assert gamma(F, P) >= 1.0
    rep = check_dual_weighted_theorem(F, P)
    assert not rep.hypotheses_hold
    assert rep.contained is None


def test_dual_weighted_requires_frame():
    F = family(2, 1, [1.0], [[e(2, 0)]])
    with pytest.raises(NotAFrame):
        check_dual_weighted_theorem(F, F)


def test_dual_weighted_random_contained():
    rng = np.random.default_rng(69)
    for _ in range(10):
        F = random_family(rng)
        pert = generate_perturbation(F, 1e9, "gamma_admissible", int(rng.integers(2**32)))
        assert math.isclose(gamma(F, pert), 0.5, rel_tol=1e-12)
        rep = check_dual_weighted_theorem(F, pert)
        assert rep.hypotheses_hold and rep.contained


def test_tolerance_env_override(monkeypatch):
    assert containment_tolerance() == 1e-9
    monkeypatch.setenv("RQFRAMES_TOL", "1e-3")
    assert containment_tolerance() == 1e-3
    monkeypatch.delenv("RQFRAMES_TOL")
    assert containment_tolerance() == 1e-9
    assert containment_tolerance(1e-6) == 1e-6


# ---------------------------------------------------------------- T_gap


def test_gap_theorem_identity_case():
    rng = np.random.default_rng(70)
    F = random_family(rng)
    rep = check_gap_theorem(F, F, seed=3)
    assert rep.hypotheses_hold
    delta = next(c.value for c in rep.conditions if c.name == "delta_lt_one")
    assert delta < 1e-12
    b = frame_bounds(F)
    assert math.isclose(rep.predicted.lower, b.lower, rel_tol=1e-9)
    assert math.isclose(rep.predicted.upper, b.upper, rel_tol=1e-9)
    assert rep.contained
    assert rep.certified
    # sampled range sits inside the sharp interval
    assert rep.measured.lower >= b.lower - 1e-9 * b.upper
    assert rep.measured.upper <= b.upper + 1e-9 * b.upper


def test_gap_theorem_orthogonal_spans():
    F = family(2, 1, [1.0, 1.0], [[e(2, 1)], [e(2, 1) * J]])
    P = family(2, 1, [1.0, 1.0], [[e(2, 0)], [e(2, 0) * J]])
    with pytest.raises(GapTooLarge):
        check_gap_theorem(F, P, seed=0)


def test_gap_theorem_random_perturbations():
    rng = np.random.default_rng(71)
    for trial in range(5):
        F = random_family(rng)
        pert = generate_perturbation(F, 1e9, "gamma_admissible", int(rng.integers(2**32)))
        rep = check_gap_theorem(F, pert, seed=trial)
        assert rep.hypotheses_hold and rep.contained and rep.certified
        min_sv = next(c.value for c in rep.certificates
                      if c.name == "projection_min_singular_value")
        assert min_sv > 0.5  # spans coincide for full-rank random families


def test_gap_theorem_sampling_is_seeded():
    rng = np.random.default_rng(72)
    F = random_family(rng)
    pert = generate_perturbation(F, 1e9, "gamma_admissible", 7)
    a = check_gap_theorem(F, pert, seed=11)
    b = check_gap_theorem(F, pert, seed=11)
    assert a.measured == b.measured
    c = check_gap_theorem(F, pert, seed=12)
    assert a.measured != c.measured


# ---------------------------------------------------------------- T_riesz


def test_riesz_theorem_identity_case():
    rng = np.random.default_rng(73)
    F = random_family(rng)
    rep = check_riesz_theorem(F, F)
    assert rep.hypotheses_hold
    lo, hi = riesz_bounds(F)
    assert set(rep.lower_candidates) == {"m*(1-gamma^2)", "m*(1-gamma)^2"}
    for value in rep.lower_candidates.values():
        assert math.isclose(value, lo, rel_tol=1e-12)
    assert math.isclose(rep.measured.lower, lo, rel_tol=1e-12)
    assert math.isclose(rep.measured.upper, hi, rel_tol=1e-12)
    assert rep.contained


def test_riesz_lower_candidates_formulas():
    # unit family, X = [0.5]: gamma = |1-0.5| * |S^{-1} 1| = 0.5 with m_r = 1,
    # so the candidates are 1-0.25 = 0.75 and (1-0.5)^2 = 0.25
    F = family(1, 1, [1.0], [[qv(Quaternion(1))]])
    X = family(1, 1, [1.0], [[qv(Quaternion(0.5))]])
    rep = check_riesz_theorem(F, X)
    g = next(c.value for c in rep.conditions if c.name == "gamma_lt_one")
    assert math.isclose(g, 0.5, abs_tol=1e-12)
    assert math.isclose(rep.lower_candidates["m*(1-gamma^2)"], 0.75, abs_tol=1e-12)
    assert math.isclose(rep.lower_candidates["m*(1-gamma)^2"], 0.25, abs_tol=1e-12)
    assert rep.predicted.lower == min(rep.lower_candidates.values())
    assert math.isclose(rep.predicted.upper, 2.25, abs_tol=1e-12)  # (1+sqrt(0.25))^2
    assert math.isclose(rep.measured.lower, 0.25, abs_tol=1e-12)
    assert rep.contained


def test_riesz_span_restricted_dual_norms_match_canonical():
    # full-span family: restricted solve equals the canonical dual vectors
    rng = np.random.default_rng(74)
    F = random_family(rng)
    from rqframes import canonical_dual
    dual = canonical_dual(F)
    expected = np.sqrt((dual.data ** 2).sum(axis=(2, 3)))
    assert np.max(np.abs(span_restricted_dual_norms(F) - expected)) < 1e-9


def test_riesz_requires_nondegenerate_gram():
    F = family(2, 2, [1.0, 1.0], [[e(2, 0), e(2, 1)], [e(2, 1), e(2, 0)]])
    with pytest.raises(NotARieszFamily):
        check_riesz_theorem(F, F)


def test_riesz_random_contained():
    rng = np.random.default_rng(75)
    for _ in range(10):
        F = random_family(rng)
        pert = generate_perturbation(F, 1e9, "gamma_admissible", int(rng.integers(2**32)))
        rep = check_riesz_theorem(F, pert)
        assert rep.hypotheses_hold and rep.contained


# ---------------------------------------------------------------- report plumbing


def test_report_serialization():
    F = diag_family()
    rep = check_kappa_theorem(F, F, trial_seed=42)
    payload = rep.to_dict()
    assert payload["theorem_id"] == "T_kappa"
    assert payload["trial_seed"] == 42
    assert payload["hypotheses_hold"] is True
    assert payload["contained"] is True
    assert payload["predicted"] == {"lower": rep.predicted.lower, "upper": rep.predicted.upper}
    assert payload["conditions"][0]["name"] == "kappa_lt_lower_bound"
    rep2 = check_dual_weighted_theorem(F, F)
    cond = [c for c in rep2.to_dict()["conditions"] if c["name"] == "lambda_finite"][0]
    assert cond["threshold"] is None  # infinity is serialized as null
