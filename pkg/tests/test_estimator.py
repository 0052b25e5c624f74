import json
import math

import pytest

from bohrlab.estimator import (
    EstimateConfig,
    build_candidates,
    candidate_radii,
    estimate,
    radius_of_candidate,
)
from bohrlab.multiindex import BallSpec, SparsePolynomial
from bohrlab.randpoly import all_plus_tensor, draw_sign_tensor, sup_norm_estimate, to_homogeneous
from bohrlab.univariate import bohr_radius_1d, moebius_coeffs

INF = math.inf
SMALL = EstimateConfig(degrees=(2, 3), seeds=(0, 1), budget=5_000)


@pytest.mark.parametrize("a", [0.5, 0.9])
def test_moebius_candidate_matches_one_dimensional_radius(a):
    s = moebius_coeffs(a, 300)
    poly = s.to_polynomial(1, 0)
    ball = BallSpec(1, INF)
    est = sup_norm_estimate(poly, ball, 2_000, 0)
    r = radius_of_candidate(poly, ball, "first", est, normalization="empirical")
    assert r == pytest.approx(bohr_radius_1d(s), abs=1e-4)


def test_moebius_product_on_polydisc():
    a = 0.5
    f = moebius_coeffs(a, 60)
    poly = f.to_polynomial(2, 0) * f.to_polynomial(2, 1)
    ball = BallSpec(2, INF)
    est = sup_norm_estimate(poly, ball, 2_000, 0)
    r = radius_of_candidate(poly, ball, "first", est, normalization="empirical")
    assert r == pytest.approx(1 / (1 + 2 * a), abs=1e-4)


def test_kinds_agree_on_polydisc_and_are_ordered_elsewhere():
    for p in (1.0, 2.0, INF):
        ball = BallSpec(3, p)
        for seed in range(3):
            P = to_homogeneous(draw_sign_tensor(3, 3, seed))
            radii = candidate_radii(P, ball, sup_norm_estimate(P, ball, 5_000, seed))
            for norm in ("empirical", "certified"):
                assert radii[f"r_second_{norm}"] <= radii[f"r_first_{norm}"] + 1e-9
                if ball.is_polydisc:
                    assert radii[f"r_second_{norm}"] == pytest.approx(radii[f"r_first_{norm}"], abs=1e-6)


def test_all_plus_candidate_has_radius_one():
    P = to_homogeneous(all_plus_tensor(3, 3))
    ball = BallSpec(3, INF)
    est = sup_norm_estimate(P, ball, 2_000, 0)
    assert radius_of_candidate(P, ball, "first", est, "empirical") == 1.0


def test_radius_errors():
    ball = BallSpec(2, INF)
    est = sup_norm_estimate(SparsePolynomial(2, [((1, 0), 1.0)]), ball, 100, 0)
    with pytest.raises(ValueError):
        radius_of_candidate(SparsePolynomial(2), ball, "first", est)
    with pytest.raises(ValueError):
        radius_of_candidate(SparsePolynomial(2, [((1, 0), 1.0)]), ball, "third", est)
    with pytest.raises(ValueError):
        radius_of_candidate(SparsePolynomial(2, [((1, 0), 1.0)]), ball, "first", est, "guess")


def test_config_errors():
    with pytest.raises(ValueError):
        estimate(BallSpec(2, INF), EstimateConfig(degrees=(), include_moebius_products=False))
    with pytest.raises(ValueError):
        estimate(BallSpec(1, INF), EstimateConfig(include_moebius_products=False))
    with pytest.raises(ValueError):
        estimate(BallSpec(9, INF), SMALL)
    with pytest.raises(ValueError):
        estimate(BallSpec(2, INF), EstimateConfig(degrees=(1,)))


def test_candidate_families():
    items = build_candidates(BallSpec(2, 2.0), SMALL)
    families = {it[1] for it in items}
    assert families == {"sign", "moebius", "moebius-product"}
    assert sum(it[1] == "sign" for it in items) == 4
    assert {it[1] for it in build_candidates(BallSpec(1, 2.0), SMALL)} == {"moebius"}


def test_one_dimensional_ball_reaches_one_third():
    rep = estimate(BallSpec(1, INF), SMALL)
    assert abs(rep.empirical_upper_K - 1 / 3) <= 2e-3
    assert rep.theoretical_lower_K <= rep.empirical_upper_K


def test_polydisc_two_bracket_and_report_shape():
    rep = estimate(BallSpec(2, INF), SMALL)
    assert 1 / (3 * math.sqrt(2)) <= rep.empirical_upper_K <= 1 / 3 + 1e-3
    assert rep.theoretical_lower_K == pytest.approx(1 / (3 * math.sqrt(2)))
    assert rep.theoretical_upper_K == pytest.approx(1 / 3)
    assert rep.candidates_tried == len(rep.candidates) == len(rep.running_min_K)
    assert all(b <= a for a, b in zip(rep.running_min_K, rep.running_min_K[1:]))
    assert rep.running_min_K[-1] == rep.empirical_upper_K
    assert rep.certified_upper_K >= rep.empirical_upper_K - 1e-12
    assert rep.label == "empirical bracket"
    w = rep.best_witness
    assert SparsePolynomial.from_dict(w["polynomial"]).dim == 2
    for c in rep.candidates:
        assert c.r_second_empirical == pytest.approx(c.r_first_empirical, abs=1e-6)


def test_euclidean_ball_lower_below_upper():
    rep = estimate(BallSpec(2, 2.0), SMALL)
    assert rep.theoretical_lower_K == pytest.approx(1 / (3 * math.sqrt(2)))
    assert rep.theoretical_lower_K <= rep.empirical_upper_K
    assert rep.theoretical_lower_B <= rep.empirical_upper_B
    for c in rep.candidates:
        assert c.r_second_empirical <= c.r_first_empirical + 1e-9
        assert c.r_second_certified <= c.r_first_certified + 1e-9


def test_report_is_deterministic_and_thread_independent():
    cfg = EstimateConfig(degrees=(2,), seeds=(0, 1), budget=3_000, moebius_a=(0.5, 0.9))
    a = json.dumps(estimate(BallSpec(2, 1.5), cfg).to_dict(), sort_keys=True, default=str)
    b = json.dumps(estimate(BallSpec(2, 1.5), cfg).to_dict(), sort_keys=True, default=str)
    c = json.dumps(estimate(BallSpec(2, 1.5), cfg, threads=3).to_dict(), sort_keys=True, default=str)
    assert a == b == c
