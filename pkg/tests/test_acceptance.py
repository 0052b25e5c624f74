"""One test per acceptance criterion, each printing a single PASS/FAIL line.

The lines are collected in ``RESULTS`` and repeated in the terminal summary
(see conftest.py), so they show up even with output capture on. Running this
file directly with python prints them without pytest.
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from bohrlab.bounds import chernoff_params, final_prob_bound, random_bound, tree_series, tree_solve
from bohrlab.estimator import EstimateConfig, estimate
from bohrlab.multiindex import (
    BallSpec,
    SparsePolynomial,
    enumerate_multiindices,
    evaluate_batch,
    monomial_sup,
)
from bohrlab.randpoly import draw_sign_tensor, multilinear_eval, sup_norm_estimate, to_homogeneous
from bohrlab.univariate import (
    UnivariateSeries,
    bohr_radius_1d,
    h2_norm,
    moebius_coeffs,
    wiener_average,
    wintner_objective,
)
from bohrlab.verify import crossover_table
from oracles import monomial_sup_grid

INF = math.inf
RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number: int, title: str, limit_s: float):
    t0 = time.perf_counter()
    detail = {"text": ""}
    try:
        yield detail
    except BaseException as exc:
        dt = time.perf_counter() - t0
        RESULTS[number] = f"criterion {number} FAIL  {title}  ({dt:.2f} s)  {type(exc).__name__}: {exc}".splitlines()[0]
        print(RESULTS[number])
        raise
    dt = time.perf_counter() - t0
    ok = dt < limit_s
    status = "PASS" if ok else "FAIL"
    RESULTS[number] = f"criterion {number} {status}  {title}  ({dt:.2f} s, limit {limit_s:g} s)  {detail['text']}"
    print(RESULTS[number])
    assert ok, f"runtime {dt:.2f} s exceeds {limit_s} s"


def test_criterion_1_bohr_sharpness():
    with criterion(1, "Bohr sharpness", 1.0) as info:
        radii = []
        for a in (0.5, 0.9, 0.99):
            r = bohr_radius_1d(moebius_coeffs(a, 300))
            assert abs(r - 1 / (1 + 2 * a)) <= 1e-4, (a, r)
            radii.append(r)
        assert radii[0] > radii[1] > radii[2] > 1 / 3
        info["text"] = "radii " + ", ".join(f"{r:.6f}" for r in radii)


def test_criterion_2_wintner():
    with criterion(2, "Wintner infimum", 5.0) as info:
        val = wintner_objective(moebius_coeffs(1 / math.sqrt(2), 400))
        assert abs(val - 2) <= 1e-6, val
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(50):
            K = int(rng.integers(1, 80))
            c = rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1)
            c /= np.linalg.norm(c) * rng.uniform(1.0, 1.3)
            s = UnivariateSeries.of(c)
            assert h2_norm(s) <= 1.0
            obj = wintner_objective(s)
            worst = max(worst, obj)
            assert obj <= 2 + 1e-9, obj
        info["text"] = f"objective {val:.10f}, max over 50 random series {worst:.6f}"


def test_criterion_3_tree():
    with criterion(3, "tree equation", 0.1) as info:
        sol = tree_solve()
        x = 1 / (3 * math.exp(1 / 3))
        assert abs(sol.value - x) <= 1e-9
        assert abs(sol.newton - x) <= 1e-9
        assert abs(sol.tree_value - 1 / 3) <= 1e-9
        assert abs(tree_series(sol.newton) - 1 / 3) <= 1e-9
        info["text"] = f"x = {sol.value:.12f}, Newton {sol.newton:.12f}, T(x) = {sol.tree_value:.12f}"


def test_criterion_4_monomial_sup_oracle():
    with criterion(4, "monomial sup vs sphere maximizer", 30.0) as info:
        worst, count = 0.0, 0
        for n in (1, 2, 3):
            for k in range(1, 5):
                for alpha in enumerate_multiindices(n, k):
                    for p in (1.0, 1.5, 2.0, 3.0, INF):
                        got = monomial_sup(alpha, BallSpec(n, p))
                        ref = monomial_sup_grid(alpha.exponents, p)
                        worst = max(worst, abs(got - ref))
                        count += 1
        assert worst <= 1e-3, worst
        info["text"] = f"{count} cases, max |difference| {worst:.2e}"


def test_criterion_5_crossovers():
    with criterion(5, "integer crossovers", 10.0) as info:
        t = crossover_table(5000)
        assert t["K_upper_above_third"] == (2, 188) and t["K_upper_contiguous"]
        assert t["B_upper_above_third"] == (2, 45) and t["B_upper_contiguous"]
        assert t["stir_K_last_failure"] is not None and t["stir_K_last_failure"] <= 148
        for p, last in t["stir_B_last_failure"].items():
            assert last is None or last <= 28, (p, last)
        info["text"] = (
            f"K: 2..{t['K_upper_above_third'][1]}, B: 2..{t['B_upper_above_third'][1]}, "
            f"stir K last failure {t['stir_K_last_failure']}, stir B last failures {t['stir_B_last_failure']}"
        )


def test_criterion_6_chernoff():
    with criterion(6, "final_prob_bound <= random_bound, 2 sqrt2 R identity", 1.0) as info:
        worst_ratio, worst_id = 0.0, 0.0
        for n in range(2, 11):
            for d in range(2, 11):
                for p in (1.0, 1.5, 2.0, 4.0, INF):
                    fb, rb = final_prob_bound(n, d, p), random_bound(n, d, p)
                    assert fb <= rb, (n, d, p)
                    worst_ratio = max(worst_ratio, fb / rb)
                    R = chernoff_params(n, d, p).R
                    worst_id = max(worst_id, abs(2 * math.sqrt(2) * R - fb) / fb)
        assert worst_id <= 1e-9
        info["text"] = f"max final/random {worst_ratio:.4f}, identity rel err {worst_id:.1e}"


def test_criterion_7_random_construction():
    with criterion(7, "random sign construction", 120.0) as info:
        rng = np.random.default_rng(7)
        parts = []
        for n, d in ((4, 3), (6, 4)):
            for p in (2.0, INF):
                ball = BallSpec(n, p)
                fpb = final_prob_bound(n, d, p)
                hits = 0
                for seed in range(20):
                    T = draw_sign_tensor(n, d, seed)
                    Z = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(d)]
                    F = multilinear_eval(T, Z)
                    sw = multilinear_eval(T, [Z[1], Z[0]] + Z[2:])
                    W = rng.normal(size=n) + 1j * rng.normal(size=n)
                    a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
                    lin = multilinear_eval(T, [a * Z[0] + b * W] + Z[1:])
                    lin_ref = a * F + b * multilinear_eval(T, [W] + Z[1:])
                    z = rng.normal(size=n) + 1j * rng.normal(size=n)
                    P = to_homogeneous(T)
                    diag, diag_ref = P(z), multilinear_eval(T, [z] * d)
                    for x, y in ((sw, F), (lin, lin_ref), (diag, diag_ref)):
                        assert abs(x - y) <= 1e-9 * abs(y), (n, d, seed)
                    est = sup_norm_estimate(P, ball, 200_000, seed)
                    hits += est.lower_est <= fpb
                assert hits >= 5, (n, d, p, hits)
                parts.append(f"({n},{d},{ball.p_label()}) {hits}/20")
        info["text"] = "below final_prob_bound: " + ", ".join(parts)


def test_criterion_8_estimator():
    with criterion(8, "estimator brackets", 300.0) as info:
        cfg = EstimateConfig(degrees=(2, 3, 4), seeds=(0, 1, 2), budget=20_000)
        reports = {}
        for n in (1, 2, 3, 4):
            for p in (1.0, 2.0, INF):
                rep = estimate(BallSpec(n, p), cfg)
                reports[(n, p)] = rep
                assert rep.theoretical_lower_K <= rep.empirical_upper_K, (n, p)
                assert rep.theoretical_lower_B <= rep.empirical_upper_B, (n, p)
                assert rep.empirical_upper_B <= rep.empirical_upper_K + 1e-9, (n, p)
                for c in rep.candidates:
                    assert c.r_second_empirical <= c.r_first_empirical + 1e-9
                    assert c.r_second_certified <= c.r_first_certified + 1e-9
                    if math.isinf(p):
                        assert abs(c.r_first_empirical - c.r_second_empirical) <= 1e-6
                        assert abs(c.r_first_certified - c.r_second_certified) <= 1e-6
        one = reports[(1, INF)].empirical_upper_K
        two = reports[(2, INF)].empirical_upper_K
        assert abs(one - 1 / 3) <= 2e-3, one
        assert 1 / (3 * math.sqrt(2)) <= two <= 1 / 3 + 1e-3, two
        info["text"] = f"B_inf^1 {one:.6f}, B_inf^2 {two:.6f}, 12 grid balls bracketed"


def test_criterion_9_wiener():
    with criterion(9, "Wiener averaging", 60.0) as info:
        rng = np.random.default_rng(9)
        N = 60
        th = 2 * np.pi * np.arange(N) / N
        Z = np.stack(np.meshgrid(np.exp(1j * th), np.exp(1j * th), indexing="ij"), -1).reshape(-1, 2)
        worst = -math.inf
        for _ in range(100):
            D = int(rng.integers(2, 8))
            terms = {a: complex(*rng.normal(size=2)) for k in range(D + 1) for a in enumerate_multiindices(2, k)}
            f = SparsePolynomial(2, terms)
            alphas = [a for k in range(1, D + 1) for a in enumerate_multiindices(2, k)]
            alpha = alphas[int(rng.integers(len(alphas)))]
            h = wiener_average(f, alpha, 1.0).averaged
            assert h.constant_term() == f.constant_term()
            assert h.coefficient(alpha) == f.coefficient(alpha)
            for beta, _ in h.items():
                assert all(beta[j] % alpha[j] == 0 for j in range(2) if alpha[j])
            # every dropped term really was non-divisible
            for beta, _ in f.items():
                if all(beta[j] % alpha[j] == 0 for j in range(2) if alpha[j]):
                    assert h.coefficient(beta) == f.coefficient(beta)
            gap = np.abs(evaluate_batch(h, Z)).max() - np.abs(evaluate_batch(f, Z)).max()
            worst = max(worst, gap)
            assert gap <= 1e-9
        info["text"] = f"100 polynomials, max (sup h - sup f) {worst:.3g}"


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
