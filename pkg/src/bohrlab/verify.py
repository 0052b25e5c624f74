"""Named invariant suites, run by ``bohrlab verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds
from .estimator import EstimateConfig, candidate_radii, estimate
from .multiindex import (
    BallSpec,
    SparsePolynomial,
    enumerate_multiindices,
    evaluate,
    majorant,
    monomial_sup,
    multinomial,
)
from .randpoly import draw_sign_tensor, multilinear_eval, sup_norm_estimate, to_homogeneous
from .univariate import (
    UnivariateSeries,
    bohr_radius_1d,
    caratheodory_check,
    h2_norm,
    majorant_sum,
    moebius_coeffs,
    wiener_average,
    wintner_h2_bound,
    wintner_objective,
)

INF = math.inf


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def _check(suite: str, name: str, passed: bool, detail: str = "") -> Check:
    return Check(suite, name, bool(passed), detail)


def suite_multiindex(seed: int) -> list[Check]:
    out = []
    ok_count = ok_sum = True
    for n in range(1, 5):
        for k in range(7):
            idx = enumerate_multiindices(n, k)
            ok_count &= len(idx) == math.comb(n + k - 1, k)
            ok_sum &= sum(multinomial(k, a) for a in idx) == n**k
    out.append(_check("multiindex", "count C(n+k-1,k)", ok_count, "n<=4, k<=6"))
    out.append(_check("multiindex", "sum of multinomials = n^k", ok_sum, "n<=4, k<=6"))

    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(20):
        terms = {a: complex(*rng.normal(size=2)) for a in enumerate_multiindices(2, 0)
                 + enumerate_multiindices(2, 1) + enumerate_multiindices(2, 2)}
        f = SparsePolynomial(2, terms)
        r = rng.uniform(0.1, 1.0)
        M = evaluate(majorant(f), [r, r]).real
        z = r * np.exp(2j * np.pi * rng.uniform(size=2)) * rng.uniform(size=2)
        worst = max(worst, abs(evaluate(f, z)) - M)
    out.append(_check("multiindex", "majorant dominates", worst <= 1e-12, f"max excess {worst:.3g}"))

    mono = True
    for a in [(1, 1), (2, 1, 0), (1, 1, 2)]:
        inf_val = monomial_sup(a, BallSpec(len(a), INF))
        mono &= all(monomial_sup(a, BallSpec(len(a), p)) <= inf_val for p in (1, 1.5, 2, 3))
    out.append(_check("multiindex", "monomial sup below polydisc value", mono))
    return out


def suite_bohr(seed: int) -> list[Check]:
    out = []
    vals = []
    for a in (0.5, 0.9, 0.99):
        r = bohr_radius_1d(moebius_coeffs(a, 300))
        vals.append(r)
        out.append(_check("bohr", f"radius a={a}", abs(r - 1 / (1 + 2 * a)) <= 1e-4, f"{r:.10f}"))
    out.append(_check("bohr", "radii decrease toward 1/3",
                      vals[0] > vals[1] > vals[2] > 1 / 3, str([round(v, 6) for v in vals])))
    worst = 0.0
    for a in np.arange(1, 10) / 10:
        s = moebius_coeffs(a, 300)
        for r in np.linspace(0, 0.99, 100):
            worst = max(worst, abs(majorant_sum(s, r) - (2 * a + (r - a) / (1 - a * r))))
    out.append(_check("bohr", "majorant identity 2a + f_a(r)", worst <= 1e-9, f"max err {worst:.3g}"))
    return out


def _moebius_product(rng, K: int = 300) -> UnivariateSeries:
    coeffs = np.array([1.0 + 0j])
    for _ in range(int(rng.integers(1, 4))):
        a = rng.uniform(0.05, 0.95)
        phase = np.exp(2j * np.pi * rng.uniform())
        coeffs = np.convolve(coeffs, phase * moebius_coeffs(a, K).array)[: K + 1]
    return UnivariateSeries.of(coeffs)


def suite_caratheodory(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    res = [caratheodory_check(_moebius_product(rng)) for _ in range(30)]
    out = [_check("caratheodory", "Moebius products pass", all(r.passes for r in res),
                  f"worst ratio {max(r.worst_ratio for r in res):.6f}")]
    bad = caratheodory_check(UnivariateSeries.of([0.9, 0.5]))
    out.append(_check("caratheodory", "0.9 + 0.5 z is flagged", not bad.passes, f"ratio {bad.worst_ratio:.3f}"))
    return out


def suite_wintner(seed: int) -> list[Check]:
    out = []
    a = 1 / math.sqrt(2)
    val = wintner_objective(moebius_coeffs(a, 400))
    out.append(_check("wintner", "objective at a = 1/sqrt2 is 2", abs(val - 2) <= 1e-6, f"{val:.12f}"))
    rng = np.random.default_rng(seed)
    worst = -math.inf
    for _ in range(50):
        K = int(rng.integers(1, 40))
        c = rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1)
        c /= np.linalg.norm(c) * rng.uniform(1.0, 2.0)
        s = UnivariateSeries.of(c)
        worst = max(worst, wintner_objective(s) - wintner_h2_bound(abs(c[0])))
    out.append(_check("wintner", "objective <= H2 bound <= 2 on random series", worst <= 1e-9,
                      f"max excess {worst:.3g}"))
    grid = max(wintner_h2_bound(c) for c in np.linspace(0, 1, 201))
    out.append(_check("wintner", "H2 bound never exceeds 2", grid <= 2 + 1e-12, f"max {grid:.12f}"))
    return out


def suite_tree(seed: int) -> list[Check]:
    sol = bounds.tree_solve()
    return [
        _check("tree", "closed form vs Newton", abs(sol.closed_form - sol.newton) <= 1e-10,
               f"{sol.closed_form:.15f} {sol.newton:.15f}"),
        _check("tree", "series residual", sol.series_residual <= 1e-10, f"{sol.series_residual:.3g}"),
        _check("tree", "T(x) = 1/3", abs(sol.tree_value - 1 / 3) <= 1e-9, f"{sol.tree_value:.15f}"),
        _check("tree", "T e^-T = x", abs((1 / 3) * math.exp(-1 / 3) - sol.closed_form) <= 1e-12),
    ]


def crossover_table(n_max: int = 5000) -> dict:
    """Integer crossovers of the theorem bounds against 1/3 and of the stir bounds."""
    third = 1.0 / 3.0
    k_above = [n for n in range(2, n_max + 1) if 2 * math.sqrt(math.log(n) / n) > third]
    b_above = [n for n in range(2, n_max + 1) if 4 * math.log(n) / n > third]
    stir_k_fail = [
        n for n in range(2, n_max + 1)
        if bounds.stir_bound_K(BallSpec(n, INF), bounds.default_degree_K(n))
        > 2 * math.sqrt(math.log(n) / n)
    ]
    stir_b_fail = {}
    for p in (1.0, 2.0, INF):
        ball_fail = [
            n for n in range(8, n_max + 1)
            if bounds.stir_bound_B(BallSpec(n, p), bounds.default_degree_B(n))
            > bounds.upper_bound_B(BallSpec(n, p))
        ]
        stir_b_fail["inf" if math.isinf(p) else f"{p:g}"] = max(ball_fail, default=None)
    return {
        "K_upper_above_third": (min(k_above), max(k_above)),
        "B_upper_above_third": (min(b_above), max(b_above)),
        "K_upper_contiguous": k_above == list(range(2, max(k_above) + 1)),
        "B_upper_contiguous": b_above == list(range(2, max(b_above) + 1)),
        "stir_K_last_failure": max(stir_k_fail, default=None),
        "stir_B_last_failure": stir_b_fail,
    }


def suite_crossovers(seed: int) -> list[Check]:
    t = crossover_table()
    out = [
        _check("crossovers", "2 sqrt(log n/n) > 1/3 iff 2 <= n <= 188",
               t["K_upper_above_third"] == (2, 188) and t["K_upper_contiguous"], str(t["K_upper_above_third"])),
        _check("crossovers", "4 log n/n > 1/3 iff 2 <= n <= 45",
               t["B_upper_above_third"] == (2, 45) and t["B_upper_contiguous"], str(t["B_upper_above_third"])),
        _check("crossovers", "stir K bound below theorem bound for 149 <= n <= 5000",
               t["stir_K_last_failure"] is not None and t["stir_K_last_failure"] <= 148,
               f"last failure n={t['stir_K_last_failure']}"),
    ]
    for p, last in t["stir_B_last_failure"].items():
        out.append(_check("crossovers", f"stir B bound below theorem bound for 29 <= n <= 5000, p={p}",
                          last is None or last <= 28, f"last failure n={last}"))
    seq = [n * -math.expm1(math.log(2 / 3) / n) for n in range(1, 10001)]
    out.append(_check("crossovers", "n(1 - (2/3)^(1/n)) increasing from 1/3",
                      abs(seq[0] - 1 / 3) < 1e-15 and all(b > a for a, b in zip(seq, seq[1:]))))
    return out


def suite_sandwich(seed: int) -> list[Check]:
    ok_K = ok_B = True
    for n in range(2, 10001):
        for p in (1.0, 1.5, 2.0, 4.0, INF):
            ball = BallSpec(n, p)
            ok_K &= bounds.lower_bound_K(ball) <= min(1 / 3, bounds.upper_bound_K(ball))
            ok_B &= bounds.lower_bound_B(ball) <= min(1 / 3, bounds.upper_bound_B(ball))
    return [_check("sandwich", "lower_K <= min(1/3, upper_K)", ok_K, "n in 2..10^4"),
            _check("sandwich", "lower_B <= min(1/3, upper_B)", ok_B, "n in 2..10^4")]


def suite_chernoff(seed: int) -> list[Check]:
    ok_order = True
    worst_id = worst_exp = 0.0
    for n in range(2, 11):
        for d in range(2, 11):
            for p in (1.0, 1.5, 2.0, 4.0, INF):
                ok_order &= bounds.final_prob_bound(n, d, p) <= bounds.random_bound(n, d, p)
                cp = bounds.chernoff_params(n, d, p)
                fb = bounds.final_prob_bound(n, d, p)
                worst_id = max(worst_id, abs(2 * math.sqrt(2) * cp.R - fb) / fb)
                worst_exp = max(worst_exp, abs(cp.chebyshev_exponent() + cp.log_net) / cp.log_net)
    xs = np.linspace(-10, 10, 2001)
    return [
        _check("chernoff", "final_prob_bound <= random_bound", ok_order, "2 <= n, d <= 10"),
        _check("chernoff", "2 sqrt2 R = final_prob_bound", worst_id <= 1e-9, f"max rel err {worst_id:.3g}"),
        _check("chernoff", "Chebyshev exponent = -log(8(1+4d)^(2nd))", worst_exp <= 1e-9, f"{worst_exp:.3g}"),
        _check("chernoff", "cosh x <= exp(x^2/2)", bool(np.all(np.cosh(xs) <= np.exp(xs**2 / 2)))),
    ]


def suite_wiener(seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    N = 60
    th = 2 * np.pi * np.arange(N) / N
    Z = np.stack(np.meshgrid(np.exp(1j * th), np.exp(1j * th), indexing="ij"), -1).reshape(-1, 2)
    from .multiindex import evaluate_batch

    ok_keep = ok_filter = ok_sup = True
    for _ in range(100):
        D = int(rng.integers(2, 7))
        terms = {a: complex(*rng.normal(size=2)) for k in range(D + 1) for a in enumerate_multiindices(2, k)}
        f = SparsePolynomial(2, terms)
        alpha = enumerate_multiindices(2, int(rng.integers(1, D + 1)))
        alpha = alpha[int(rng.integers(len(alpha)))]
        h = wiener_average(f, alpha, 1.0).averaged
        ok_keep &= h.constant_term() == f.constant_term() and h.coefficient(alpha) == f.coefficient(alpha)
        ok_filter &= all(all(b[j] % alpha[j] == 0 for j in range(2) if alpha[j]) for b, _ in h.items())
        ok_sup &= np.abs(evaluate_batch(h, Z)).max() <= np.abs(evaluate_batch(f, Z)).max() + 1e-9
    return [
        _check("wiener", "constant and alpha terms preserved", ok_keep),
        _check("wiener", "non-divisible exponents removed", ok_filter),
        _check("wiener", "sampled sup does not increase", ok_sup, "rotation-closed 60x60 torus grid"),
    ]


def suite_random(seed: int, budget: int = 20_000) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n, d in ((4, 3), (6, 4)):
        for s in range(3):
            T = draw_sign_tensor(n, d, seed + s)
            Zs = [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(d)]
            base = multilinear_eval(T, Zs)
            swapped = multilinear_eval(T, [Zs[1], Zs[0]] + Zs[2:])
            W = rng.normal(size=n) + 1j * rng.normal(size=n)
            lin = multilinear_eval(T, [2 * Zs[0] - 3j * W] + Zs[1:])
            lin_ref = 2 * base - 3j * multilinear_eval(T, [W] + Zs[1:])
            z = Zs[0]
            diag = evaluate(to_homogeneous(T), z)
            diag_ref = multilinear_eval(T, [z] * d)
            for x, y in ((base, swapped), (lin, lin_ref), (diag, diag_ref)):
                worst = max(worst, abs(x - y) / max(abs(y), 1e-300))
    out = [_check("random", "symmetry, multilinearity, diagonal identity", worst <= 1e-9, f"max rel {worst:.3g}")]
    hits = 0
    for s in range(5):
        P = to_homogeneous(draw_sign_tensor(4, 3, seed + s))
        est = sup_norm_estimate(P, BallSpec(4, INF), budget, s)
        hits += est.lower_est <= bounds.final_prob_bound(4, 3, INF)
    out.append(_check("random", "sampled sup below final_prob_bound", hits >= 2, f"{hits}/5 seeds"))
    return out


def suite_estimator(seed: int, budget: int = 5_000) -> list[Check]:
    cfg = EstimateConfig(degrees=(2, 3), seeds=(0, 1), budget=budget, seed=seed)
    out = []
    one = estimate(BallSpec(1, INF), cfg)
    out.append(_check("estimator", "B_inf^1 bracket within 2e-3 of 1/3",
                      abs(one.empirical_upper_K - 1 / 3) <= 2e-3, f"{one.empirical_upper_K:.6f}"))
    two = estimate(BallSpec(2, INF), cfg)
    out.append(_check("estimator", "B_inf^2 bracket",
                      1 / (3 * math.sqrt(2)) <= two.empirical_upper_K <= 1 / 3 + 1e-3,
                      f"{two.empirical_upper_K:.6f}"))
    eq = all(abs(c.r_first_empirical - c.r_second_empirical) <= 1e-6 for c in two.candidates)
    out.append(_check("estimator", "first = second radius on the polydisc", eq))
    return out


SUITES: dict[str, Callable[[int], list[Check]]] = {
    "multiindex": suite_multiindex,
    "bohr": suite_bohr,
    "caratheodory": suite_caratheodory,
    "wintner": suite_wintner,
    "tree": suite_tree,
    "crossovers": suite_crossovers,
    "sandwich": suite_sandwich,
    "chernoff": suite_chernoff,
    "wiener": suite_wiener,
    "random": suite_random,
    "estimator": suite_estimator,
}


def run_suites(only: list[str] | None = None, seed: int = 0) -> list[Check]:
    names = list(SUITES) if not only else only
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
    out = []
    for name in names:
        out.extend(SUITES[name](seed))
    return out
