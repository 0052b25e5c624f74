"""Empirical upper brackets for the Bohr radii K(B_p^n) and B(B_p^n).

Each candidate polynomial f yields radii r with sup over rB of the majorant
equal to sup|f| on B. Since sup|f| is only estimated, two normalizations are
kept side by side:

* ``certified``: divide by the crude certificate sum |c_a| sup|z^a|, which is
  a true upper bound for sup|f|. The radius is rigorous for that candidate
  but usually weak.
* ``empirical``: divide by the best value found by the ascent. This is the
  honest best guess, and it is what ``empirical_upper_K`` and
  ``empirical_upper_B`` report. The output is an empirical bracket, not a value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bounds
from .ascent import majorant_sup
from .multiindex import BallSpec, SparsePolynomial, majorant, monomial_sup
from .randpoly import SupEstimate, draw_sign_tensor, sup_norm_estimate, to_homogeneous
from .univariate import bisect_increasing, moebius_coeffs, moebius_truncation_order

RADIUS_TOL = 1e-7
MOEBIUS_TAIL = 1e-12
PRODUCT_TERM_CAP = 5000

__all__ = [
    "majorant_sup",
    "radius_of_candidate",
    "candidate_radii",
    "EstimateConfig",
    "EstimateReport",
    "CandidateRecord",
    "estimate",
]


def _majorant_profile(poly: SparsePolynomial, ball: BallSpec) -> Callable[[float], float]:
    """r -> sup over rB of sum |c_a| |z^a|."""
    abs_poly = majorant(poly)
    if ball.is_polydisc or len(abs_poly.active_variables()) <= 1:
        return lambda r: majorant_sup(abs_poly, ball, r)
    if poly.is_homogeneous():
        d = poly.degree()
        base = majorant_sup(abs_poly, ball, 1.0)
        return lambda r: base * r**d
    return lambda r: majorant_sup(abs_poly, ball, r)


def _second_kind_profile(poly: SparsePolynomial, ball: BallSpec) -> Callable[[float], float]:
    """r -> sum |c_a| sup over rB of |z^a|."""
    E, c = poly.arrays()
    deg = E.sum(axis=1)
    w = np.abs(c) * np.array([monomial_sup(a, ball) for a, _ in poly.items()])
    return lambda r: float(np.sum(w * r**deg))


def _radii(poly: SparsePolynomial, ball: BallSpec, sup_value: float, tol: float) -> tuple[float, float]:
    second = _second_kind_profile(poly, ball)
    first_raw = _majorant_profile(poly, ball)

    # the sup of a sum never exceeds the sum of the sups
    def first(r: float) -> float:
        return min(first_raw(r), second(r))

    r1 = bisect_increasing(first, sup_value, 0.0, 1.0, tol)
    r2 = bisect_increasing(second, sup_value, 0.0, 1.0, tol)
    return r1, r2


def radius_of_candidate(
    poly: SparsePolynomial,
    ball: BallSpec,
    kind: str,
    sup_est: SupEstimate,
    normalization: str = "certified",
    tol: float = RADIUS_TOL,
) -> float:
    """Radius implied by one candidate, for kind "first" (K) or "second" (B)."""
    if poly.is_zero():
        raise ValueError("the zero polynomial has no Bohr radius")
    if kind not in ("first", "second"):
        raise ValueError(f"unknown kind {kind!r}")
    s = _normalizer(sup_est, normalization)
    if kind == "second":
        return bisect_increasing(_second_kind_profile(poly, ball), s, 0.0, 1.0, tol)
    return _radii(poly, ball, s, tol)[0]


def _normalizer(sup_est: SupEstimate, normalization: str) -> float:
    if normalization == "certified":
        return sup_est.upper_cert
    if normalization == "empirical":
        return sup_est.lower_est
    raise ValueError(f"unknown normalization {normalization!r}")


def candidate_radii(poly: SparsePolynomial, ball: BallSpec, sup_est: SupEstimate, tol: float = RADIUS_TOL) -> dict:
    """All four radii of one candidate."""
    r1e, r2e = _radii(poly, ball, sup_est.lower_est, tol)
    r1c, r2c = _radii(poly, ball, sup_est.upper_cert, tol)
    return {
        "r_first_empirical": r1e,
        "r_second_empirical": r2e,
        "r_first_certified": r1c,
        "r_second_certified": r2c,
    }


@dataclass(frozen=True)
class EstimateConfig:
    degrees: tuple[int, ...] = (2, 3, 4)
    seeds: tuple[int, ...] = tuple(range(10))
    budget: int = 200_000
    include_moebius_products: bool = True
    moebius_a: tuple[float, ...] = (0.5, 0.9, 0.99, 0.999)
    moebius_budget: int = 2048
    seed: int = 0

    def validate(self, ball: BallSpec):
        if not self.degrees and not self.include_moebius_products:
            raise ValueError("configuration yields no candidates")
        if ball.n >= 2 and self.degrees and not self.seeds and not self.include_moebius_products:
            raise ValueError("configuration yields no candidates")
        if ball.n < 2 and not self.include_moebius_products:
            raise ValueError("in one variable only Moebius candidates are available")
        if ball.n > 8:
            raise ValueError("the estimator is meant for n <= 8")
        if any(d < 2 or d > 8 for d in self.degrees):
            raise ValueError("degrees must lie in 2..8")
        if any(not 0 < a < 1 for a in self.moebius_a):
            raise ValueError("Moebius parameters must lie in (0, 1)")
        if self.budget < 1 or self.moebius_budget < 1:
            raise ValueError("budgets must be positive")


@dataclass(frozen=True)
class CandidateRecord:
    name: str
    family: str
    degree: int
    seed: int
    terms: int
    lower_est: float
    upper_cert: float
    gap: float
    budget_used: int
    r_first_empirical: float
    r_second_empirical: float
    r_first_certified: float
    r_second_certified: float


@dataclass
class EstimateReport:
    ball: BallSpec
    theoretical_lower_K: float
    theoretical_upper_K: float
    theoretical_lower_B: float
    theoretical_upper_B: float
    empirical_upper_K: float
    empirical_upper_B: float
    certified_upper_K: float
    certified_upper_B: float
    best_witness: dict
    candidates_tried: int
    seed: int
    running_min_K: list[float] = field(default_factory=list)
    candidates: list[CandidateRecord] = field(default_factory=list)
    label: str = "empirical bracket"

    def to_dict(self) -> dict:
        out = asdict(self)
        out["ball"] = {"n": self.ball.n, "p": self.ball.p_label()}
        out["header"] = (
            "empirical_* columns normalize each candidate by the best sup found "
            "(lower_est); certified_* columns normalize by sum |c_a| sup|z^a|, "
            "which is rigorous per candidate. Radii are upper brackets, never values."
        )
        return out


def _sub_seed(base: int, *parts: int) -> int:
    return int(np.random.SeedSequence([base, *parts]).generate_state(1)[0])


def build_candidates(ball: BallSpec, config: EstimateConfig) -> list[tuple[str, str, int, int, SparsePolynomial, int, int]]:
    """(name, family, degree, seed, polynomial, budget, estimation seed) for every candidate."""
    n = ball.n
    out = []
    if n >= 2:
        for d in config.degrees:
            for s in config.seeds:
                poly = to_homogeneous(draw_sign_tensor(n, d, s))
                out.append((f"sign n={n} d={d} seed={s}", "sign", d, s, poly, config.budget,
                            _sub_seed(config.seed, d, s)))
    if config.include_moebius_products:
        mb = min(config.budget, config.moebius_budget)
        for i, a in enumerate(config.moebius_a):
            K = moebius_truncation_order(a, MOEBIUS_TAIL)
            factor = moebius_coeffs(a, K)
            poly = factor.to_polynomial(n, 0)
            out.append((f"moebius a={a:g} K={K}", "moebius", K, -1, poly, mb, _sub_seed(config.seed, 1000 + i)))
            for m in range(2, n + 1):
                if (K + 1) ** m > PRODUCT_TERM_CAP:
                    break
                prod = poly
                for j in range(1, m):
                    prod = prod * factor.to_polynomial(n, j)
                out.append((f"moebius^{m} a={a:g} K={K}", "moebius-product", K * m, -1, prod, mb,
                            _sub_seed(config.seed, 2000 + i, m)))
    return out


def _evaluate_candidate(ball: BallSpec, item) -> tuple[CandidateRecord, SparsePolynomial, SupEstimate]:
    name, family, degree, seed, poly, budget, est_seed = item
    est = sup_norm_estimate(poly, ball, budget, est_seed)
    radii = candidate_radii(poly, ball, est)
    rec = CandidateRecord(
        name=name, family=family, degree=degree, seed=seed, terms=len(poly),
        lower_est=est.lower_est, upper_cert=est.upper_cert, gap=est.gap,
        budget_used=est.budget_used, **radii,
    )
    return rec, poly, est


def estimate(ball: BallSpec, config: EstimateConfig = EstimateConfig(), threads: int = 1) -> EstimateReport:
    """Search random +-multinomial and Moebius candidates for small Bohr radii."""
    config.validate(ball)
    items = build_candidates(ball, config)
    if not items:
        raise ValueError("configuration yields no candidates")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda it: _evaluate_candidate(ball, it), items))
    else:
        results = [_evaluate_candidate(ball, it) for it in items]

    if ball.n >= 2:
        upper_K = min(bounds.ONE_D_RADIUS, bounds.upper_bound_K(ball))
        upper_B = min(bounds.ONE_D_RADIUS, bounds.upper_bound_B(ball))
    else:
        upper_K = upper_B = bounds.ONE_D_RADIUS

    running, best = [], math.inf
    best_i = 0
    for i, (rec, _, _) in enumerate(results):
        if rec.r_first_empirical < best:
            best, best_i = rec.r_first_empirical, i
        running.append(best)
    rec, poly, est = results[best_i]
    witness = {
        "name": rec.name,
        "polynomial": poly.to_dict(),
        "sup_estimate": {
            "lower_est": est.lower_est,
            "upper_cert": est.upper_cert,
            "argmax_point": [[v.real, v.imag] for v in est.argmax_point],
            "budget_used": est.budget_used,
        },
    }
    recs = [r for r, _, _ in results]
    return EstimateReport(
        ball=ball,
        theoretical_lower_K=bounds.lower_bound_K(ball),
        theoretical_upper_K=upper_K,
        theoretical_lower_B=bounds.lower_bound_B(ball),
        theoretical_upper_B=upper_B,
        empirical_upper_K=min(r.r_first_empirical for r in recs),
        empirical_upper_B=min(r.r_second_empirical for r in recs),
        certified_upper_K=min(r.r_first_certified for r in recs),
        certified_upper_B=min(r.r_second_certified for r in recs),
        best_witness=witness,
        candidates_tried=len(recs),
        seed=config.seed,
        running_min_K=running,
        candidates=recs,
    )
