"""Closed-form bounds on the first and second Bohr radii of l_p^n balls,
the tree-function constant, and the constants of the random construction.

Logarithms are natural. Every product of factorials and powers is evaluated
in log space so that d! and n^d never overflow.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .multiindex import BallSpec, log_factorial

ONE_D_RADIUS = 1.0 / 3.0
TREE_X = math.exp(-1.0 / 3.0) / 3.0
TREE_SERIES_TERMS = 150


def _ball(n: int, p: float) -> BallSpec:
    return BallSpec(n, p)


def _exp(log_value: float) -> float:
    # values beyond double range come back as inf; the log_* functions stay finite
    return math.exp(log_value) if log_value < 709.0 else math.inf


def _exponent_inv_M(ball: BallSpec) -> float:
    return 0.0 if ball.is_polydisc else 1.0 / ball.M


# --------------------------------------------------------------- tree function

@dataclass(frozen=True)
class TreeSolution:
    closed_form: float
    newton: float
    series_residual: float
    tree_value: float
    newton_iterations: int

    @property
    def value(self) -> float:
        return self.closed_form


def _tree_log_coeffs(terms: int, shift: int) -> np.ndarray:
    # log(k^(k - shift) / k!) for k = 1..terms
    k = np.arange(1, terms + 1, dtype=float)
    lg = np.array([math.lgamma(v + 1.0) for v in k])
    return (k - shift) * np.log(k) - lg


def tree_series(x: float, terms: int = TREE_SERIES_TERMS) -> float:
    """T(x) = sum k^(k-1)/k! x^k."""
    k = np.arange(1, terms + 1)
    return float(np.sum(np.exp(_tree_log_coeffs(terms, 1) + k * math.log(x))))


def tree_equation(x: float, terms: int = TREE_SERIES_TERMS) -> tuple[float, float]:
    """(g(x), g'(x)) for g(x) = sum k^k/k! x^k - 1/2."""
    k = np.arange(1, terms + 1)
    logc = _tree_log_coeffs(terms, 0)
    g = np.sum(np.exp(logc + k * math.log(x))) - 0.5
    dg = np.sum(k * np.exp(logc + (k - 1) * math.log(x)))
    return float(g), float(dg)


def tree_solve(x0: float = 0.2, tol: float = 1e-15, max_iter: int = 100) -> TreeSolution:
    """Root of sum k^k/k! x^k = 1/2, by the closed form e^(-1/3)/3 and by Newton."""
    x = x0
    it = 0
    for it in range(1, max_iter + 1):
        g, dg = tree_equation(x)
        step = g / dg
        x -= step
        if abs(step) < tol:
            break
    g, _ = tree_equation(x)
    return TreeSolution(TREE_X, x, abs(g), tree_series(x), it)


# ----------------------------------------------------------- first Bohr radius

def lower_bound_K(ball: BallSpec) -> float:
    """Larger of the valid lower bounds on K(B_p^n)."""
    n = ball.n
    cands = []
    if ball.p <= 2.0:
        cands.append(TREE_X * n ** -(1.0 - ball.inv_p))
    if ball.p >= 2.0:
        cands.append(ONE_D_RADIUS / math.sqrt(n))
    return max(cands)


def upper_bound_K(ball: BallSpec) -> float:
    """Raw upper bound on K(B_p^n), unclamped; needs n >= 2."""
    n = ball.n
    if n < 2:
        raise ValueError("the upper bound needs n >= 2")
    ratio = math.log(n) / n
    cands = []
    if ball.p <= 2.0:
        cands.append(3.0 * ratio ** (1.0 - ball.inv_p))
    if ball.p >= 2.0:
        cands.append(2.0 * math.sqrt(ratio))
    return min(cands)


def log_stir_bound_K(ball: BallSpec, d: int) -> float:
    n = ball.n
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    first = (1.0 - 1.0 / ball.m) * (log_factorial(d) / d - math.log(n))
    second = (math.log(32.0 * n * d) + math.log(math.log(6.0 * d))) / (2.0 * d)
    return first + second


def stir_bound_K(ball: BallSpec, d: int) -> float:
    """((d!)^(1/d)/n)^(1 - 1/m(p)) (32 n d log 6d)^(1/(2d))."""
    return _exp(log_stir_bound_K(ball, d))


def default_degree_K(n: int) -> int:
    return 2 + int(math.floor(math.log(n)))


# ---------------------------------------------------------- second Bohr radius

def lower_bound_B(ball: BallSpec) -> float:
    n = ball.n
    cands = []
    if ball.p <= 2.0:
        cands.append(-math.expm1(math.log(2.0 / 3.0) / n))
    if ball.p >= 2.0:
        cands.append(ONE_D_RADIUS * n ** -(0.5 + ball.inv_p))
    return max(cands)


def upper_bound_B(ball: BallSpec) -> float:
    n = ball.n
    if n < 2:
        raise ValueError("the upper bound needs n >= 2")
    ratio = math.log(n) / n
    cands = []
    if ball.p <= 2.0:
        cands.append(4.0 * ratio)
    if ball.p >= 2.0:
        cands.append(4.0 * ratio ** (0.5 + ball.inv_p))
    return min(cands)


def log_stir_bound_B(ball: BallSpec, d: int) -> float:
    n = ball.n
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    out = -(0.5 + _exponent_inv_M(ball)) * math.log(n)
    out += ball.inv_p * math.log(d)
    out += (1.0 - 1.0 / ball.m) * log_factorial(d) / d
    out += (math.log(32.0 * n * d) + math.log(math.log(6.0 * d))) / (2.0 * d)
    return out


def stir_bound_B(ball: BallSpec, d: int | None = None) -> float:
    """n^-(1/2 + 1/M) d^(1/p) (d!)^((1 - 1/m)/d) (32 n d log 6d)^(1/(2d))."""
    if d is None:
        d = default_degree_B(ball.n)
    return _exp(log_stir_bound_B(ball, d))


def default_degree_B(n: int) -> int:
    return int(math.floor(math.log(n)))


# -------------------------------------------------------- random construction

def _log_variance_scale(n: int, d: int, ball: BallSpec) -> float:
    # log of (d!)^(2(1 - 1/m)) n^((1 - 2/M) d)
    return 2.0 * (1.0 - 1.0 / ball.m) * log_factorial(d) + (
        1.0 - 2.0 * _exponent_inv_M(ball)
    ) * d * math.log(n)


def _log_net_term(n: int, d: int) -> float:
    # log(8 (1 + 4d)^(2nd))
    return math.log(8.0) + 2.0 * n * d * math.log(1.0 + 4.0 * d)


def _check_nd(n: int, d: int):
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")


def log_random_bound(n: int, d: int, p: float) -> float:
    _check_nd(n, d)
    ball = _ball(n, p)
    out = 0.5 * (math.log(32.0 * d) + math.log(math.log(6.0 * d)))
    if ball.p <= 2.0:
        out += 0.5 * math.log(n) + (1.0 - ball.inv_p) * log_factorial(d)
    else:
        out += (0.5 + (0.5 - ball.inv_p) * d) * math.log(n) + 0.5 * log_factorial(d)
    return out


def random_bound(n: int, d: int, p: float) -> float:
    """The sup bound for the random symmetric form on (B_p^n)^d."""
    return _exp(log_random_bound(n, d, p))


def random_bound_branches(n: int, d: int, p: float) -> tuple[float, float]:
    """Both piecewise branches evaluated at p (they agree at p = 2)."""
    _check_nd(n, d)
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    base = 0.5 * (math.log(32.0 * d) + math.log(math.log(6.0 * d)))
    low = base + 0.5 * math.log(n) + (1.0 - inv_p) * log_factorial(d)
    high = base + (0.5 + (0.5 - inv_p) * d) * math.log(n) + 0.5 * log_factorial(d)
    return _exp(low), _exp(high)


def log_final_prob_bound(n: int, d: int, p: float) -> float:
    _check_nd(n, d)
    ball = _ball(n, p)
    return 0.5 * (math.log(16.0) + _log_variance_scale(n, d, ball) + math.log(_log_net_term(n, d)))


def final_prob_bound(n: int, d: int, p: float) -> float:
    """(16 (d!)^(2(1-1/m)) n^((1-2/M)d) log(8 (1+4d)^(2nd)))^(1/2)."""
    return _exp(log_final_prob_bound(n, d, p))


@dataclass(frozen=True)
class ChernoffParams:
    R: float
    lam: float
    variance_scale: float
    log_net: float

    def chebyshev_exponent(self) -> float:
        """-R lambda + lambda^2 A / 2; equals -log(8 (1+4d)^(2nd)) at these choices."""
        return -self.R * self.lam + 0.5 * self.lam**2 * self.variance_scale


def chernoff_params(n: int, d: int, p: float) -> ChernoffParams:
    _check_nd(n, d)
    ball = _ball(n, p)
    log_A = _log_variance_scale(n, d, ball)
    L = _log_net_term(n, d)
    log_R = 0.5 * (math.log(2.0) + log_A + math.log(L))
    R = math.exp(log_R)
    lam = math.exp(log_R - log_A)
    return ChernoffParams(R, lam, math.exp(log_A), L)


def log_covering_count(n: int, eps: float) -> float:
    if eps <= 0 or n < 1:
        raise ValueError("need eps > 0 and n >= 1")
    return 2.0 * n * math.log1p(2.0 / eps)


def covering_count(n: int, eps: float) -> float:
    """Number of eps-balls covering the complex l_p^n unit ball: (1 + 2/eps)^(2n)."""
    return _exp(log_covering_count(n, eps))


def net_size(n: int, d: int) -> float:
    """Points in the product net at eps = 1/(2d): (1 + 4d)^(2nd)."""
    return _exp(d * log_covering_count(n, 1.0 / (2.0 * d)))


# --------------------------------------------------------------------- report

@dataclass(frozen=True)
class BoundReport:
    n: int
    p: float
    lower_K: float
    upper_K: float
    upper_K_raw: float
    stir_K: float
    d_used_K: int
    lower_B: float
    upper_B: float
    upper_B_raw: float
    stir_B: float
    d_used_B: int

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(ball: BallSpec) -> BoundReport:
    """All bounds for one ball, upper bounds clamped to the one-dimensional 1/3.

    The second-radius stir bound needs floor(log n) >= 2, i.e. n >= 8;
    below that it is reported as NaN with d_used_B as computed.
    """
    n = ball.n
    if n < 2:
        raise ValueError("bound report needs n >= 2")
    raw_K = upper_bound_K(ball)
    raw_B = upper_bound_B(ball)
    dK = default_degree_K(n)
    dB = default_degree_B(n)
    sB = stir_bound_B(ball, dB) if dB >= 2 else math.nan
    return BoundReport(
        n=n,
        p=ball.p,
        lower_K=lower_bound_K(ball),
        upper_K=min(ONE_D_RADIUS, raw_K),
        upper_K_raw=raw_K,
        stir_K=stir_bound_K(ball, dK),
        d_used_K=dK,
        lower_B=lower_bound_B(ball),
        upper_B=min(ONE_D_RADIUS, raw_B),
        upper_B_raw=raw_B,
        stir_B=sB,
        d_used_B=dB,
    )
