"""One-variable majorant analysis: the Moebius extremals, Bohr's radius 1/3,
Caratheodory's coefficient test, Wintner's infimum and Wiener averaging."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .multiindex import BallSpec, MultiIndex, SparsePolynomial, monomial_sup

HYPOTHESIS_RADIUS = 0.999
HYPOTHESIS_SAMPLES = 256
HYPOTHESIS_SLACK = 1e-6
# a truncation is checked where the dropped tail is far below the slack
TRUNCATION_TAIL = 1e-9
CARATHEODORY_SLACK = 1e-9
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class HypothesisViolation(ValueError):
    """The series is visibly not bounded by 1 on the disc."""


@dataclass(frozen=True)
class UnivariateSeries:
    """Truncated Maclaurin series c_0 + c_1 z + ... + c_K z^K.

    ``truncated`` marks a cut-off of an infinite series (as opposed to a
    polynomial given exactly); the boundedness check then samples a circle
    on which the dropped tail cannot be seen.
    """

    coeffs: tuple[complex, ...]
    truncated: bool = False

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))

    @classmethod
    def of(cls, coeffs: Sequence[complex], truncated: bool = False) -> "UnivariateSeries":
        return cls(tuple(coeffs), truncated)

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    def abs_coeffs(self) -> np.ndarray:
        return np.abs(self.array)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, z):
        # Horner, vectorized over z
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for c in reversed(self.coeffs):
            out = out * z + c
        return out

    def to_polynomial(self, dim: int = 1, variable: int = 0) -> SparsePolynomial:
        terms = []
        for k, c in enumerate(self.coeffs):
            e = [0] * dim
            e[variable] = k
            terms.append((MultiIndex(tuple(e)), c))
        return SparsePolynomial(dim, terms)

    def check_radius(self) -> float:
        if not self.truncated:
            return HYPOTHESIS_RADIUS
        return min(HYPOTHESIS_RADIUS, TRUNCATION_TAIL ** (1.0 / (self.K + 1)))

    def sampled_sup(self, radius: float | None = None, samples: int = HYPOTHESIS_SAMPLES) -> float:
        if radius is None:
            radius = self.check_radius()
        theta = 2.0 * np.pi * np.arange(samples) / samples
        return float(np.max(np.abs(self(radius * np.exp(1j * theta)))))


def moebius_coeffs(a: float, K: int) -> UnivariateSeries:
    """Coefficients of (z - a)/(1 - a z) through order K."""
    if not 0.0 < a < 1.0:
        raise ValueError(f"a must lie in (0, 1), got {a}")
    if K < 1:
        raise ValueError("truncation order K must be >= 1")
    k = np.arange(1, K + 1)
    tail = (1.0 - a * a) * a ** (k - 1.0)
    return UnivariateSeries(tuple([-a] + tail.tolist()), truncated=True)


def moebius_truncation_order(a: float, tail_tol: float = 1e-12) -> int:
    """Smallest K with the dropped coefficient mass (1 + a) a^K below ``tail_tol``."""
    return max(1, math.ceil(math.log(tail_tol / (1.0 + a)) / math.log(a)))


def _abs_power_sum(abs_c: np.ndarray, r: float) -> float:
    if r == 0.0:
        return float(abs_c[0])
    k = np.arange(abs_c.size)
    with np.errstate(under="ignore"):
        return float(np.sum(abs_c * np.exp(k * math.log(r))))


def majorant_sum(s: UnivariateSeries, r: float) -> float:
    """sum |c_k| r^k over the stored coefficients."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"r must lie in [0, 1), got {r}")
    return _abs_power_sum(s.abs_coeffs(), r)


def check_bounded(s: UnivariateSeries) -> float:
    """Sampled sup on |z| = s.check_radius(); raises if it visibly exceeds 1."""
    sup = s.sampled_sup()
    if sup > 1.0 + HYPOTHESIS_SLACK:
        raise HypothesisViolation(f"sampled modulus {sup:.9g} exceeds 1 at |z| = {s.check_radius():.6g}")
    return sup


def bisect_increasing(
    f: Callable[[float], float], target: float, lo: float, hi: float, tol: float
) -> float:
    """Largest x in [lo, hi] (to ``tol``) with f(x) <= target, f non-decreasing.

    Returns the left end of the final bracket, so the result is always feasible.
    """
    if f(hi) <= target:
        return hi
    if f(lo) > target:
        return lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) <= target:
            lo = mid
        else:
            hi = mid
    return lo


def bohr_radius_1d(s: UnivariateSeries, tol: float = 1e-8) -> float:
    """Largest r in [0, 1] with majorant_sum(s, r) <= 1."""
    check_bounded(s)
    abs_c = s.abs_coeffs()
    return bisect_increasing(lambda r: _abs_power_sum(abs_c, r), 1.0, 0.0, 1.0, tol)


@dataclass(frozen=True)
class CaratheodoryResult:
    passes: bool
    worst_ratio: float
    sampled_sup: float


def caratheodory_check(s: UnivariateSeries) -> CaratheodoryResult:
    """Test |c_k| <= 2(1 - |c_0|) for k >= 1.

    The ratio reported is max_k |c_k| / (2(1 - |c_0|)). A failing test on a
    series whose sampled sup exceeds 1 is the expected outcome, not an error.
    """
    abs_c = s.abs_coeffs()
    higher = abs_c[1:]
    top = float(higher.max(initial=0.0))
    budget = 2.0 * (1.0 - abs_c[0])
    if budget <= 0.0:
        ratio = 0.0 if top == 0.0 else math.inf
        passes = top <= CARATHEODORY_SLACK
    else:
        ratio = top / budget
        passes = bool(np.all(higher <= budget + CARATHEODORY_SLACK))
    return CaratheodoryResult(passes, ratio, s.sampled_sup())


def h2_norm(s: UnivariateSeries) -> float:
    return float(np.sqrt(np.sum(s.abs_coeffs() ** 2)))


def minimize_on_interval(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8, coarse: int = 64
) -> tuple[float, float]:
    """Global-ish minimum of ``f`` on [lo, hi]: coarse scan, golden section, parabolic polish.

    Returns (argmin, min).
    """
    xs = np.linspace(lo, hi, coarse)
    fs = np.array([f(x) for x in xs])
    i = int(np.argmin(fs))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, coarse - 1)]
    best_x, best_f = float(xs[i]), float(fs[i])

    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx < best_f:
            best_x, best_f = x, fx

    # one parabolic step through the final bracket
    x0, x1, x2 = a, 0.5 * (a + b), b
    f0, f1, f2 = f(x0), f(x1), f(x2)
    denom = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0)
    if denom != 0.0:
        xp = x1 - 0.5 * ((x1 - x0) ** 2 * (f1 - f2) - (x1 - x2) ** 2 * (f1 - f0)) / denom
        if lo <= xp <= hi:
            fp = f(xp)
            if fp < best_f:
                best_x, best_f = xp, fp
    for x, fx in ((x0, f0), (x1, f1), (x2, f2)):
        if fx < best_f:
            best_x, best_f = x, fx
    return float(best_x), float(best_f)


WINTNER_EPS = 1e-9


def wintner_objective(s: UnivariateSeries, tol: float = 1e-8) -> float:
    """inf over 0 < r < 1 of Mf(r)/r."""
    if s.is_zero():
        raise ValueError("Wintner's objective is undefined for the zero series")
    abs_c = s.abs_coeffs()
    _, val = minimize_on_interval(
        lambda r: _abs_power_sum(abs_c, r) / r, WINTNER_EPS, 1.0 - WINTNER_EPS, tol
    )
    return val


def wintner_argmin(s: UnivariateSeries, tol: float = 1e-8) -> float:
    abs_c = s.abs_coeffs()
    r, _ = minimize_on_interval(
        lambda r: _abs_power_sum(abs_c, r) / r, WINTNER_EPS, 1.0 - WINTNER_EPS, tol
    )
    return r


def wintner_h2_bound(c0_modulus: float) -> float:
    """min over r of |c_0|/r + sqrt(1 - |c_0|^2)/sqrt(1 - r^2); never above 2."""
    c = float(c0_modulus)
    if not 0.0 <= c <= 1.0:
        raise ValueError("|c_0| must lie in [0, 1]")
    b = math.sqrt(max(0.0, 1.0 - c * c))
    _, val = minimize_on_interval(
        lambda r: c / r + b / math.sqrt(1.0 - r * r), WINTNER_EPS, 1.0 - WINTNER_EPS
    )
    return val


@dataclass(frozen=True)
class WienerResult:
    averaged: SparsePolynomial
    coefficient_bound: float


def wiener_average(poly: SparsePolynomial, alpha: MultiIndex | Sequence[int], bound_b: float) -> WienerResult:
    """Root-of-unity average isolating the residues of ``alpha``.

    Averaging z_j over the alpha_j-th roots of unity keeps exactly the terms
    whose j-th exponent is a multiple of alpha_j. ``bound_b`` bounds the
    derivative |f^(alpha)(0)| over the class; the returned coefficient bound
    is (1 - |c_0|^2) b / alpha! on |c_alpha|.
    """
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    if alpha.is_zero():
        raise ValueError("Wiener averaging needs a non-zero multi-index")
    if len(alpha) != poly.dim:
        raise ValueError("multi-index length does not match polynomial dimension")
    if bound_b <= 0:
        raise ValueError("bound_b must be positive")
    if poly.degree() < alpha.degree():
        raise ValueError("polynomial must be truncated at degree >= |alpha|")
    support = [j for j, e in enumerate(alpha) if e]
    averaged = poly.filter(lambda beta: all(beta[j] % alpha[j] == 0 for j in support))
    c0 = abs(poly.constant_term())
    return WienerResult(averaged, (1.0 - c0 * c0) * bound_b / alpha.factorial())


def cauchy_derivative_bound(alpha: MultiIndex, ball: BallSpec) -> float:
    """alpha! / sup|z^alpha|: Cauchy's bound on |f^(alpha)(0)| for |f| <= 1 on the ball."""
    return alpha.factorial() / monomial_sup(alpha, ball)
