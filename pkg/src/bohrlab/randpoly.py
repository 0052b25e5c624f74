"""Random symmetric sign tensors, their multilinear forms and the
homogeneous +-multinomial polynomials they collapse to."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ascent import majorant_sup, maximize_modulus
from .multiindex import (
    BallSpec,
    MultiIndex,
    SparsePolynomial,
    enumerate_multiindices,
    majorant,
    monomial_sup,
    multinomial,
)
from .univariate import bisect_increasing

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class SignTensor:
    """One fair +-1 per non-decreasing index tuple, i.e. per degree-d multi-index."""

    n: int
    d: int
    seed: int
    indices: tuple[MultiIndex, ...] = field(repr=False)
    signs: tuple[int, ...] = field(repr=False)

    def sign(self, alpha: MultiIndex) -> int:
        return self.sign_map()[alpha]

    def sign_map(self) -> dict[MultiIndex, int]:
        return dict(zip(self.indices, self.signs))

    def sign_of_tuple(self, J: Sequence[int]) -> int:
        return self.sign(MultiIndex.from_sorted_tuple(sorted(J), self.n))

    def dense(self) -> np.ndarray:
        """Full symmetric array of shape (n,)*d with S[J] = sign(sorted J)."""
        S = np.empty((self.n,) * self.d)
        lookup = self.sign_map()
        for J in itertools.product(range(self.n), repeat=self.d):
            S[J] = lookup[MultiIndex.from_sorted_tuple(sorted(J), self.n)]
        return S


def draw_sign_tensor(n: int, d: int, seed: int) -> SignTensor:
    if n < 2 or d < 2:
        raise ValueError("need n >= 2 and d >= 2")
    idx = tuple(enumerate_multiindices(n, d))
    rng = np.random.default_rng(seed)
    signs = tuple(int(s) for s in 2 * rng.integers(0, 2, size=len(idx)) - 1)
    return SignTensor(n, d, int(seed), idx, signs)


def all_plus_tensor(n: int, d: int) -> SignTensor:
    idx = tuple(enumerate_multiindices(n, d))
    return SignTensor(n, d, -1, idx, (1,) * len(idx))


def multilinear_eval(T: SignTensor, Z: Sequence[Sequence[complex]]) -> complex:
    """F(Z_1, ..., Z_d) = sum over J in [n]^d of sign(sorted J) Z_{1 J_1} ... Z_{d J_d}."""
    Z = [np.asarray(z, dtype=complex) for z in Z]
    if len(Z) != T.d or any(z.shape != (T.n,) for z in Z):
        raise ValueError(f"need {T.d} vectors of length {T.n}")
    acc = T.dense().astype(complex)
    for z in reversed(Z):
        acc = acc @ z
    return complex(acc)


def to_homogeneous(T: SignTensor) -> SparsePolynomial:
    """sum over |alpha| = d of sign(alpha) * multinomial(d, alpha) * z^alpha."""
    return SparsePolynomial(
        T.n, [(a, s * multinomial(T.d, a)) for a, s in zip(T.indices, T.signs)]
    )


@dataclass(frozen=True)
class SupEstimate:
    lower_est: float
    upper_cert: float
    argmax_point: tuple[complex, ...]
    budget_used: int

    @property
    def gap(self) -> float:
        """(upper_cert - lower_est) / lower_est."""
        if self.lower_est == 0.0:
            return math.inf if self.upper_cert > 0 else 0.0
        return (self.upper_cert - self.lower_est) / self.lower_est


def certificate(poly: SparsePolynomial, ball: BallSpec) -> float:
    """sum |c_alpha| sup|z^alpha|, an upper bound for the sup of |poly|."""
    return float(sum(abs(c) * monomial_sup(a, ball) for a, c in poly.items()))


def sup_norm_estimate(
    poly: SparsePolynomial, ball: BallSpec, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> SupEstimate:
    """Lower estimate and crude certificate for sup |poly| on the closed ball.

    Only the variables that occur are optimized over: the ball projects onto
    the l_p ball of those coordinates, with the others set to zero.
    """
    if poly.dim != ball.n:
        raise ValueError("polynomial and ball dimensions differ")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if poly.is_zero():
        return SupEstimate(0.0, 0.0, (0j,) * ball.n, 0)
    cert = certificate(poly, ball)
    active = poly.active_variables()
    if not active:
        c0 = abs(poly.constant_term())
        return SupEstimate(c0, cert, (0j,) * ball.n, 1)
    E, c = poly.arrays()
    res = maximize_modulus(E[:, list(active)], c, BallSpec(len(active), ball.p), budget, seed)
    point = np.zeros(ball.n, dtype=complex)
    point[list(active)] = res.best_point
    return SupEstimate(res.best_value, cert, tuple(complex(v) for v in point), res.evaluations)


def implied_upper_bound(
    poly: SparsePolynomial, ball: BallSpec, kind: str, sup_value: float, tol: float = 1e-12
) -> float:
    """Radius at which the majorant of ``poly`` reaches ``sup_value``.

    kind="first": largest r <= 1 with sup over rB of sum |c_a z^a| <= sup_value.
    kind="second": largest r <= 1 with sum |c_a| sup|z^a| r^d <= sup_value.
    If ``sup_value`` bounds sup|poly| on the ball, these bound K and B from above.
    """
    if not poly.is_homogeneous() or poly.is_zero():
        raise ValueError("implied_upper_bound needs a non-zero homogeneous polynomial")
    if sup_value <= 0:
        raise ValueError("sup_value must be positive")
    d = poly.degree()
    if kind == "second":
        return min(1.0, (sup_value / certificate(poly, ball)) ** (1.0 / d))
    if kind != "first":
        raise ValueError(f"unknown kind {kind!r}")
    base = majorant_sup(majorant(poly), ball, 1.0)
    # homogeneity: the majorant sup on rB is r^d times the sup on B
    return bisect_increasing(lambda r: base * r**d, sup_value, 0.0, 1.0, tol)


def perm_sum(K: Sequence[int], Z: Sequence[np.ndarray]) -> complex:
    """sum over the distinct permutations J of K of Z_{1 J_1} ... Z_{d J_d}."""
    total = 0j
    for J in set(itertools.permutations(K)):
        term = 1 + 0j
        for k, j in enumerate(J):
            term *= Z[k][j]
        total += term
    return total
