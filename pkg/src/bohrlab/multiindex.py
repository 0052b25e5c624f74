"""Multi-indices, l_p balls and sparse multivariate polynomials.

Everything here is an immutable value. Multi-indices are ordered
graded-lexicographically: first by total degree, then lexicographically with
the first variable dominant, so ``(1, 0)`` precedes ``(0, 1)``.
"""

from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np


@functools.total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """Exponent vector of a monomial z^alpha."""

    exponents: tuple[int, ...]

    def __post_init__(self):
        exps = tuple(int(e) for e in self.exponents)
        if any(e < 0 for e in exps):
            raise ValueError(f"negative exponent in {exps}")
        object.__setattr__(self, "exponents", exps)

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self) -> Iterator[int]:
        return iter(self.exponents)

    def __getitem__(self, j: int) -> int:
        return self.exponents[j]

    def __lt__(self, other: "MultiIndex") -> bool:
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        return f"MultiIndex{self.exponents}"

    def sort_key(self) -> tuple:
        return (self.degree(), tuple(-e for e in self.exponents))

    def degree(self) -> int:
        return sum(self.exponents)

    def factorial(self) -> int:
        """alpha! = alpha_1! ... alpha_n!"""
        return math.prod(math.factorial(e) for e in self.exponents)

    def log_self_power(self) -> float:
        """log(alpha^alpha) with 0^0 = 1."""
        return sum(e * math.log(e) for e in self.exponents if e > 0)

    def is_zero(self) -> bool:
        return not any(self.exponents)

    def to_sorted_tuple(self) -> tuple[int, ...]:
        """The non-decreasing index tuple with alpha_k copies of k (0-based)."""
        out: list[int] = []
        for k, e in enumerate(self.exponents):
            out.extend([k] * e)
        return tuple(out)

    @classmethod
    def from_sorted_tuple(cls, indices: Sequence[int], n: int) -> "MultiIndex":
        exps = [0] * n
        for k in indices:
            exps[k] += 1
        return cls(tuple(exps))

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)


def _compositions(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(n - 1, k - first):
            yield (first,) + rest


def enumerate_multiindices(n: int, k: int) -> list[MultiIndex]:
    """All multi-indices of length ``n`` and degree ``k`` in graded-lex order."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    return [MultiIndex(c) for c in _compositions(n, k)]


def multinomial(d: int, alpha: MultiIndex | Sequence[int]) -> int:
    """Exact multinomial coefficient d!/alpha!."""
    alpha = _as_index(alpha)
    if alpha.degree() != d:
        raise ValueError(f"|alpha| = {alpha.degree()} does not match d = {d}")
    return math.factorial(d) // alpha.factorial()


def log_factorial(d: int) -> float:
    return math.lgamma(d + 1)


def log_multinomial(d: int, alpha: MultiIndex | Sequence[int]) -> float:
    alpha = _as_index(alpha)
    if alpha.degree() != d:
        raise ValueError(f"|alpha| = {alpha.degree()} does not match d = {d}")
    return log_factorial(d) - sum(log_factorial(e) for e in alpha)


@dataclass(frozen=True)
class BallSpec:
    """The unit ball of complex l_p^n; ``p = math.inf`` is the polydisc."""

    n: int
    p: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.n}")
        p = float(self.p)
        if math.isnan(p) or p < 1:
            raise ValueError(f"exponent p must lie in [1, inf], got {self.p}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", p)

    @classmethod
    def parse(cls, n: int, p: str | float) -> "BallSpec":
        if isinstance(p, str):
            p = math.inf if p.strip().lower() in ("inf", "infinity", "oo") else float(p)
        return cls(n, p)

    @property
    def is_polydisc(self) -> bool:
        return math.isinf(self.p)

    @property
    def inv_p(self) -> float:
        return 0.0 if self.is_polydisc else 1.0 / self.p

    @property
    def m(self) -> float:
        """min(p, 2)"""
        return min(self.p, 2.0)

    @property
    def M(self) -> float:
        """max(p, 2), possibly infinite."""
        return max(self.p, 2.0)

    def p_label(self) -> str:
        return "inf" if self.is_polydisc else f"{self.p:g}"

    def norm(self, z) -> float:
        a = np.abs(np.asarray(z, dtype=complex))
        if self.is_polydisc:
            return float(a.max(initial=0.0))
        return float(np.sum(a**self.p) ** (1.0 / self.p))


def monomial_sup(alpha: MultiIndex | Sequence[int], ball: BallSpec) -> float:
    """sup of |z^alpha| over the closed ball: (alpha^alpha / |alpha|^|alpha|)^(1/p)."""
    alpha = _as_index(alpha)
    if len(alpha) != ball.n:
        raise ValueError(f"multi-index length {len(alpha)} != ball dimension {ball.n}")
    k = alpha.degree()
    if k == 0 or ball.is_polydisc:
        return 1.0
    log_val = (alpha.log_self_power() - k * math.log(k)) / ball.p
    return math.exp(log_val)


def _as_index(alpha) -> MultiIndex:
    return alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))


class SparsePolynomial:
    """Finite sum of c_alpha z^alpha in ``dim`` complex variables.

    Zero coefficients are dropped on construction and terms are kept in
    graded-lex order, which fixes both evaluation order and serialization.
    """

    __slots__ = ("dim", "_terms", "_matrix")

    def __init__(self, dim: int, terms: Mapping | Iterable = ()):
        if dim < 1:
            raise ValueError("polynomial dimension must be >= 1")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[MultiIndex, complex] = {}
        for alpha, c in items:
            alpha = _as_index(alpha)
            if len(alpha) != dim:
                raise ValueError(f"term {alpha} has length != dim {dim}")
            acc[alpha] = acc.get(alpha, 0j) + complex(c)
        self.dim = dim
        self._terms = tuple(sorted((a, c) for a, c in acc.items() if c != 0))
        self._matrix = None

    @classmethod
    def monomial(cls, alpha, coeff: complex = 1.0) -> "SparsePolynomial":
        alpha = _as_index(alpha)
        return cls(len(alpha), {alpha: coeff})

    @classmethod
    def constant(cls, dim: int, c: complex) -> "SparsePolynomial":
        return cls(dim, {MultiIndex.zero(dim): c})

    @property
    def terms(self) -> dict[MultiIndex, complex]:
        return dict(self._terms)

    def items(self):
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, self._terms))

    def __repr__(self) -> str:
        return f"SparsePolynomial(dim={self.dim}, terms={len(self._terms)})"

    def coefficient(self, alpha) -> complex:
        return self.terms.get(_as_index(alpha), 0j)

    def degree(self) -> int:
        return max((a.degree() for a, _ in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({a.degree() for a, _ in self._terms}) <= 1

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> complex:
        return self.coefficient(MultiIndex.zero(self.dim))

    def active_variables(self) -> tuple[int, ...]:
        """Variables that occur with a positive exponent in some term."""
        return tuple(j for j in range(self.dim) if any(a[j] for a, _ in self._terms))

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        self._check_dim(other)
        return SparsePolynomial(self.dim, list(self._terms) + list(other._terms))

    def __neg__(self) -> "SparsePolynomial":
        return self.scale(-1)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SparsePolynomial):
            self._check_dim(other)
            prod = []
            for a, ca in self._terms:
                for b, cb in other._terms:
                    prod.append((MultiIndex(tuple(x + y for x, y in zip(a, b))), ca * cb))
            return SparsePolynomial(self.dim, prod)
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, factor: complex) -> "SparsePolynomial":
        return SparsePolynomial(self.dim, [(a, c * factor) for a, c in self._terms])

    def map_coefficients(self, fn) -> "SparsePolynomial":
        return SparsePolynomial(self.dim, [(a, fn(a, c)) for a, c in self._terms])

    def filter(self, keep) -> "SparsePolynomial":
        return SparsePolynomial(self.dim, [(a, c) for a, c in self._terms if keep(a)])

    def embed(self, dim: int, variables: Sequence[int] | None = None) -> "SparsePolynomial":
        """Same polynomial viewed in ``dim`` variables, old variable j -> variables[j]."""
        variables = list(range(self.dim)) if variables is None else list(variables)
        out = []
        for a, c in self._terms:
            e = [0] * dim
            for j, v in enumerate(variables):
                e[v] = a[j]
            out.append((MultiIndex(tuple(e)), c))
        return SparsePolynomial(dim, out)

    def restrict(self, variables: Sequence[int]) -> "SparsePolynomial":
        """Drop every variable not listed; only valid if they do not occur."""
        variables = list(variables)
        dropped = set(range(self.dim)) - set(variables)
        out = []
        for a, c in self._terms:
            if any(a[j] for j in dropped):
                raise ValueError("cannot restrict away a variable that occurs")
            out.append((MultiIndex(tuple(a[j] for j in variables)), c))
        return SparsePolynomial(len(variables), out)

    def _check_dim(self, other: "SparsePolynomial"):
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __call__(self, z) -> complex:
        return evaluate(self, z)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponent matrix of shape (terms, dim), coefficient vector)."""
        if self._matrix is None:
            E = np.array([a.exponents for a, _ in self._terms], dtype=float).reshape(-1, self.dim)
            c = np.array([c for _, c in self._terms], dtype=complex)
            self._matrix = (E, c)
        return self._matrix

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {"alpha": list(a.exponents), "re": c.real, "im": c.imag} for a, c in self._terms
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "SparsePolynomial":
        dim = int(data["dim"])
        terms = [
            (MultiIndex(tuple(t["alpha"])), complex(t.get("re", 0.0), t.get("im", 0.0)))
            for t in data["terms"]
        ]
        return cls(dim, terms)

    @classmethod
    def from_json(cls, text: str) -> "SparsePolynomial":
        return cls.from_dict(json.loads(text))


def evaluate(poly: SparsePolynomial, z) -> complex:
    """Sum c_alpha z^alpha by iterated powers, in graded-lex term order."""
    z = [complex(v) for v in z]
    if len(z) != poly.dim:
        raise ValueError(f"point has length {len(z)}, polynomial dim is {poly.dim}")
    total = 0j
    for alpha, c in poly.items():
        term = c
        for zj, e in zip(z, alpha):
            if e:
                term *= zj**e
        total += term
    return total


def evaluate_batch(poly: SparsePolynomial, Z: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at the rows of ``Z`` (shape (B, dim))."""
    Z = np.asarray(Z, dtype=complex)
    if Z.ndim != 2 or Z.shape[1] != poly.dim:
        raise ValueError(f"expected points of shape (B, {poly.dim})")
    if poly.is_zero():
        return np.zeros(Z.shape[0], dtype=complex)
    E, c = poly.arrays()
    powers = np.ones((Z.shape[0], len(c)), dtype=complex)
    for j in range(poly.dim):
        col = E[:, j].astype(int)
        if col.any():
            table = Z[:, j : j + 1] ** np.arange(col.max() + 1)
            powers *= table[:, col]
    return powers @ c


def majorant(poly: SparsePolynomial) -> SparsePolynomial:
    """Replace every coefficient by its modulus."""
    return poly.map_coefficients(lambda a, c: abs(c))
