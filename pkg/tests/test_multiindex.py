import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrlab.multiindex import (
    BallSpec,
    MultiIndex,
    SparsePolynomial,
    enumerate_multiindices,
    evaluate,
    evaluate_batch,
    log_multinomial,
    majorant,
    monomial_sup,
    multinomial,
)
from oracles import monomial_sup_grid

INF = math.inf


def test_enumerate_small_cases():
    assert enumerate_multiindices(2, 0) == [MultiIndex((0, 0))]
    assert enumerate_multiindices(2, 1) == [MultiIndex((1, 0)), MultiIndex((0, 1))]
    assert len(enumerate_multiindices(2, 3)) == 4


@pytest.mark.parametrize("n,k", [(1, 5), (2, 4), (3, 3), (4, 6), (5, 2)])
def test_enumerate_matches_exhaustive_generation(n, k):
    brute = sorted(
        (c for c in itertools.product(range(k + 1), repeat=n) if sum(c) == k), reverse=True
    )
    got = [a.exponents for a in enumerate_multiindices(n, k)]
    assert got == brute
    assert len(got) == math.comb(n + k - 1, k)


def test_graded_lex_order_across_degrees():
    idx = [a for k in range(4) for a in enumerate_multiindices(3, k)]
    assert idx == sorted(idx)
    assert MultiIndex((1, 0)) < MultiIndex((0, 1)) < MultiIndex((2, 0))


def test_sorted_tuple_bijection():
    for a in enumerate_multiindices(3, 4):
        J = a.to_sorted_tuple()
        assert list(J) == sorted(J)
        assert MultiIndex.from_sorted_tuple(J, 3) == a


@pytest.mark.parametrize("d,alpha,expected", [(3, (3, 0), 1), (3, (1, 1, 1), 6), (3, (2, 1), 3)])
def test_multinomial_examples(d, alpha, expected):
    assert multinomial(d, alpha) == expected


def test_multinomial_exact_and_degree_mismatch():
    assert multinomial(30, (10, 10, 10)) == math.factorial(30) // math.factorial(10) ** 3
    with pytest.raises(ValueError):
        multinomial(3, (1, 1))
    assert log_multinomial(30, (10, 10, 10)) == pytest.approx(math.log(multinomial(30, (10, 10, 10))), rel=1e-12)


@pytest.mark.parametrize("n,d", [(2, 5), (3, 4), (4, 3)])
def test_multinomials_sum_to_n_power(n, d):
    assert sum(multinomial(d, a) for a in enumerate_multiindices(n, d)) == n**d


def test_monomial_sup_examples():
    for p in (1.0, 2.0, 3.5, INF):
        assert monomial_sup((1, 0), BallSpec(2, p)) == pytest.approx(1.0)
    assert monomial_sup((1, 1), BallSpec(2, 2.0)) == pytest.approx(0.5)
    assert monomial_sup((1, 1), BallSpec(2, INF)) == 1.0
    assert monomial_sup((0, 0), BallSpec(2, 1.0)) == 1.0
    with pytest.raises(ValueError):
        monomial_sup((1, 1), BallSpec(3, 2.0))


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 3.0, INF])
@pytest.mark.parametrize("alpha", [(2, 1), (1, 1, 1), (0, 3), (2, 0, 2), (1, 3), (1, 2, 1)])
def test_monomial_sup_against_grid(alpha, p):
    assert monomial_sup(alpha, BallSpec(len(alpha), p)) == pytest.approx(monomial_sup_grid(alpha, p), abs=1e-3)


@given(st.lists(st.integers(0, 6), min_size=1, max_size=4), st.floats(1.0, 8.0))
def test_monomial_sup_attained_at_explicit_point(alpha, p):
    # the maximizer has |z_j|^p = alpha_j / |alpha|
    k = sum(alpha)
    ball = BallSpec(len(alpha), p)
    if k == 0:
        assert monomial_sup(alpha, ball) == 1.0
        return
    z = np.array([(a / k) ** (1.0 / p) for a in alpha])
    assert ball.norm(z) == pytest.approx(1.0)
    assert np.prod(z ** np.array(alpha)) == pytest.approx(monomial_sup(alpha, ball), rel=1e-9)


@given(st.lists(st.integers(0, 5), min_size=2, max_size=3), st.floats(1.0, 6.0), st.floats(1.0, 6.0))
def test_monomial_sup_monotone_in_p(alpha, p, q):
    lo, hi = sorted((p, q))
    n = len(alpha)
    assert monomial_sup(alpha, BallSpec(n, lo)) <= monomial_sup(alpha, BallSpec(n, hi)) + 1e-12


def test_ball_spec_validation_and_parse():
    assert BallSpec.parse(3, "inf").is_polydisc
    assert BallSpec.parse(3, "2").p == 2.0
    assert BallSpec(2, 1.5).m == 1.5 and BallSpec(2, 1.5).M == 2.0
    for bad in [(0, 2.0), (2, 0.5), (2, float("nan"))]:
        with pytest.raises(ValueError):
            BallSpec(*bad)


def test_evaluate_examples():
    assert evaluate(SparsePolynomial(3), [1, 2, 3]) == 0
    assert evaluate(SparsePolynomial.monomial((1, 1)), [2, 3]) == 6
    P = SparsePolynomial(2, [(a, multinomial(2, a)) for a in enumerate_multiindices(2, 2)])
    assert evaluate(P, [1, 1]) == 4
    with pytest.raises(ValueError):
        evaluate(P, [1, 1, 1])


def _random_poly(rng, dim, deg):
    terms = {a: complex(*rng.normal(size=2)) for k in range(deg + 1) for a in enumerate_multiindices(dim, k)}
    return SparsePolynomial(dim, terms)


def test_evaluate_batch_matches_scalar():
    rng = np.random.default_rng(1)
    P = _random_poly(rng, 3, 4)
    Z = rng.normal(size=(20, 3)) + 1j * rng.normal(size=(20, 3))
    got = evaluate_batch(P, Z)
    for z, v in zip(Z, got):
        assert v == pytest.approx(evaluate(P, z), rel=1e-12)


def test_arithmetic():
    rng = np.random.default_rng(2)
    P, Q = _random_poly(rng, 2, 3), _random_poly(rng, 2, 2)
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert (P + Q)(z) == pytest.approx(P(z) + Q(z))
    assert (P - Q)(z) == pytest.approx(P(z) - Q(z))
    assert (P * Q)(z) == pytest.approx(P(z) * Q(z))
    assert P.scale(2j)(z) == pytest.approx(2j * P(z))
    assert (P - P).is_zero()
    assert (P * Q).degree() == 5


def test_zero_coefficients_dropped_and_order_fixed():
    P = SparsePolynomial(2, [((0, 1), 1.0), ((1, 0), 2.0), ((0, 0), 0.0)])
    assert len(P) == 2
    assert [a for a, _ in P.items()] == [MultiIndex((1, 0)), MultiIndex((0, 1))]


def test_majorant_examples_and_dominance():
    pos = SparsePolynomial(2, [((1, 0), 0.5), ((1, 1), 2.0)])
    assert majorant(pos) == pos
    assert majorant(SparsePolynomial(1, [((0,), -0.3), ((1,), 0.9)])).coefficient((0,)) == 0.3
    rng = np.random.default_rng(3)
    for _ in range(20):
        P = _random_poly(rng, 2, 3)
        M = majorant(P)
        assert majorant(M) == M
        r = rng.uniform(0, 1, size=2)
        z = r * np.exp(2j * np.pi * rng.uniform(size=2))
        assert abs(P(z)) <= M(r).real + 1e-12


def test_json_round_trip_is_exact():
    rng = np.random.default_rng(4)
    P = _random_poly(rng, 3, 3)
    Q = SparsePolynomial.from_json(P.to_json())
    assert Q == P
    data = json.loads(P.to_json())
    assert data["dim"] == 3 and len(data["terms"]) == len(P)


def test_embed_and_restrict():
    P = SparsePolynomial(2, [((1, 2), 1.5), ((0, 1), -1.0)])
    E = P.embed(4, [1, 3])
    assert E.active_variables() == (1, 3)
    assert E.restrict([1, 3]) == P
    assert E([9, 2, 9, 3]) == pytest.approx(P([2, 3]))
    with pytest.raises(ValueError):
        E.restrict([1])
