from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pingpong.errors import ZeroVector
from pingpong.exact import LaurentPoly, Matrix
from pingpong.projective import (CovectorQ, ProjPointC, ProjPointL, apply_matrix, in_ball,
                                 normalize_coords, off_hyperplane, reduce_pi)

coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5)
polys = st.dictionaries(st.integers(-3, 3), coeffs, max_size=3).map(LaurentPoly)
vectors = st.lists(polys, min_size=3, max_size=3).filter(lambda v: any(not c.is_zero() for c in v))


def test_normalization_min_valuation_zero():
    p = ProjPointL([LaurentPoly({-2: 1}), LaurentPoly({1: 3})])
    assert min(c.valuation() for c in p.coords) == 0
    assert reduce_pi(p).coords == (1, 0)


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        normalize_coords([LaurentPoly(), LaurentPoly()])


@given(vectors)
def test_normalize_idempotent(v):
    once = normalize_coords(v)
    assert normalize_coords(once) == once


@given(vectors, st.integers(-4, 4), st.fractions(min_value=1, max_value=5, max_denominator=3))
def test_scaling_invariance(v, k, c):
    p = ProjPointL(v)
    q = ProjPointL([x.shift(k).scale(c) for x in v])
    assert p.same_point(q)
    assert reduce_pi(p) == reduce_pi(q)


def test_residue_and_ball():
    p = ProjPointL([LaurentPoly({0: 2, 1: 5}), LaurentPoly({0: 4})])
    assert reduce_pi(p) == ProjPointC((Fraction(1), Fraction(2)))
    assert in_ball(p, [1, 2])
    assert in_ball(p, [-3, -6])
    assert not in_ball(p, [1, 0])


def test_off_hyperplane_routes_agree():
    p = ProjPointL([LaurentPoly({0: 1}), LaurentPoly({0: 1, 2: 1})])
    assert not off_hyperplane(p, CovectorQ((1, -1)))
    assert off_hyperplane(p, CovectorQ((1, 1)))


def _ball_cases(n, count, rng, unit_index):
    for _ in range(count):
        coords = []
        for k in range(n):
            terms = {e: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for e in range(0, 3)}
            coords.append(LaurentPoly(terms))
        if coords[unit_index].eval_at_zero() == 0:
            coords[unit_index] = coords[unit_index] + LaurentPoly.constant(1)
        yield ProjPointL(coords)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_tau_contracts_into_balls(n):
    exps = list(range(n))
    exps = [2 * e - (n - 1) for e in exps]
    tau = Matrix.diagonal([LaurentPoly.monomial(k) for k in exps])
    tau_inv = Matrix.diagonal([LaurentPoly.monomial(-k) for k in exps])
    e0 = [1] + [0] * (n - 1)
    en = [0] * (n - 1) + [1]
    rng = random.Random(n)
    for p in _ball_cases(n, 40, rng, 0):
        assert in_ball(apply_matrix(tau, p), e0)
    for p in _ball_cases(n, 40, rng, n - 1):
        assert in_ball(apply_matrix(tau_inv, p), en)


def test_json_round_trip():
    p = ProjPointL([LaurentPoly({0: 1, 3: Fraction(1, 2)}), LaurentPoly({1: -2})])
    assert ProjPointL.from_json(p.to_json()) == p
    c = ProjPointC((2, 4, 6))
    assert c.coords == (1, 2, 3)
    assert ProjPointC.from_json(c.to_json()) == c
