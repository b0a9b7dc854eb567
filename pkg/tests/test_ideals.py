from fractions import Fraction

import pytest

from qtorus.cmspace import CMPoint, GroupWord, cm_make
from qtorus.exact import RatFunc
from qtorus.ideals import (FractionalIdeal, SearchBounds, cayley_hamilton_echo, equivariance_check,
                           expand_at_infinity, ideal_from_json, ideal_isomorphic, ideal_to_json, is_cyclic,
                           kappa_coefficient, kappa_series, lemma_conditions, member, normalize_ideal,
                           omega_x, omega_y, stabilizer_in_pic, swap_point, unit_stabilizer)
from qtorus.skewlocal import X_LEFT, Y_LEFT, SkewLaurent, SkewSeries, embed, skew_mul
from qtorus.torus import TorusElement

from samples import sample_point_n1, sample_points

t = RatFunc.var()
SMALL = SearchBounds(4, 4, 2, 1)


def test_omega_x_sample():
    I = omega_x(sample_point_n1())
    G1, G2 = I.gens
    assert G1 == SkewLaurent(X_LEFT, 2, {0: 3 - t})
    assert G2 == SkewLaurent(X_LEFT, 2, {0: 5 + 15 * (3 - 2 * t).inverse(), 1: -1})


def test_omega_y_sample():
    I = omega_y(sample_point_n1())
    G1, G2 = I.gens
    assert G1 == SkewLaurent(Y_LEFT, 2, {0: 5 - t})
    assert G2 == SkewLaurent(Y_LEFT, 2, {0: 3 - 15 * (10 - t).inverse(), 1: -1})


def test_omega_empty_point():
    assert omega_x(CMPoint.empty(2)) == FractionalIdeal.unit(X_LEFT, 2)
    assert omega_y(CMPoint.empty(2)) == FractionalIdeal.unit(Y_LEFT, 2)


@pytest.mark.parametrize("p", sample_points(11, 6), ids=lambda p: f"n{p.n}q{p.q}")
def test_swap_symmetry_and_conditions(p):
    assert omega_x(swap_point(p)).swap() == omega_y(p)
    cond = lemma_conditions(omega_x(p), samples=30, seed=1)
    assert cond == {"pure": True, "laurent_leads": True, "constant_lead": True}


def test_kappa_sample():
    p = sample_point_n1()
    kd = kappa_series(p, 10)
    assert kd.coefficients[0][0] == -15 and kd.coefficients[1][0] == -150
    for s in range(4):
        for r in range(4):
            assert kd.coefficients[s][r] == -15 * 10 ** s * 3 ** r == kappa_coefficient(p, s, r)
    assert cayley_hamilton_echo(kd) == []


def test_kappa_empty():
    kd = kappa_series(CMPoint.empty(3), 4)
    assert all(v == 0 for row in kd.coefficients for v in row)
    assert kd.kappa.equals_to_depth(SkewSeries.one(Y_LEFT, 3, 5))


def test_kappa_product_n2():
    for p in sample_points(2, 4, sizes=(2,)):
        kd = kappa_series(p, 10)
        assert kd.product().equals_to_depth(SkewSeries.one(Y_LEFT, p.q, 11))


def test_expand_at_infinity():
    # 1/(10 - y) = -sum 10^s y^(-s-1)
    e = expand_at_infinity((10 - t).inverse(), -4)
    assert e == {-1: -1, -2: -10, -3: -100, -4: -1000}
    assert expand_at_infinity(t * t + 1, -3) == {2: 1, 0: 1}


def test_normalize_examples():
    q = Fraction(2)
    one = FractionalIdeal.unit(X_LEFT, q)
    assert normalize_ideal(one) == one
    I = omega_x(sample_point_n1())
    assert normalize_ideal(I) == I
    J = FractionalIdeal(X_LEFT, q, (SkewLaurent(X_LEFT, q, {0: 3 - t}), SkewLaurent(X_LEFT, q, {1: 3 - t})))
    N = normalize_ideal(J)
    assert all(g.coeffs[g.top].is_constant() for g in N.gens)
    assert N.gens[0] * (-1) == SkewLaurent.one(X_LEFT, q)


def test_isomorphism_examples():
    q = Fraction(2)
    I = omega_x(sample_point_n1())
    assert ideal_isomorphic(I, I) == (1, 0, 0)
    x = embed(TorusElement.x(q))
    assert ideal_isomorphic(I, I.left_multiply(x)) == (1, 1, 0)
    w = ideal_isomorphic(I.left_multiply(x), I)
    assert w == (1, -1, 0)


def test_cyclic_and_stabilizer():
    q = Fraction(2)
    one = FractionalIdeal.unit(X_LEFT, q)
    assert is_cyclic(one) == (1, 0, 0)
    assert is_cyclic(omega_x(CMPoint.empty(q))) == (1, 0, 0)
    full = {(m, k) for m in range(-2, 3) for k in range(-2, 3)}
    assert unit_stabilizer(one, SMALL) == full
    x = embed(TorusElement.x(q))
    assert unit_stabilizer(one.left_multiply(x), SMALL) == full
    I = omega_x(sample_point_n1())
    assert is_cyclic(I) is None
    assert unit_stabilizer(I, SMALL) == {(0, 0)}


def test_membership_in_omega():
    I = omega_x(sample_point_n1())
    G1, G2 = I.gens
    q = I.q
    f = skew_mul(G1, embed(TorusElement.y(q) + 2)) + skew_mul(G2, embed(TorusElement.x(q)))
    assert member(f, I)
    assert not member(SkewLaurent.one(X_LEFT, q), I, SMALL)


def test_equivariance_examples():
    p = sample_point_n1()
    rep = equivariance_check(p, GroupWord())
    assert rep["status"] == "ok" and rep["unit"] == {"m": 0, "k": 0}
    rep = equivariance_check(p, GroupWord(("g1",)))
    assert rep["status"] == "ok" and rep["orientation"] == "forward"
    rep = equivariance_check(p, GroupWord.scale(2, 4))
    assert rep["status"] == "ok"
    rep = equivariance_check(p, GroupWord(("g2", "g1inv"), (3, 1)))
    assert rep["status"] == "ok" and len(rep["steps"]) == 3
    assert set(rep) == {"orientation", "unit", "bounds_used", "status", "steps"}


def test_equivariance_n2():
    p = cm_make(2, 2, [1, 3], [1, 2], [3, -1])
    for w in (GroupWord(("g1",)), GroupWord(("g2inv",))):
        assert equivariance_check(p, w)["status"] == "ok"


def test_stabilizer_in_pic():
    p = sample_point_n1()
    assert stabilizer_in_pic(p, GroupWord())
    assert stabilizer_in_pic(p, GroupWord.scale(2, 1))
    assert not stabilizer_in_pic(p, GroupWord(("g1",)))


def test_ideal_json_round_trip():
    I = omega_x(sample_points(4, 2)[1])
    assert ideal_from_json(ideal_to_json(I)) == I
