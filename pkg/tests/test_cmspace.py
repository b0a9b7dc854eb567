import random
from fractions import Fraction

import pytest

from qtorus.cmspace import (LETTERS, CMPoint, GroupWord, RankConditionFailed, SpectralCollision,
                            act_on_scaling, cm_act, cm_equivalent, cm_make, cm_validate, conjugate_point,
                            gauge_normalize, point_from_json, point_to_json, points_equal_up_to_gauge,
                            recover_ij, scale_point, word_from_json, word_matrix, word_to_json)
from qtorus.exact import Matrix, SchemaError

from samples import random_invertible, sample_point_n1, sample_points

POINTS = sample_points(7, 12)


def test_sample_point_valid():
    assert cm_validate(sample_point_n1()) == (True, "ok")
    assert cm_validate(CMPoint.empty(2)) == (True, "ok")


def test_cm_make_examples():
    p = cm_make(2, 2, [1, 3], [1, 2], [3, -1])
    assert cm_validate(p)[0]
    assert p.X == Matrix.diag([1, 3])
    with pytest.raises(SpectralCollision):
        cm_make(2, 2, [1, 2], [1, 1], [1, 1])
    with pytest.raises(RankConditionFailed):
        cm_make(1, 2, [1], [0], [1])


@pytest.mark.parametrize("mutate,needle", [
    (lambda p: CMPoint(p.q, 1, Matrix([[0]], 1), p.Y, p.i, p.j), "X not invertible"),
    (lambda p: CMPoint(p.q, 1, p.X, p.Y, p.i, p.j * 2), "qXY - YX + ij"),
    (lambda p: CMPoint(p.q, 1, p.X, p.Y, p.i * 2, p.j * Fraction(1, 2)), "gauge"),
])
def test_validate_diagnostics(mutate, needle):
    ok, msg = cm_validate(mutate(sample_point_n1()))
    assert not ok and needle in msg


def test_recover_ij_and_gauge():
    p = POINTS[4]
    i, j = recover_ij(p.n, p.q, p.X, p.Y)
    assert i * j == p.i * p.j
    assert gauge_normalize(CMPoint(p.q, p.n, p.X, p.Y, p.i * 3, p.j * Fraction(1, 3))) == p


def test_letter_action_on_sample():
    p = sample_point_n1()
    out = cm_act(GroupWord(("g1",)), p)
    assert out.X == Matrix([[Fraction(3, 5)]], 1) and out.Y == p.Y


@pytest.mark.parametrize("p", POINTS, ids=lambda p: f"n{p.n}q{p.q}")
def test_actions_preserve_validity_and_relations(p):
    for l in LETTERS:
        assert cm_validate(cm_act(GroupWord((l,)), p))[0]
        inv = {"g1": "g1inv", "g1inv": "g1", "g2": "g2inv", "g2inv": "g2"}[l]
        assert cm_act(GroupWord((l, inv)), p) == p
    assert cm_act(GroupWord(("g1", "g2", "g1")), p) == cm_act(GroupWord(("g2", "g1", "g2")), p)
    assert points_equal_up_to_gauge(cm_act(GroupWord(("g1", "g2") * 6), p), p) is not None


@pytest.mark.parametrize("p", POINTS[:6], ids=lambda p: f"n{p.n}q{p.q}")
def test_semidirect_relation(p):
    # g followed by the scaling s equals g(s) followed by g
    for l in LETTERS:
        s = (Fraction(2), Fraction(-3, 5))
        lhs = cm_act(GroupWord.scale(*s), cm_act(GroupWord((l,)), p))
        rhs = cm_act(GroupWord((l,), act_on_scaling(word_matrix((l,)), *s)), p)
        assert lhs == rhs


def test_word_matrix():
    assert word_matrix(("g1", "g2")) == ((0, 1), (-1, 1))
    assert word_matrix(("g1", "g2") * 3) == ((-1, 0), (0, -1))


def test_equivalence_positive_and_negative():
    rng = random.Random(3)
    for p in POINTS:
        k, m = rng.randint(-2, 2), rng.randint(-2, 2)
        p2 = conjugate_point(scale_point(p, k, m), random_invertible(rng, p.n))
        g, kk, mm = cm_equivalent(p, p2)
        assert (kk, mm) == (k, m)
        assert g * p2.X == p.X * p.q ** k * g and g * p2.Y == p.Y * p.q ** m * g
    p = sample_point_n1()
    assert cm_equivalent(p, cm_act(GroupWord(("g1",)), p)) is None
    assert cm_equivalent(CMPoint.empty(2), CMPoint.empty(2)) is not None


def test_json_round_trips():
    for p in POINTS + [CMPoint.empty(3)]:
        assert point_from_json(point_to_json(p)) == p
    w = GroupWord(("g1", "g2inv"), (Fraction(2, 3), 5))
    assert word_from_json(word_to_json(w)) == w
    bad = point_to_json(sample_point_n1())
    bad["q"] = "1//2"
    with pytest.raises(SchemaError):
        point_from_json(bad)
