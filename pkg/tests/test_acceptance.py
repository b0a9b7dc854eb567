"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or ``python3 tests/test_acceptance.py`` to print them directly.
All comparisons are exact; series checks are exact to the stated depth.
"""
from __future__ import annotations

import functools
import random
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from acceptance_log import RESULTS  # noqa: E402
from samples import QS, random_element, random_invertible, random_point, sample_points  # noqa: E402

from qtorus import ideals as ideals_mod  # noqa: E402
from qtorus import picard as picard_mod  # noqa: E402
from qtorus.cmspace import (LETTERS, CMPoint, GroupWord, cm_act, cm_equivalent, cm_validate,  # noqa: E402
                            conjugate_point, points_equal_up_to_gauge, scale_point)
from qtorus.exact import mat_det  # noqa: E402
from qtorus.ideals import (cayley_hamilton_echo, equivariance_check, ideal_isomorphic, is_cyclic,  # noqa: E402
                           kappa_coefficient, kappa_series, omega_x, random_right_combination, unit_stabilizer)
from qtorus.picard import (PicElement, is_inner, omega_of_automorphism, pic_inverse, pic_mul,  # noqa: E402
                           pic_to_automorphism)
from qtorus.skewlocal import SkewSeries, Y_LEFT  # noqa: E402
from qtorus.torus import TorusElement, ad_unit, torus_mul, transport_to_inverse_q  # noqa: E402

SEED = 20240601


def criterion(num: int, label: str):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*a, **k):
            try:
                fn(*a, **k)
            except BaseException:
                RESULTS[num] = (False, label)
                print(f"FAIL  criterion {num:2d}: {label}")
                raise
            RESULTS[num] = (True, label)
            print(f"PASS  criterion {num:2d}: {label}")
        return inner
    return wrap


@functools.lru_cache(maxsize=None)
def _points50():
    return tuple(sample_points(SEED, 50))


@functools.lru_cache(maxsize=None)
def _kappas():
    return tuple(kappa_series(p, 10) for p in _points50())


def _n1_points(count: int, seed: int):
    rng = random.Random(seed)
    return [random_point(rng, 1, QS[k % len(QS)]) for k in range(count)]


@criterion(1, "xy = q*yx and associativity on 500 seeded random triples")
def test_criterion_01_relation_and_associativity():
    rng = random.Random(SEED + 1)
    for t in range(500):
        q = QS[t % 3]
        x, y = TorusElement.x(q), TorusElement.y(q)
        assert torus_mul(x, y) == torus_mul(y, x) * q
        a, b, c = (random_element(rng, q) for _ in range(3))
        assert torus_mul(torus_mul(a, b), c) == torus_mul(a, torus_mul(b, c))


@criterion(2, "cm_act output passes cm_validate for 50 points and every generator and scaling")
def test_criterion_02_cm_equation_conservation():
    words = [GroupWord((l,)) for l in LETTERS]
    words += [GroupWord.scale(2, 1), GroupWord.scale(1, Fraction(1, 3)), GroupWord.scale(Fraction(5, 7), -2)]
    pts = _points50()
    assert {p.n for p in pts} == {1, 2, 3}
    for p in pts:
        for w in words:
            out = cm_act(w, p)
            ok, msg = cm_validate(out)
            assert ok, msg
            assert out.defect().is_zero()


@criterion(3, "braid relation exactly and (g1 g2)^6 = 1 up to gauge on all samples")
def test_criterion_03_group_relations():
    strict = 0
    points = _points50()
    for p in points:
        assert cm_act(GroupWord(("g1", "g2", "g1")), p) == cm_act(GroupWord(("g2", "g1", "g2")), p)
        image = cm_act(GroupWord(("g1", "g2") * 6), p)
        if image == p:
            strict += 1
        else:
            assert points_equal_up_to_gauge(image, p) is not None
    if strict < len(points):
        print(f"  note: (g1 g2)^6 fixed {strict}/{len(points)} points strictly, the rest up to gauge")


@criterion(4, "kappa coefficients equal q^s j Y^s X^r i for s, r <= 10 and k * k^-1 = 1 to depth 10")
def test_criterion_04_kappa_coefficients():
    for p, kd in zip(_points50(), _kappas()):
        for s in range(11):
            for r in range(11):
                assert kd.coefficients[s][r] == kappa_coefficient(p, s, r)
        prod = kd.product()
        assert prod.depth >= 10
        assert prod.equals_to_depth(SkewSeries.one(Y_LEFT, p.q, prod.depth))


@criterion(5, "Cayley-Hamilton echo a_sr = sum_p c_p a_(s, r+p) on all samples")
def test_criterion_05_cayley_hamilton_echo():
    for kd in _kappas():
        assert cayley_hamilton_echo(kd) == []


@criterion(6, "omega_x: G1 in Q[x] nonzero, G2 lead (-1)^n, Laurent leads for 100 random right multiples")
def test_criterion_06_lemma_conditions():
    rng = random.Random(SEED + 6)
    for p in _points50():
        I = omega_x(p)
        G1, G2 = I.gens
        assert set(G1.coeffs) == {0} and G1.coeffs[0].is_poly() and G1.coeffs[0]
        assert G2.top == p.n and G2.coeffs[G2.top].is_constant()
        assert G2.coeffs[G2.top].constant_value() == (-1) ** p.n
        for _ in range(100):
            e = random_right_combination(I, rng)
            if e:
                assert e.coeffs[e.top].is_laurent()


@criterion(7, "omega_x(p) and omega_x of (q^k X, q^m Y) are isomorphic for (k, m) in {-1,0,1}^2 at n = 1")
def test_criterion_07_z2_invariance():
    for p in _n1_points(3, SEED + 7):
        base = omega_x(p)
        for k in (-1, 0, 1):
            for m in (-1, 0, 1):
                w = ideal_isomorphic(base, omega_x(scale_point(p, k, m)))
                assert w is not None, (p, k, m)


@criterion(8, "n = 1: noncyclic and stabilizer {(0,0)} on 10 points; n = 0 cyclic with witness (1,0,0)")
def test_criterion_08_noncyclic_trivial_stabilizer():
    for p in _n1_points(10, SEED + 8):
        I = omega_x(p)
        assert is_cyclic(I) is None
        assert unit_stabilizer(I) == {(0, 0)}
    assert is_cyclic(omega_x(CMPoint.empty(2))) == (1, 0, 0)


@criterion(9, "inner automorphisms map to the identity; omega o pic_to_automorphism is the identity")
def test_criterion_09_exact_sequence():
    rng = random.Random(SEED + 9)
    for t in range(20):
        q = QS[t % 3]
        alpha = Fraction(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1))
        s = ad_unit(q, alpha, rng.randint(-4, 4), rng.randint(-4, 4))
        assert is_inner(s) is not None
        assert omega_of_automorphism(s) == PicElement.identity(q)
    for t in range(20):
        q = QS[t % 3]
        m = _random_sl2(rng)
        P = PicElement.from_matrix(q, Fraction(rng.randint(1, 20), rng.randint(1, 20)),
                                   Fraction(rng.randint(-20, 20) or 1, rng.randint(1, 20)), m)
        assert omega_of_automorphism(pic_to_automorphism(P)) == P


def _random_sl2(rng: random.Random):
    while True:
        a, b, c = rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3)
        if a and (1 + b * c) % a == 0:
            return ((a, b), (c, (1 + b * c) // a))


@criterion(10, "equivariance for g1, g2, g1^-1, g2^-1 and two scalings on 5 n = 1 points, one orientation")
def test_criterion_10_equivariance():
    words = [GroupWord((l,)) for l in ("g1", "g2", "g1inv", "g2inv")]
    words += [GroupWord.scale(2, 3), GroupWord.scale(Fraction(1, 5), 7)]
    seen = set()
    for p in _n1_points(5, SEED + 10):
        for w in words:
            rep = equivariance_check(p, w)
            assert rep["status"] == "ok", (p, w, rep)
            assert rep["unit"] is not None
            seen.add(rep["orientation"])
    assert seen == {ideals_mod.EQUIVARIANCE_ORIENTATION}


@criterion(11, "cm_equivalent finds verified witnesses on 50 n = 2 cases and rejects 20 incompatible pairs")
def test_criterion_11_equivalence_soundness():
    rng = random.Random(SEED + 11)
    for t in range(50):
        q = QS[t % 3]
        p = random_point(rng, 2, q)
        k, m = rng.randint(-2, 2), rng.randint(-2, 2)
        p2 = conjugate_point(scale_point(p, k, m), random_invertible(rng, 2))
        res = cm_equivalent(p, p2)
        assert res is not None
        g, kk, mm = res
        assert mat_det(g) != 0
        assert g * p2.X == p.X * q ** kk * g
        assert g * p2.Y == p.Y * q ** mm * g
        assert (kk, mm) == (k, m)
    rejected = 0
    while rejected < 20:
        q = QS[rejected % 3]
        p, p2 = random_point(rng, 2, q), random_point(rng, 2, q)
        ratio = mat_det(p2.X) / mat_det(p.X)
        from qtorus.exact import q_log
        K = q_log(ratio, q)
        if K is not None and K % 2 == 0:
            continue  # determinant-compatible; not part of this sample
        assert cm_equivalent(p, p2) is None
        rejected += 1


@criterion(12, "theorem-level claims are not asserted; their instance-level proxies hold")
def test_criterion_12_scope_boundary():
    # No operation claims surjectivity of omega or a full Morita classification.
    for name in ("omega_inverse", "omega_surjective", "morita_classify", "auteq_isomorphism"):
        assert not hasattr(ideals_mod, name) and not hasattr(picard_mod, name)
    rng = random.Random(SEED + 12)
    # Pic over Q as a group: associativity and inverses on rational samples.
    for t in range(10):
        q = QS[t % 3]
        a, b, c = (PicElement.from_matrix(q, Fraction(rng.randint(1, 9), rng.randint(1, 9)),
                                          Fraction(rng.randint(1, 9)), _random_sl2(rng)) for _ in range(3))
        assert pic_mul(pic_mul(a, b), c) == pic_mul(a, pic_mul(b, c))
        assert pic_mul(a, pic_inverse(a)) == PicElement.identity(q)
    # A_q and A_{1/q} are isomorphic through the x <-> y transport.
    for t in range(20):
        q = QS[t % 3]
        u, v = random_element(rng, q), random_element(rng, q)
        assert transport_to_inverse_q(torus_mul(u, v)) == torus_mul(transport_to_inverse_q(u), transport_to_inverse_q(v))
    # Orbit-level instance of the Morita picture: q-scalings fix point classes.
    p = random_point(rng, 2, 2)
    assert cm_equivalent(cm_act(GroupWord.scale(2, 1), p), p) is not None


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except Exception as exc:  # report and continue
            failed += 1
            print(f"      {type(exc).__name__}: {exc}")
    sys.exit(1 if failed else 0)
