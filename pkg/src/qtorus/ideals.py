"""Fractional right ideals attached to CM points, and decisions about them.

``omega_x`` builds ``M_x = det(X - x) A_q + k^-1 det(Y - y) A_q`` inside
Q(x)[y^±1] in closed form (all x-parts to the left), ``omega_y`` the
mirror image ``M_y`` inside Q(y)[x^±1]. Isomorphism of ideal classes is
decided on normalized representatives by a bounded search over monomial
units ``x^m y^k`` with mutual inclusion checked by bounded membership.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cmspace import CMPoint, GroupWord, cm_act, cm_equivalent
from .exact import Matrix, Poly, RatFunc, SchemaError, char_poly_adjugate, format_rational, parse_rational, poly_gcd, poly_lcm
from .picard import letter_automorphism
from .skewlocal import (
    X_LEFT, Y_LEFT, SkewLaurent, SkewSeries, MembershipWitness, common_denominator, embed,
    ideal_member, series_mul, skew_from_json, skew_mul, skew_to_json, to_torus,
)
from .torus import TorusAutomorphism, TorusElement, apply_automorphism, is_unit

# Orientation under which the Pic action on points matches the action of
# automorphisms on ideal classes (found at n=1, asserted everywhere).
EQUIVARIANCE_ORIENTATION = "forward"


class SaturationBoundExceeded(RuntimeError):
    pass


class LemmaConditionFailed(ArithmeticError):
    pass


@dataclass(frozen=True)
class SearchBounds:
    """Membership box ``[-x_span, x_span] x [-y_span, y_span]`` and unit box."""

    x_span: int = 6
    y_span: int = 6
    unit_bound: int = 4
    escalation_steps: int = 2

    def as_json(self) -> dict:
        return {"membership_x_span": self.x_span, "membership_y_span": self.y_span,
                "unit_search_bound": self.unit_bound, "escalation_steps": self.escalation_steps}


DEFAULT_BOUNDS = SearchBounds()


@dataclass(frozen=True)
class FractionalIdeal:
    side: str
    q: Fraction
    gens: tuple

    def __post_init__(self):
        gens = tuple(self.gens)
        if not gens:
            raise ValueError("a fractional ideal needs at least one generator")
        for g in gens:
            if g.is_zero():
                raise ValueError("generators must be nonzero")
            if g.side != self.side or g.q != self.q:
                raise ValueError("generators must share the side and q of the ideal")
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "gens", gens)

    @classmethod
    def unit(cls, side, q) -> "FractionalIdeal":
        return cls(side, Fraction(q), (SkewLaurent.one(side, q),))

    def left_multiply(self, u: SkewLaurent) -> "FractionalIdeal":
        return FractionalIdeal(self.side, self.q, tuple(skew_mul(u, g) for g in self.gens))

    def swap(self) -> "FractionalIdeal":
        return FractionalIdeal(Y_LEFT if self.side == X_LEFT else X_LEFT, 1 / self.q,
                               tuple(g.swap() for g in self.gens))


def _dedupe(gens) -> tuple:
    out = []
    for g in gens:
        if g not in out:
            out.append(g)
    return tuple(out)


# -- the omega map ---------------------------------------------------------

def _bilinear(j: Matrix, A: Matrix, B: Matrix, i: Matrix) -> Fraction:
    return (j * A * B * i)[0, 0]


def omega_x(p: CMPoint) -> FractionalIdeal:
    """Generators ``det(X - x)`` and ``det(Y - y) - j (X - qx)^-1 adj(Y - y) i``."""
    q = p.q
    if p.n == 0:
        return FractionalIdeal.unit(X_LEFT, q)
    dX, CX = char_poly_adjugate(p.X)
    dY, CY = char_poly_adjugate(p.Y)
    G1 = SkewLaurent(X_LEFT, q, {0: RatFunc(dX)})
    # (X - qx)^-1 = sum_l CX_l (qx)^l / dX(qx)
    den = dX.scale_var(q)
    coeffs = {}
    for m, Cm in enumerate(CY):
        num = Poly([_bilinear(p.j, CX[l], Cm, p.i) * q ** l for l in range(len(CX))])
        coeffs[m] = RatFunc(dY[m]) - RatFunc(num, den)
    coeffs[p.n] = RatFunc(dY[p.n])
    G2 = SkewLaurent(X_LEFT, q, coeffs)
    return FractionalIdeal(X_LEFT, q, (G1, G2))


def omega_y(p: CMPoint) -> FractionalIdeal:
    """Generators ``det(Y - y)`` and ``det(X - x) + j (qY - y)^-1 adj(X - x) i``."""
    q = p.q
    if p.n == 0:
        return FractionalIdeal.unit(Y_LEFT, q)
    dX, CX = char_poly_adjugate(p.X)
    dY, _ = char_poly_adjugate(p.Y)
    dQ, CQ = char_poly_adjugate(p.Y * q)
    G1 = SkewLaurent(Y_LEFT, q, {0: RatFunc(dY)})
    coeffs = {}
    for m, Cm in enumerate(CX):
        num = Poly([_bilinear(p.j, CQ[l], Cm, p.i) for l in range(len(CQ))])
        coeffs[m] = RatFunc(dX[m]) + RatFunc(num, dQ)
    coeffs[p.n] = RatFunc(dX[p.n])
    G2 = SkewLaurent(Y_LEFT, q, coeffs)
    return FractionalIdeal(Y_LEFT, q, (G1, G2))


def swap_point(p: CMPoint) -> CMPoint:
    """The point of A_{1/q} with X and Y exchanged (``i' = i``, ``j' = -j/q``)."""
    return CMPoint(1 / p.q, p.n, p.Y, p.X, p.i, p.j * (-1 / p.q))


# -- kappa -----------------------------------------------------------------

def expand_at_infinity(f: RatFunc, lowest: int) -> dict[int, Fraction]:
    """Coefficients of f as a Laurent series in 1/t, down to ``t^lowest``."""
    if not f:
        return {}
    N, D = f.num.degree, f.den.degree
    top = N - D
    num_rev = list(reversed(f.num.coeffs))
    den_rev = list(reversed(f.den.coeffs))
    out = {}
    e: list = []
    for k in range(max(0, top - lowest + 1)):
        acc = num_rev[k] if k < len(num_rev) else Fraction(0)
        for l in range(1, min(k, len(den_rev) - 1) + 1):
            acc -= den_rev[l] * e[k - l]
        e.append(acc / den_rev[0])
        if e[-1]:
            out[top - k] = e[-1]
    return out


def kappa_coefficient(p: CMPoint, s: int, r: int) -> Fraction:
    """Closed form ``a_sr = q^s j Y^s X^r i``."""
    if p.n == 0:
        return Fraction(0)
    return p.q ** s * (p.j * p.Y ** s * p.X ** r * p.i)[0, 0]


@dataclass(frozen=True)
class KappaData:
    """Truncated y-left expansions of ``k`` and ``k^-1`` in powers of ``x^-1``.

    ``coefficients[s][r]`` is read off the series, not from the closed form.
    """

    point: CMPoint
    depth: int
    kappa: SkewSeries
    kappa_inv: SkewSeries
    coefficients: tuple

    def product(self) -> SkewSeries:
        return series_mul(self.kappa, self.kappa_inv)


def kappa_series(p: CMPoint, depth: int = 10) -> KappaData:
    """Expand ``k = 1 + j (qY - y)^-1 (X - x)^-1 i`` and
    ``k^-1 = 1 - j (X - qx)^-1 (Y - y)^-1 i`` to ``x^-(depth+1)``.

    Both are written with y-parts to the left:
    ``k = 1 - sum_r [j (qY - y)^-1 X^r i] x^(-r-1)`` and
    ``k^-1 = 1 + sum_r [j X^r (q^(r+1) Y - y)^-1 i] x^(-r-1)``.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    q, n = p.q, p.n
    N = depth + 1
    one = RatFunc(1)
    kap = [one]
    inv = [one]
    if n:
        dQ, CQ = char_poly_adjugate(p.Y * q)
        Xr = Matrix.identity(n)
        for r in range(depth + 1):
            num = Poly([_bilinear(p.j, CQ[l], Xr, p.i) for l in range(len(CQ))])
            kap.append(-RatFunc(num, dQ))
            dR, CR = char_poly_adjugate(p.Y * q ** (r + 1))
            num = Poly([_bilinear(p.j, Xr, CR[l], p.i) for l in range(len(CR))])
            inv.append(RatFunc(num, dR))
            Xr = Xr * p.X
    else:
        kap += [RatFunc()] * N
        inv += [RatFunc()] * N
    kappa = SkewSeries(Y_LEFT, q, 0, N, tuple(kap))
    kappa_inv = SkewSeries(Y_LEFT, q, 0, N, tuple(inv))
    table = []
    expansions = [expand_at_infinity(kap[r + 1], -depth - 1) for r in range(depth + 1)]
    for s in range(depth + 1):
        table.append(tuple(expansions[r].get(-s - 1, Fraction(0)) for r in range(depth + 1)))
    kd = KappaData(p, depth, kappa, kappa_inv, tuple(table))
    if not kd.product().equals_to_depth(SkewSeries.one(Y_LEFT, q, N)):
        raise ArithmeticError("k * k^-1 != 1 to the requested depth")
    return kd


def cayley_hamilton_coefficients(X: Matrix) -> list[Fraction]:
    """``c_1..c_n`` with ``1 = sum_p c_p X^p`` (from the characteristic polynomial)."""
    d, _ = char_poly_adjugate(X)
    e0 = d[0]
    if e0 == 0:
        raise ValueError("X must be invertible")
    return [Fraction(0)] + [-d[k] / e0 for k in range(1, X.rows + 1)]


def cayley_hamilton_echo(kd: KappaData) -> list[tuple[int, int]]:
    """Index pairs ``(s, r)`` where ``a_sr != sum_p c_p a_(s, r+p)`` (empty when it holds)."""
    p = kd.point
    if p.n == 0:
        return []
    c = cayley_hamilton_coefficients(p.X)
    a = kd.coefficients
    bad = []
    for s in range(kd.depth + 1):
        for r in range(kd.depth + 1 - p.n):
            rhs = sum((c[k] * a[s][r + k] for k in range(1, p.n + 1)), Fraction(0))
            if a[s][r] != rhs:
                bad.append((s, r))
    return bad


# -- normalization ---------------------------------------------------------

def _strip_unit(f: Poly) -> Poly:
    """Monic part of f with the x-power (a unit of Q[x^±1]) removed."""
    if not f:
        return f
    return f.shift_exponent(-f.low_order()).monic()


def _lead_gcd(g: RatFunc | None, f: RatFunc) -> RatFunc:
    """Generator of the Q[x^±1]-submodule spanned by g and f."""
    if g is None:
        return RatFunc(_strip_unit(f.num), _strip_unit(f.den))
    return RatFunc(_strip_unit(poly_gcd(g.num, f.num)), _strip_unit(poly_lcm(g.den, f.den)))


def _cancel_top(G: SkewLaurent, H: SkewLaurent) -> SkewLaurent:
    """``G y^d f(x) - H g(x)`` with polynomial f, g chosen to kill the top term."""
    q = G.q
    d = H.top - G.top
    t = H.top
    aG, aH = G.coeffs[G.top], H.coeffs[H.top]
    g0 = poly_gcd(aG.num * aH.den, aH.num * aG.den)
    fp = (aH.num * aG.den).exact_div(g0)
    gp = (aG.num * aH.den).exact_div(g0)
    # right factors f(r^t x) = fp(x), with r = 1/q on the x_left side
    back = q ** t
    f = _poly_to_torus(q, fp.scale_var(back))
    g = _poly_to_torus(q, gp.scale_var(back))
    yd = embed(TorusElement.monomial(q, 0, d), X_LEFT)
    return skew_mul(skew_mul(G, yd), embed(f, X_LEFT)) - skew_mul(H, embed(g, X_LEFT))


def _poly_to_torus(q, f: Poly) -> TorusElement:
    return TorusElement(q, {(k, 0): c for k, c in enumerate(f.coeffs) if c})


def leading_coefficient_ideal(I: FractionalIdeal, span: int = 6, rounds: int = 4) -> RatFunc:
    """Bounded saturation of the leading-coefficient ideal (x_left)."""
    if I.side != X_LEFT:
        raise ValueError("leading coefficient ideals are computed on the x_left side")
    elems = list(I.gens)
    g = None
    for e in elems:
        g = _lead_gcd(g, e.coeffs[e.top])
    if g == 1:
        return g
    for _ in range(rounds):
        new = []
        for G, H in itertools.combinations(elems, 2):
            if G.top > H.top:
                G, H = H, G
            diff = _cancel_top(G, H)
            if diff and diff.top - diff.bottom <= 2 * span and diff not in elems:
                new.append(diff)
        g_new = g
        for e in new:
            g_new = _lead_gcd(g_new, e.coeffs[e.top])
        if g_new == 1 or g_new == g:
            return g_new
        g = g_new
        elems.extend(new)
    raise SaturationBoundExceeded(f"leading-coefficient ideal still shrinking after {rounds} rounds")


def _random_multiplier(rng: random.Random, q, size: int = 2) -> TorusElement:
    terms = {}
    for _ in range(rng.randint(1, 3)):
        terms[(rng.randint(-size, size), rng.randint(-size, size))] = Fraction(rng.randint(-5, 5))
    return TorusElement(q, terms)


def random_right_combination(I: FractionalIdeal, rng: random.Random, size: int = 2) -> SkewLaurent:
    acc = SkewLaurent(I.side, I.q, {})
    for g in I.gens:
        acc = acc + skew_mul(g, embed(_random_multiplier(rng, I.q, size), I.side))
    return acc


def lemma_conditions(I: FractionalIdeal, samples: int = 100, seed: int = 0) -> dict:
    """Check the normal-form conditions on x_left generators and random right multiples.

    ``pure``: some generator lies in Q(x) times a power of y;
    ``laurent_leads``: every sampled leading coefficient is in Q[x^±1];
    ``constant_lead``: some generator has a constant leading coefficient.
    """
    rng = random.Random(seed)
    laurent = all(g.coeffs[g.top].is_laurent() for g in I.gens)
    for _ in range(samples):
        e = random_right_combination(I, rng)
        if e and not e.coeffs[e.top].is_laurent():
            laurent = False
            break
    return {
        "pure": any(g.top == g.bottom for g in I.gens),
        "laurent_leads": laurent,
        "constant_lead": any(g.coeffs[g.top].is_constant() for g in I.gens),
    }


def normalize_ideal(I: FractionalIdeal, span: int = 6, samples: int = 20, seed: int = 0) -> FractionalIdeal:
    """Left-divide by a generator of the leading-coefficient ideal."""
    if I.side == Y_LEFT:
        return normalize_ideal(I.swap(), span, samples, seed).swap()
    p = leading_coefficient_ideal(I, span)
    out = I if p == 1 else FractionalIdeal(X_LEFT, I.q, tuple(p.inverse() * g for g in I.gens))
    if samples:
        cond = lemma_conditions(out, samples, seed)
        if not cond["laurent_leads"]:
            raise LemmaConditionFailed("a right multiple has a non-Laurent leading coefficient")
    return out


# -- membership and isomorphism --------------------------------------------

def _unit_generator(I: FractionalIdeal) -> SkewLaurent | None:
    """Inverse of the generator when I is generated by one unit of A_q."""
    if len(I.gens) != 1:
        return None
    t = to_torus(I.gens[0])
    if t is None or is_unit(t) is None:
        return None
    return embed(t.inverse(), I.side)


def member(f: SkewLaurent, I: FractionalIdeal, bounds: SearchBounds = DEFAULT_BOUNDS) -> bool:
    """Bounded membership ``f in I``; exact when I is generated by a unit."""
    uinv = _unit_generator(I)
    if uinv is not None:
        return to_torus(skew_mul(uinv, f)) is not None
    if f in I.gens:
        return True
    wit = ideal_member(f, I.gens, (bounds.x_span, bounds.y_span), bounds.escalation_steps)
    return wit is not None


def member_witness(f: SkewLaurent, I: FractionalIdeal, bounds: SearchBounds = DEFAULT_BOUNDS) -> MembershipWitness | None:
    return ideal_member(f, I.gens, (bounds.x_span, bounds.y_span), bounds.escalation_steps)


def unit_candidates(bound: int) -> list[tuple[int, int]]:
    box = itertools.product(range(-bound, bound + 1), repeat=2)
    return sorted(box, key=lambda mk: (abs(mk[0]) + abs(mk[1]), abs(mk[0]), mk))


def _monomial(I: FractionalIdeal, m: int, k: int) -> SkewLaurent:
    return embed(TorusElement.monomial(I.q, m, k), I.side)


def translates_into(I1: FractionalIdeal, I2: FractionalIdeal, m: int, k: int,
                    bounds: SearchBounds = DEFAULT_BOUNDS) -> bool:
    """``x^m y^k I1 subset I2`` (bounded)."""
    u = _monomial(I1, m, k)
    return all(member(skew_mul(u, g), I2, bounds) for g in I1.gens)


def unit_translate(I1: FractionalIdeal, I2: FractionalIdeal, m: int, k: int,
                   bounds: SearchBounds = DEFAULT_BOUNDS) -> bool:
    """``x^m y^k I1 = I2`` by mutual inclusion."""
    u = _monomial(I1, m, k)
    uinv = embed(TorusElement.monomial(I1.q, m, k).inverse(), I1.side)
    checks = [lambda: all(member(skew_mul(u, g), I2, bounds) for g in I1.gens),
              lambda: all(member(skew_mul(uinv, h), I1, bounds) for h in I2.gens)]
    if _unit_generator(I1) is not None:
        # inclusion into a principal ideal is an exact, cheap test
        checks.reverse()
    return all(c() for c in checks)


def ideal_isomorphic(I1: FractionalIdeal, I2: FractionalIdeal, bounds: SearchBounds = DEFAULT_BOUNDS,
                     normalize: bool = True) -> tuple[Fraction, int, int] | None:
    """Unit ``(alpha, m, k)`` with ``alpha x^m y^k I1 = I2``, or None within bounds.

    y_left ideals are handled through the swap with A_{1/q}; the returned
    exponents always refer to x and y of A_q.
    """
    if I1.side != I2.side or I1.q != I2.q:
        raise ValueError("ideals must share side and q")
    if I1.side == Y_LEFT:
        w = ideal_isomorphic(I1.swap(), I2.swap(), bounds, normalize)
        if w is None:
            return None
        # x'^m y'^k in A_{1/q} is y^m x^k, a scalar times x^k y^m
        return Fraction(1), w[2], w[1]
    if normalize:
        I1, I2 = normalize_ideal(I1, bounds.y_span), normalize_ideal(I2, bounds.y_span)
    for m, k in unit_candidates(bounds.unit_bound):
        if unit_translate(I1, I2, m, k, bounds):
            return Fraction(1), m, k
    return None


def is_cyclic(I: FractionalIdeal, bounds: SearchBounds = DEFAULT_BOUNDS) -> tuple[Fraction, int, int] | None:
    """Witness that I is isomorphic to A_q, i.e. ``u A_q = I`` for a monomial unit."""
    return ideal_isomorphic(FractionalIdeal.unit(I.side, I.q), I, bounds)


def unit_stabilizer(I: FractionalIdeal, bounds: SearchBounds = DEFAULT_BOUNDS) -> set[tuple[int, int]]:
    """All ``(m, k)`` in the unit box with ``x^m y^k I = I``."""
    if I.side == Y_LEFT:
        return {(k, m) for m, k in unit_stabilizer(I.swap(), bounds)}
    I = normalize_ideal(I, bounds.y_span)
    out = {(0, 0)}
    for m, k in unit_candidates(bounds.unit_bound):
        if (m, k) != (0, 0) and unit_translate(I, I, m, k, bounds):
            out.add((m, k))
    return out


# -- Pic equivariance ------------------------------------------------------

def _side_for(step) -> str:
    # g1^±1 fix y, so they preserve Q[y] and the y-side representative
    return Y_LEFT if step in ("g1", "g1inv") else X_LEFT


def _omega(p: CMPoint, side: str) -> FractionalIdeal:
    return omega_x(p) if side == X_LEFT else omega_y(p)


def transform_ideal(I: FractionalIdeal, sigma: TorusAutomorphism) -> FractionalIdeal:
    """``sigma(h I)`` where ``h`` is a common left denominator of the generators."""
    h = Poly((1,))
    for g in I.gens:
        h = poly_lcm(h, common_denominator(g))
    hr = RatFunc(h)
    gens = []
    for g in I.gens:
        t = to_torus(hr * g)
        if t is None:
            raise ArithmeticError("denominator clearing left a non-Laurent coefficient")
        gens.append(embed(apply_automorphism(sigma, t), I.side))
    return FractionalIdeal(I.side, I.q, _dedupe(gens))


def _steps(w: GroupWord) -> list:
    steps = []
    if w.scaling != (1, 1):
        steps.append(("scaling", w.scaling))
    steps.extend((l, None) for l in w.letters)
    return steps


def _step_point(p: CMPoint, step) -> CMPoint:
    name, s = step
    return cm_act(GroupWord.scale(*s) if name == "scaling" else GroupWord((name,)), p)


def _step_automorphism(q, step, orientation: str) -> TorusAutomorphism:
    name, s = step
    sigma = TorusAutomorphism.scaling(q, *s) if name == "scaling" else letter_automorphism(q, name)
    return sigma if orientation == "forward" else sigma.inverse()


def equivariance_step(p: CMPoint, step, orientation: str, bounds: SearchBounds = DEFAULT_BOUNDS) -> dict:
    side = _side_for(step[0])
    p2 = _step_point(p, step)
    J = transform_ideal(_omega(p, side), _step_automorphism(p.q, step, orientation))
    w = ideal_isomorphic(J, _omega(p2, side), bounds)
    return {"step": step[0], "side": side,
            "unit": None if w is None else {"m": w[1], "k": w[2]}}


def equivariance_check(p: CMPoint, w: GroupWord, bounds: SearchBounds = DEFAULT_BOUNDS,
                       orientations: Sequence[str] | None = None) -> dict:
    """Compare ``sigma_w(omega(p))`` with ``omega(w . p)`` one step at a time.

    Each step is a scaling or a single letter, compared on the side whose
    variable the step fixes (both representatives lie in the same class).
    Orientations are tried in order; one orientation must serve every step.
    """
    if orientations is None:
        other = "inverse" if EQUIVARIANCE_ORIENTATION == "forward" else "forward"
        orientations = (EQUIVARIANCE_ORIENTATION, other)
    steps = _steps(w)
    report = {"orientation": None, "unit": None, "bounds_used": bounds.as_json(),
              "status": "not_found", "steps": []}
    if not steps:
        wit = ideal_isomorphic(omega_x(p), omega_x(p), bounds)
        report.update(orientation=orientations[0], status="ok" if wit else "not_found",
                      unit=None if wit is None else {"m": wit[1], "k": wit[2]})
        return report
    for orientation in orientations:
        done = []
        cur = p
        for step in steps:
            res = equivariance_step(cur, step, orientation, bounds)
            done.append(res)
            if res["unit"] is None:
                break
            cur = _step_point(cur, step)
        if all(r["unit"] is not None for r in done) and len(done) == len(steps):
            report.update(orientation=orientation, status="ok", steps=done,
                          unit=done[0]["unit"] if len(done) == 1 else None)
            return report
    return report


def stabilizer_in_pic(p: CMPoint, w: GroupWord) -> bool:
    """True iff the word fixes the class of p modulo conjugation and q-scaling."""
    return cm_equivalent(cm_act(w, p), p) is not None


# -- JSON ------------------------------------------------------------------

def ideal_to_json(I: FractionalIdeal) -> dict:
    return {"side": I.side, "q": format_rational(I.q), "gens": [skew_to_json(g) for g in I.gens]}


def ideal_from_json(data: dict) -> FractionalIdeal:
    try:
        side = data["side"]
        q = parse_rational(data["q"])
        gens = []
        for g in data["gens"]:
            g = dict(g)
            g.setdefault("side", side)
            g.setdefault("q", data["q"])
            gens.append(skew_from_json(g))
        return FractionalIdeal(side, q, tuple(gens))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad fractional ideal: {exc}") from exc
