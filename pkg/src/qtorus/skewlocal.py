"""Ore localizations Q(x)[y^±1] and Q(y)[x^±1] of A_q, truncated series, membership.

A ``x_left`` element is ``sum a_i(x) y^i``; a ``y_left`` element is
``sum b_i(y) x^i``. Both sides share one code path: moving the right
variable ``t`` past a coefficient ``f`` of the left variable ``s`` obeys

    t^i f(s) = f(r^i s) t^i,   r = 1/q (x_left) or r = q (y_left),

which is the x_left rule for the swapped torus A_{1/q}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exact import Poly, RatFunc, SchemaError, format_rational, parse_rational, poly_lcm, solve_sparse, to_exact_num
from .torus import ContextMismatch, TorusElement

X_LEFT = "x_left"
Y_LEFT = "y_left"
SIDES = (X_LEFT, Y_LEFT)


class SideMismatch(ValueError):
    pass


class ZeroElement(ValueError):
    pass


class NonInvertibleLead(ArithmeticError):
    pass


def _ratio(side: str, q: Fraction) -> Fraction:
    return 1 / q if side == X_LEFT else q


class SkewLaurent:
    """Finite sum ``sum_i c_i(s) t^i`` with RatFunc coefficients."""

    __slots__ = ("side", "q", "coeffs", "_hash")

    def __init__(self, side: str, q, coeffs: Mapping[int, object] | None = None):
        if side not in SIDES:
            raise ValueError(f"unknown side {side!r}")
        self.side = side
        self.q = Fraction(q)
        clean = {}
        for k, c in (coeffs or {}).items():
            if not isinstance(c, RatFunc):
                c = RatFunc._coerce(c)
            if c:
                clean[int(k)] = c
        self.coeffs = clean
        self._hash = None

    @classmethod
    def _raw(cls, side, q, coeffs) -> "SkewLaurent":
        e = object.__new__(cls)
        e.side, e.q, e.coeffs, e._hash = side, q, coeffs, None
        return e

    @classmethod
    def one(cls, side, q) -> "SkewLaurent":
        return cls(side, q, {0: RatFunc(1)})

    @classmethod
    def constant(cls, side, q, f) -> "SkewLaurent":
        """A pure left-variable element ``f(s) t^0``."""
        return cls(side, q, {0: f})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        return (self.side, self.q, self.coeffs) == (other.side, other.q, other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.side, self.q, tuple(sorted(self.coeffs.items()))))
        return self._hash

    def __repr__(self):
        t = "y" if self.side == X_LEFT else "x"
        parts = [f"({c})*{t}^{k}" for k, c in sorted(self.coeffs.items())]
        return f"SkewLaurent[{self.side}](" + " + ".join(parts or ["0"]) + ")"

    def _check(self, other: "SkewLaurent"):
        if self.side != other.side:
            raise SideMismatch(f"{self.side} vs {other.side}")
        if self.q != other.q:
            raise ContextMismatch(f"q={self.q} vs q={other.q}")

    @property
    def top(self) -> int:
        return max(self.coeffs)

    @property
    def bottom(self) -> int:
        return min(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, SkewLaurent):
            return NotImplemented
        self._check(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return SkewLaurent._raw(self.side, self.q, out)

    def __neg__(self):
        return SkewLaurent._raw(self.side, self.q, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, SkewLaurent):
            return skew_mul(self, other)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return SkewLaurent._raw(self.side, self.q, {})
            return SkewLaurent._raw(self.side, self.q, {k: c * other for k, c in self.coeffs.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        if isinstance(other, RatFunc):
            return left_scale(other, self)
        return NotImplemented

    def swap(self) -> "SkewLaurent":
        """Same coefficient data read on the other side of A_{1/q}."""
        return SkewLaurent._raw(Y_LEFT if self.side == X_LEFT else X_LEFT, 1 / self.q, dict(self.coeffs))


def left_scale(f: RatFunc, u: SkewLaurent) -> SkewLaurent:
    """``f(s) * u`` for a left-variable rational function f."""
    if not f:
        return SkewLaurent._raw(u.side, u.q, {})
    return SkewLaurent._raw(u.side, u.q, {k: f * c for k, c in u.coeffs.items()})


def skew_mul(u: SkewLaurent, v: SkewLaurent) -> SkewLaurent:
    """``(f t^i)(g t^j) = f(s) g(r^i s) t^(i+j)`` extended bilinearly."""
    u._check(v)
    r = _ratio(u.side, u.q)
    out: dict = {}
    for i, f in u.coeffs.items():
        ri = r ** i
        for j, g in v.coeffs.items():
            term = f * g.scale_var(ri)
            k = i + j
            val = out[k] + term if k in out else term
            if val:
                out[k] = val
            else:
                out.pop(k, None)
    return SkewLaurent._raw(u.side, u.q, out)


def embed(u: TorusElement, side: str = X_LEFT) -> SkewLaurent:
    """A_q inside its localization (x^a y^b = q^(ab) y^b x^a for y_left)."""
    groups: dict = {}
    q = u.q
    for (a, b), c in u.terms.items():
        if side == X_LEFT:
            groups.setdefault(b, {})[a] = c
        else:
            groups.setdefault(a, {})[b] = c * q ** (a * b)
    coeffs = {}
    for k, terms in groups.items():
        acc = RatFunc()
        for e, c in terms.items():
            acc = acc + RatFunc.laurent_monomial(e, c)
        if acc:
            coeffs[k] = acc
    return SkewLaurent._raw(side, q, coeffs)


def to_torus(u: SkewLaurent) -> TorusElement | None:
    """Inverse of :func:`embed`; None unless every coefficient is Laurent."""
    terms = {}
    for k, c in u.coeffs.items():
        if not c.is_laurent():
            return None
        for e, v in c.laurent_terms().items():
            if u.side == X_LEFT:
                terms[(e, k)] = v
            else:
                # y^e x^k = q^(-ek) x^k y^e
                terms[(k, e)] = v * u.q ** (-e * k)
    return TorusElement(u.q, terms)


def degree_and_leading(u: SkewLaurent) -> tuple[int, RatFunc, int]:
    """``(top - bottom, leading coefficient, top exponent)``."""
    if not u.coeffs:
        raise ZeroElement("degree of zero")
    top, bot = u.top, u.bottom
    return top - bot, u.coeffs[top], top


def common_denominator(u: SkewLaurent) -> Poly:
    """Monic lcm of coefficient denominators (a left factor clearing them)."""
    d = Poly((1,))
    for c in u.coeffs.values():
        if c.den.degree > 0:
            d = poly_lcm(d, c.den)
    return d


# -- truncated series ------------------------------------------------------

@dataclass(frozen=True)
class SkewSeries:
    """``sum_{k=0..depth} coeffs[k] t^(top-k) + O(t^(top-depth-1))``."""

    side: str
    q: Fraction
    top: int
    depth: int
    coeffs: tuple

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if len(self.coeffs) != self.depth + 1:
            raise ValueError("coefficient count must be depth + 1")

    @classmethod
    def from_laurent(cls, u: SkewLaurent, depth: int, top: int | None = None) -> "SkewSeries":
        if top is None:
            top = u.top if u.coeffs else 0
        return cls(u.side, u.q, top, depth,
                   tuple(u.coeffs.get(top - k, RatFunc()) for k in range(depth + 1)))

    @classmethod
    def one(cls, side, q, depth: int) -> "SkewSeries":
        return cls(side, Fraction(q), 0, depth, (RatFunc(1),) + (RatFunc(),) * depth)

    def coefficient(self, deg: int) -> RatFunc:
        k = self.top - deg
        if not 0 <= k <= self.depth:
            raise IndexError(f"degree {deg} outside the known window")
        return self.coeffs[k]

    def truncate(self, depth: int) -> "SkewSeries":
        return SkewSeries(self.side, self.q, self.top, depth, self.coeffs[:depth + 1])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def equals_to_depth(self, other: "SkewSeries") -> bool:
        """Agreement on the common window of known coefficients."""
        lo = max(self.top - self.depth, other.top - other.depth)
        hi = max(self.top, other.top)
        for d in range(lo, hi + 1):
            a = self.coeffs[self.top - d] if 0 <= self.top - d <= self.depth else RatFunc()
            b = other.coeffs[other.top - d] if 0 <= other.top - d <= other.depth else RatFunc()
            if a != b:
                return False
        return True


def series_mul(u: SkewSeries, v: SkewSeries) -> SkewSeries:
    if u.side != v.side:
        raise SideMismatch(f"{u.side} vs {v.side}")
    if u.q != v.q:
        raise ContextMismatch(f"q={u.q} vs q={v.q}")
    r = _ratio(u.side, u.q)
    depth = min(u.depth, v.depth)
    out = []
    for k in range(depth + 1):
        acc = RatFunc()
        for i in range(k + 1):
            f = u.coeffs[i]
            g = v.coeffs[k - i]
            if f and g:
                acc = acc + f * g.scale_var(r ** (u.top - i))
        out.append(acc)
    return SkewSeries(u.side, u.q, u.top + v.top, depth, tuple(out))


def series_invert(u: SkewSeries) -> SkewSeries:
    """Two-sided inverse to the same depth; the top coefficient must be nonzero."""
    lead = u.coeffs[0]
    if not lead:
        raise NonInvertibleLead("top coefficient of the series is zero")
    r = _ratio(u.side, u.q)
    T = u.top
    back = r ** (-T)
    lead_inv = lead.inverse()
    out = []
    for k in range(u.depth + 1):
        # sum_{i=0..k} u_{T-i} * v_{-T-k+i}(r^(T-i) s) = [k == 0]
        rhs = RatFunc(1) if k == 0 else RatFunc()
        for i in range(1, k + 1):
            f = u.coeffs[i]
            g = out[k - i]
            if f and g:
                rhs = rhs - f * g.scale_var(r ** (T - i))
        out.append((rhs * lead_inv).scale_var(back))
    return SkewSeries(u.side, u.q, -T, u.depth, tuple(out))


# -- bounded right-ideal membership ----------------------------------------

@dataclass(frozen=True)
class MembershipWitness:
    """``f = sum gens[k] * multipliers[k]`` with multipliers in A_q."""

    multipliers: tuple
    bounds: tuple[int, int]


def escalation_schedule(bounds: tuple[int, int], steps: int) -> list[tuple[int, int]]:
    """Box spans tried in order: start at cap/2^steps, double, end at the cap."""
    xs, ys = bounds
    if xs < 0 or ys < 0:
        raise ValueError("bounds must be nonnegative")
    sched = []
    for t in range(steps, -1, -1):
        cand = (max(1, -(-xs // 2 ** t)) if xs else 0, max(1, -(-ys // 2 ** t)) if ys else 0)
        cand = (min(cand[0], xs), min(cand[1], ys))
        if cand not in sched:
            sched.append(cand)
    return sched


def ideal_member(f: SkewLaurent, gens: Sequence[SkewLaurent], bounds: tuple[int, int],
                 escalation_steps: int = 0) -> MembershipWitness | None:
    """Search ``p_k`` in A_q with exponents in ``[-xs, xs] x [-ys, ys]`` and
    ``sum gens[k] p_k = f``. Spans escalate from small boxes up to ``bounds``;
    None means nothing was found inside the largest box.
    """
    for g in gens:
        f._check(g)
    if not gens:
        return MembershipWitness((), (0, 0)) if f.is_zero() else None
    if f.side == Y_LEFT:
        wit = ideal_member(f.swap(), [g.swap() for g in gens], bounds, escalation_steps)
        if wit is None:
            return None
        return MembershipWitness(tuple(_swap_back(p, f.q) for p in wit.multipliers), wit.bounds)
    for box in escalation_schedule(bounds, escalation_steps):
        wit = _member_in_box(f, gens, box)
        if wit is not None:
            return wit
    return None


def _swap_back(p: TorusElement, q: Fraction) -> TorusElement:
    # x_left multipliers live in A_{1/q}; map back with x <-> y.
    from .torus import transport_to_inverse_q
    out = transport_to_inverse_q(p)
    assert out.q == q
    return out


def _member_in_box(f: SkewLaurent, gens: Sequence[SkewLaurent], box: tuple[int, int]) -> MembershipWitness | None:
    xs, ys = box
    q = f.q
    r = 1 / q
    N = to_exact_num
    zero = N(0)
    if f.is_zero():
        return MembershipWitness(tuple(TorusElement(q) for _ in gens), box)
    slices: set = set(f.coeffs)
    for g in gens:
        for i in g.coeffs:
            for b in range(-ys, ys + 1):
                slices.add(i + b)
    rows: list = []
    rhs: list = []
    for s in sorted(slices):
        contrib = []  # (k, i, b, coefficient)
        den = f.coeffs[s].den if s in f.coeffs else Poly((1,))
        for k, g in enumerate(gens):
            for i, gi in g.coeffs.items():
                b = s - i
                if -ys <= b <= ys:
                    contrib.append((k, i, b, gi))
                    if gi.den.degree > 0:
                        den = poly_lcm(den, gi.den)
        # x^xs * den * (sum c q^(-i a) x^a g_i(x)) = x^xs * den * f_s
        eqs: dict = {}
        for k, i, b, gi in contrib:
            numer = gi.num * den.exact_div(gi.den) if gi.den.degree > 0 else gi.num * den
            ncoef = [(e, N(cval)) for e, cval in enumerate(numer.coeffs) if cval]
            ri = N(r ** i)
            scale = ri ** (-xs)
            for a in range(-xs, xs + 1):
                col = (b, a, k)
                for e, cval in ncoef:
                    row = eqs.setdefault(e + a + xs, ({}, [zero]))[0]
                    row[col] = row.get(col, zero) + scale * cval
                scale = scale * ri
        if s in f.coeffs:
            fs = f.coeffs[s]
            target = fs.num * den.exact_div(fs.den)
            for e, cval in enumerate(target.coeffs):
                if cval:
                    row = eqs.setdefault(e + xs, ({}, [zero]))
                    row[1][0] += N(cval)
        for key in sorted(eqs):
            coeffs, t = eqs[key]
            rows.append({c: v for c, v in coeffs.items() if v})
            rhs.append(t[0])
    order = sorted({c for row in rows for c in row}, key=lambda c: (-c[0], c[1], c[2]))
    sol = solve_sparse(rows, rhs, order)
    if sol is None:
        return None
    mults = []
    for k in range(len(gens)):
        mults.append(TorusElement(q, {(a, b): v for (b, a, kk), v in sol.items() if kk == k}))
    acc = SkewLaurent(f.side, q, {})
    for g, p in zip(gens, mults):
        acc = acc + skew_mul(g, embed(p, X_LEFT))
    if acc != f:
        raise ArithmeticError("membership witness failed re-verification")
    return MembershipWitness(tuple(mults), box)


# -- JSON ------------------------------------------------------------------

def skew_to_json(u: SkewLaurent) -> dict:
    return {"side": u.side, "q": format_rational(u.q),
            "coeffs": [{"deg": k, "num": [format_rational(c) for c in v.num.coeffs],
                        "den": [format_rational(c) for c in v.den.coeffs]}
                       for k, v in sorted(u.coeffs.items())]}


def skew_from_json(data: dict) -> SkewLaurent:
    try:
        side = data["side"]
        if side not in SIDES:
            raise SchemaError(f"unknown side {side!r}")
        q = parse_rational(data["q"])
        coeffs = {}
        for c in data["coeffs"]:
            num = Poly([parse_rational(v) for v in c["num"]])
            den = Poly([parse_rational(v) for v in c.get("den", ["1"])])
            coeffs[int(c["deg"])] = RatFunc(num, den)
    except (KeyError, TypeError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad skew Laurent element: {exc}") from exc
    return SkewLaurent(side, q, coeffs)
