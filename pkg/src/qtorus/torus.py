"""The quantum torus A_q = Q<x^±1, y^±1>/(xy - q yx).

Elements are normal ordered (x-powers left of y-powers). Moving y past x
costs a power of q:  y^b x^c = q^(-b c) x^c y^b.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from .exact.rational import check_q, format_rational, parse_rational, SchemaError


class ContextMismatch(ValueError):
    """Operands live in quantum tori with different q."""


def _qpow(q: Fraction, k: int) -> Fraction:
    return q ** k


def unit_power(q: Fraction, c: Fraction, a: int, b: int, k: int) -> tuple[Fraction, int, int]:
    """``(c x^a y^b)^k`` as ``(c', a', b')``; valid for negative k."""
    return (Fraction(c) ** k * _qpow(q, -a * b * k * (k - 1) // 2), a * k, b * k)


def unit_mul(q: Fraction, u: tuple, v: tuple) -> tuple[Fraction, int, int]:
    c1, a1, b1 = u
    c2, a2, b2 = v
    return (c1 * c2 * _qpow(q, -b1 * a2), a1 + a2, b1 + b2)


class TorusElement:
    """Finite sum ``sum c[a,b] x^a y^b`` in A_q with nonzero coefficients."""

    __slots__ = ("q", "terms", "_key")

    def __init__(self, q, terms: Mapping[tuple[int, int], object] | None = None):
        self.q = Fraction(q)
        clean = {}
        for (a, b), c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[(int(a), int(b))] = c
        self.terms = clean
        self._key = None

    @classmethod
    def _raw(cls, q: Fraction, terms: dict) -> "TorusElement":
        e = object.__new__(cls)
        e.q, e.terms, e._key = q, terms, None
        return e

    @classmethod
    def one(cls, q) -> "TorusElement":
        return cls(q, {(0, 0): 1})

    @classmethod
    def x(cls, q) -> "TorusElement":
        return cls(q, {(1, 0): 1})

    @classmethod
    def y(cls, q) -> "TorusElement":
        return cls(q, {(0, 1): 1})

    @classmethod
    def monomial(cls, q, a: int, b: int, c=1) -> "TorusElement":
        return cls(q, {(a, b): c})

    @classmethod
    def from_ordered_word(cls, q, word: str) -> "TorusElement":
        """Product of letters ``x, y, X (=x^-1), Y (=y^-1)`` read left to right."""
        q = Fraction(q)
        gens = {"x": (1, 0), "y": (0, 1), "X": (-1, 0), "Y": (0, -1)}
        acc = (Fraction(1), 0, 0)
        for ch in word:
            a, b = gens[ch]
            acc = unit_mul(q, acc, (Fraction(1), a, b))
        return cls._raw(q, {(acc[1], acc[2]): acc[0]})

    # -- data -------------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = (self.q, tuple(sorted(self.terms.items())))
        return self._key

    def __eq__(self, other):
        if isinstance(other, TorusElement):
            return self.q == other.q and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == TorusElement(self.q, {(0, 0): other})
        return NotImplemented

    def __hash__(self):
        return hash(self.key())

    def __iter__(self) -> Iterator[tuple[tuple[int, int], Fraction]]:
        return iter(sorted(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            mono = "".join(s for s in (f"x^{a}" if a else "", f"y^{b}" if b else ""))
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)

    def _check(self, other: "TorusElement"):
        if self.q != other.q:
            raise ContextMismatch(f"q={self.q} vs q={other.q}")

    def x_support(self) -> tuple[int, int]:
        xs = [a for a, _ in self.terms]
        return min(xs), max(xs)

    def y_support(self) -> tuple[int, int]:
        ys = [b for _, b in self.terms]
        return min(ys), max(ys)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TorusElement(self.q, {(0, 0): other})
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return TorusElement._raw(self.q, out)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement._raw(self.q, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return TorusElement._raw(self.q, {})
            return TorusElement._raw(self.q, {k: c * other for k, c in self.terms.items()})
        if not isinstance(other, TorusElement):
            return NotImplemented
        return torus_mul(self, other)

    def __rmul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return self * scalar
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            unit = is_unit(self)
            if unit is None:
                raise ArithmeticError("negative power of a non-unit")
            c, a, b = unit_power(self.q, *unit, e)
            return TorusElement._raw(self.q, {(a, b): c})
        result, base = TorusElement.one(self.q), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "TorusElement":
        return self ** -1


def torus_mul(u: TorusElement, v: TorusElement) -> TorusElement:
    """Normal-ordered product: (x^a y^b)(x^c y^d) = q^(-b c) x^(a+c) y^(b+d)."""
    u._check(v)
    q = u.q
    out: dict = {}
    cache: dict = {}
    for (a, b), c1 in u.terms.items():
        for (c, d), c2 in v.terms.items():
            bc = b * c
            f = cache.get(bc)
            if f is None:
                f = cache[bc] = q ** (-bc)
            k = (a + c, b + d)
            val = out.get(k, 0) + c1 * c2 * f
            if val:
                out[k] = val
            else:
                out.pop(k, None)
    return TorusElement._raw(q, out)


def is_unit(u: TorusElement) -> tuple[Fraction, int, int] | None:
    """``(alpha, a, b)`` when ``u = alpha x^a y^b``, else None."""
    if len(u.terms) != 1:
        return None
    ((a, b), c), = u.terms.items()
    return c, a, b


def transport_to_inverse_q(u: TorusElement) -> TorusElement:
    """Image under the isomorphism A_q -> A_{1/q}, x -> y, y -> x."""
    q2 = 1 / u.q
    out = {}
    for (a, b), c in u.terms.items():
        # y^a x^b = q2^(-ab) x^b y^a in A_{1/q}
        out[(b, a)] = c * u.q ** (a * b)
    return TorusElement._raw(q2, out)


# -- automorphisms ---------------------------------------------------------

class TorusAutomorphism:
    """``x -> alpha y^b x^a``, ``y -> beta y^d x^c`` for ``m = [[a, b], [c, d]]``.

    Only ``det m = 1`` is admitted: an automorphism has to fix the group
    commutator ``x y x^-1 y^-1 = q``, which rules out determinant -1.
    """

    __slots__ = ("q", "alpha", "beta", "m")

    def __init__(self, q, alpha=1, beta=1, m=((1, 0), (0, 1))):
        self.q = check_q(q)
        self.alpha = Fraction(alpha)
        self.beta = Fraction(beta)
        if self.alpha == 0 or self.beta == 0:
            raise ValueError("automorphism scalars must be nonzero")
        (a, b), (c, d) = m
        self.m = ((int(a), int(b)), (int(c), int(d)))
        if a * d - b * c != 1:
            raise ValueError(f"matrix {self.m} has determinant {a * d - b * c}, need 1")

    @classmethod
    def identity(cls, q) -> "TorusAutomorphism":
        return cls(q)

    @classmethod
    def scaling(cls, q, alpha, beta) -> "TorusAutomorphism":
        return cls(q, alpha, beta)

    def __eq__(self, other):
        if not isinstance(other, TorusAutomorphism):
            return NotImplemented
        return (self.q, self.alpha, self.beta, self.m) == (other.q, other.alpha, other.beta, other.m)

    def __hash__(self):
        return hash((self.q, self.alpha, self.beta, self.m))

    def __repr__(self):
        return f"TorusAutomorphism(q={self.q}, alpha={self.alpha}, beta={self.beta}, m={self.m})"

    def generator_images(self) -> tuple[tuple, tuple]:
        """Normal-ordered unit data ``(c, a, b)`` of the images of x and y."""
        (a, b), (c, d) = self.m
        q = self.q
        # y^b x^a = q^(-ab) x^a y^b
        return ((self.alpha * q ** (-a * b), a, b), (self.beta * q ** (-c * d), c, d))

    def image_x(self) -> TorusElement:
        c, a, b = self.generator_images()[0]
        return TorusElement.monomial(self.q, a, b, c)

    def image_y(self) -> TorusElement:
        c, a, b = self.generator_images()[1]
        return TorusElement.monomial(self.q, a, b, c)

    def monomial_image(self, r: int, s: int) -> tuple[Fraction, int, int]:
        ix, iy = self.generator_images()
        return unit_mul(self.q, unit_power(self.q, *ix, r), unit_power(self.q, *iy, s))

    def inverse(self) -> "TorusAutomorphism":
        (a, b), (c, d) = self.m
        base = TorusAutomorphism(self.q, 1, 1, ((d, -b), (-c, a)))
        s = compose_automorphisms(self, base)
        # self o base = scaling (s.alpha, s.beta); so inverse = base o scaling^-1
        return compose_automorphisms(base, TorusAutomorphism(self.q, 1 / s.alpha, 1 / s.beta))


def _from_unit_images(q: Fraction, ix: tuple, iy: tuple) -> TorusAutomorphism:
    cx, a, b = ix
    cy, c, d = iy
    # c x^a y^b = c q^(ab) y^b x^a
    return TorusAutomorphism(q, cx * q ** (a * b), cy * q ** (c * d), ((a, b), (c, d)))


def apply_automorphism(sigma: TorusAutomorphism, u: TorusElement) -> TorusElement:
    if sigma.q != u.q:
        raise ContextMismatch(f"q={sigma.q} vs q={u.q}")
    out: dict = {}
    for (r, s), c in u.terms.items():
        cc, a, b = sigma.monomial_image(r, s)
        val = out.get((a, b), 0) + c * cc
        if val:
            out[(a, b)] = val
        else:
            out.pop((a, b), None)
    return TorusElement._raw(u.q, out)


def compose_automorphisms(s1: TorusAutomorphism, s2: TorusAutomorphism) -> TorusAutomorphism:
    """The automorphism ``u -> s1(s2(u))``.

    With generator images written as ``y^b x^a``, exponent rows transform as
    row vectors, so the matrix of ``s1 o s2`` is ``m2 * m1``.
    """
    if s1.q != s2.q:
        raise ContextMismatch(f"q={s1.q} vs q={s2.q}")
    ix2, iy2 = s2.generator_images()
    img_x = s1.monomial_image(ix2[1], ix2[2])
    img_y = s1.monomial_image(iy2[1], iy2[2])
    img_x = (img_x[0] * ix2[0], img_x[1], img_x[2])
    img_y = (img_y[0] * iy2[0], img_y[1], img_y[2])
    return _from_unit_images(s1.q, img_x, img_y)


def ad_unit(q, alpha, a: int, b: int) -> TorusAutomorphism:
    """Conjugation by ``u = alpha x^a y^b``: ``(x, y) -> (q^-b x, q^a y)``."""
    q = check_q(q)
    if Fraction(alpha) == 0:
        raise ValueError("ad_unit needs a nonzero scalar")
    return TorusAutomorphism(q, q ** (-b), q ** a)


# -- JSON ------------------------------------------------------------------

def element_to_json(u: TorusElement) -> dict:
    return {"q": format_rational(u.q),
            "terms": [{"a": a, "b": b, "c": format_rational(c)} for (a, b), c in sorted(u.terms.items())]}


def element_from_json(data: dict) -> TorusElement:
    try:
        q = check_q(parse_rational(data["q"]))
        terms = {}
        for t in data["terms"]:
            key = (int(t["a"]), int(t["b"]))
            terms[key] = terms.get(key, 0) + parse_rational(t["c"])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad torus element: {exc}") from exc
    return TorusElement(q, terms)


def automorphism_to_json(s: TorusAutomorphism) -> dict:
    return {"alpha": format_rational(s.alpha), "beta": format_rational(s.beta),
            "m": [list(s.m[0]), list(s.m[1])]}


def automorphism_from_json(data: dict, q) -> TorusAutomorphism:
    try:
        return TorusAutomorphism(q, parse_rational(data["alpha"]), parse_rational(data["beta"]),
                                 tuple(tuple(int(v) for v in row) for row in data["m"]))
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad automorphism: {exc}") from exc
