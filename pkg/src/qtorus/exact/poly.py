"""Dense univariate polynomials over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


def _strip(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


class Poly:
    """Immutable polynomial ``sum c[k] t**k``; coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = _strip([Fraction(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple) -> "Poly":
        p = object.__new__(cls)
        p.coeffs = _strip(coeffs)
        p._hash = None
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def var(cls) -> "Poly":
        return cls((0, 1))

    # -- basic data -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def low_order(self) -> int:
        """Smallest exponent with nonzero coefficient (x-adic valuation)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("low_order of zero polynomial")

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == _strip((Fraction(other),))
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("Poly", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*t")
            else:
                parts.append(f"{c}*t^{k}")
        return " + ".join(parts)

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly._raw(tuple(c * other for c in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca == 0:
                continue
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
        return Poly._raw(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lb = other.lead
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            f = c / lb
            quot[k - db] = f
            for i, cb in enumerate(other.coeffs):
                rem[k - db + i] -= f * cb
        return Poly._raw(tuple(quot)), Poly._raw(tuple(rem[:db] if db > 0 else ()))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return Poly._raw(tuple(c / lead for c in self.coeffs))

    def __call__(self, value):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def scale_var(self, c) -> "Poly":
        """The polynomial ``t -> p(c*t)``."""
        c = Fraction(c)
        out, pw = [], Fraction(1)
        for a in self.coeffs:
            out.append(a * pw)
            pw *= c
        return Poly._raw(tuple(out))

    def shift_exponent(self, k: int) -> "Poly":
        """Multiply by ``t**k`` (k >= 0) or exactly divide by ``t**-k``."""
        if k >= 0:
            return Poly._raw((Fraction(0),) * k + self.coeffs) if self.coeffs else self
        if any(self.coeffs[:-k]):
            raise ArithmeticError("not divisible by the requested power of t")
        return Poly._raw(self.coeffs[-k:])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm; ``gcd(a, 0) = monic(a)``."""
    while b:
        a, b = b, a % b
    return a.monic()


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return Poly()
    return (a * b).exact_div(poly_gcd(a, b)).monic()


def poly_xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g and g monic."""
    r0, r1 = a, b
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while r1:
        quo, rem = divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, s0 - quo * s1
        t0, t1 = t1, t0 - quo * t1
    if not r0:
        return r0, s0, t0
    lead = r0.lead
    return r0.monic(), s0 * (1 / lead), t0 * (1 / lead)
