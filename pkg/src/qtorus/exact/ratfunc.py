"""Rational functions in one variable over the rationals."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly, poly_gcd

_ONE = Poly((1,))


class RatFunc:
    """Normalized ``num/den``: den monic, gcd(num, den) = 1, zero is 0/1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        num = num if isinstance(num, Poly) else Poly((num,))
        if den is None:
            den = _ONE
        elif not isinstance(den, Poly):
            den = Poly((den,))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            self.num, self.den = Poly(), _ONE
        elif den.is_constant():
            self.num, self.den = num * (1 / den.lead), _ONE
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
            lead = den.lead
            if lead != 1:
                num, den = num * (1 / lead), den * (1 / lead)
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        r = object.__new__(cls)
        r.num, r.den, r._hash = num, den, None
        return r

    @classmethod
    def var(cls) -> "RatFunc":
        return cls._raw(Poly.var(), _ONE)

    @classmethod
    def laurent_monomial(cls, k: int, c=1) -> "RatFunc":
        """``c * t**k`` for any integer k."""
        c = Fraction(c)
        if c == 0:
            return cls()
        if k >= 0:
            return cls._raw(Poly.monomial(k, c), _ONE)
        return cls._raw(Poly((c,)), Poly.monomial(-k))

    # -- predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self):
        return bool(self.num)

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def is_laurent(self) -> bool:
        """True when the denominator is a power of the variable."""
        return sum(1 for c in self.den.coeffs if c) == 1

    def laurent_terms(self) -> dict[int, Fraction]:
        """Exponent -> coefficient for a Laurent polynomial."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        shift = self.den.degree
        return {k - shift: c for k, c in enumerate(self.num.coeffs) if c}

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _coerce(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc._raw(other, _ONE)
        if isinstance(other, (int, Fraction)):
            return RatFunc._raw(Poly((other,)), _ONE) if other else RatFunc()
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            if self.den.degree == 0:
                return RatFunc._raw(self.num + o.num, _ONE)
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RatFunc()
            return RatFunc._raw(self.num * other, self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc()
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFunc._raw(self.num * o.num, _ONE)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc._raw(self.num ** e, self.den ** e)

    def scale_var(self, c) -> "RatFunc":
        """``t -> f(c*t)``."""
        c = Fraction(c)
        if c == 1:
            return self
        return RatFunc(self.num.scale_var(c), self.den.scale_var(c))

    def __call__(self, value):
        return self.num(value) / self.den(value)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("RatFunc", self.num, self.den))
        return self._hash

    def __repr__(self):
        if self.den.degree == 0:
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / ({self.den}))"

    __str__ = __repr__
