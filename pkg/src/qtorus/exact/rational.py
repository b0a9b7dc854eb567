"""Rational scalars.

Scalars are plain :class:`fractions.Fraction` values; this module only adds
parsing/formatting in the ``"p/q"`` wire format and a few valuation helpers.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd

Rational = Fraction

_RAT_RE = re.compile(r"^\s*([+-]?\d+)(?:/(\d+))?\s*$")


class SchemaError(ValueError):
    """Malformed serialized input."""


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if not isinstance(value, str):
        raise SchemaError(f"not a rational: {value!r}")
    m = _RAT_RE.match(value)
    if m is None:
        raise SchemaError(f"malformed rational string {value!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SchemaError(f"zero denominator in {value!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def valuation(r: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if r == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = r.numerator, r.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def smallest_prime_factor(n: int) -> int:
    n = abs(n)
    if n < 2:
        raise ValueError("no prime factor")
    k = 2
    while k * k <= n:
        if n % k == 0:
            return k
        k += 1
    return n


def valuation_prime(q: Fraction) -> int:
    """A fixed prime with nonzero valuation in ``q`` (q not 0, 1, -1)."""
    q = Fraction(q)
    if abs(q.numerator) > 1:
        return smallest_prime_factor(q.numerator)
    if q.denominator > 1:
        return smallest_prime_factor(q.denominator)
    raise ValueError(f"q={q} has no prime with nonzero valuation")


def check_q(q) -> Fraction:
    """Validate the deformation parameter: exact rational outside {0, 1, -1}."""
    q = Fraction(q)
    if q in (0, 1, -1):
        raise ValueError(f"q must avoid 0, 1, -1 (got {q}); q^n = 1 is excluded")
    return q


def q_log(ratio: Fraction, q: Fraction) -> int | None:
    """Return k with ratio == q**k, or None."""
    ratio, q = Fraction(ratio), Fraction(q)
    if ratio == 0:
        return None
    p = valuation_prime(q)
    vq = valuation(q, p)
    vr = valuation(ratio, p)
    if vr % vq:
        return None
    k = vr // vq
    return k if q ** k == ratio else None


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
