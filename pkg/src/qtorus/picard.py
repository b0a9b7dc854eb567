"""Aut(A_q) = (Q*)^2 x| SL2(Z) and Pic(A_q) = (Q*/q^Z)^2 x| SL2(Z).

A Picard element ``(alpha, beta; g)`` means "scale by (alpha, beta), then
apply g"; products follow ``(s1; g1)(s2; g2) = (s1 * g1(s2); g1 g2)``.
The automorphism attached to it is ``sigma_g o tau_s`` where ``tau_s`` is
``(x, y) -> (alpha x, beta y)`` and ``sigma_g`` composes the generator
automorphisms ``g1: (x, y) -> (yx, y)``, ``g2: (x, y) -> (x, y x^-1)`` so
that the first letter of the word is applied first.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cmspace import INVERSE_LETTER, LETTER_MATRICES, GroupWord, act_on_scaling, word_matrix
from .exact import SchemaError, check_q, format_rational, parse_rational, valuation, valuation_prime
from .torus import TorusAutomorphism, compose_automorphisms


class BadDeterminant(ValueError):
    pass


def pic_normalize(alpha, q) -> tuple[Fraction, int]:
    """``alpha = q^k * canonical`` with ``v_p(canonical)`` in ``[0, |v_p(q)|)``.

    ``p`` is the smallest prime dividing the numerator of q (or, failing
    that, its denominator).
    """
    alpha, q = Fraction(alpha), check_q(q)
    if alpha == 0:
        raise ValueError("cannot normalize zero")
    p = valuation_prime(q)
    vq = valuation(q, p)
    va = valuation(alpha, p)
    r = va % abs(vq)
    k = (va - r) // vq
    canonical = alpha / q ** k
    assert valuation(canonical, p) == r
    return canonical, k


def _mat_inv(m) -> tuple:
    (a, b), (c, d) = m
    return ((d, -b), (-c, a))


def _check_det(m) -> tuple:
    (a, b), (c, d) = m
    m = ((int(a), int(b)), (int(c), int(d)))
    if m[0][0] * m[1][1] - m[0][1] * m[1][0] != 1:
        raise BadDeterminant(f"{m} does not have determinant 1")
    return m


def free_reduce(letters: Sequence[str]) -> tuple:
    out: list = []
    for l in letters:
        if out and out[-1] == INVERSE_LETTER[l]:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


def word_inverse(letters: Sequence[str]) -> tuple:
    return tuple(INVERSE_LETTER[l] for l in reversed(letters))


def word_from_matrix(m) -> tuple:
    """Letters in g1^±1, g2^±1 whose product is exactly m.

    Euclid on the first column by left multiplication with powers of g1
    (row1 += k row2) and g2 (row2 -= k row1); the residue is +-g1^b, and
    -1 is written as (g1 g2)^3.
    """
    m = _check_det(m)
    R = m
    left: list = []  # letters L with L_r ... L_1 m = R
    while R[1][0] != 0:
        a, c = R[0][0], R[1][0]
        if a != 0 and abs(a) > abs(c):
            k = a // c
            # g1^-k: row1 -= k row2
            left.extend(["g1inv"] * k if k > 0 else ["g1"] * (-k))
            R = ((R[0][0] - k * R[1][0], R[0][1] - k * R[1][1]), R[1])
        else:
            if a == 0:
                # row1 += row2 (g1) to make a nonzero
                left.append("g1")
                R = ((R[0][0] + R[1][0], R[0][1] + R[1][1]), R[1])
                continue
            k = c // a
            # g2^k: row2 -= k row1
            left.extend(["g2"] * k if k > 0 else ["g2inv"] * (-k))
            R = (R[0], (R[1][0] - k * R[0][0], R[1][1] - k * R[0][1]))
    a, b = R[0]
    if a == 1:
        tail = ["g1"] * b if b >= 0 else ["g1inv"] * (-b)
    else:
        # R = -1 * [[1, -b], [0, 1]]
        tail = ["g1", "g2"] * 3 + (["g1inv"] * b if b >= 0 else ["g1"] * (-b))
    # m = L_1^-1 ... L_r^-1 R  (left holds L_1 .. L_r in application order)
    word = free_reduce([INVERSE_LETTER[l] for l in left] + tail)
    if word_matrix(word) != m:
        raise ArithmeticError(f"word decomposition failed for {m}")
    return word


@dataclass(frozen=True)
class PicElement:
    q: Fraction
    alpha: Fraction
    beta: Fraction
    m: tuple
    word: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", check_q(self.q))
        m = _check_det(self.m)
        object.__setattr__(self, "m", m)
        a, _ = pic_normalize(self.alpha, self.q)
        b, _ = pic_normalize(self.beta, self.q)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        word = tuple(self.word)
        if word_matrix(word) != m:
            raise ValueError(f"word {word} does not multiply to {m}")
        object.__setattr__(self, "word", word)

    @classmethod
    def identity(cls, q) -> "PicElement":
        return cls(q, Fraction(1), Fraction(1), ((1, 0), (0, 1)), ())

    @classmethod
    def from_matrix(cls, q, alpha, beta, m) -> "PicElement":
        return cls(q, alpha, beta, m, word_from_matrix(m))

    @classmethod
    def from_word(cls, q, w: GroupWord) -> "PicElement":
        return cls(q, w.scaling[0], w.scaling[1], word_matrix(w.letters), w.letters)

    def to_group_word(self) -> GroupWord:
        return GroupWord(self.word, (self.alpha, self.beta))

    def __eq__(self, other):
        if not isinstance(other, PicElement):
            return NotImplemented
        # the word is only a witness
        return (self.q, self.alpha, self.beta, self.m) == (other.q, other.alpha, other.beta, other.m)

    def __hash__(self):
        return hash((self.q, self.alpha, self.beta, self.m))


def pic_mul(p1: PicElement, p2: PicElement) -> PicElement:
    if p1.q != p2.q:
        raise ValueError("Picard elements over different q")
    a2, b2 = act_on_scaling(p1.m, p2.alpha, p2.beta)
    m = word_matrix(p1.word + p2.word)
    return PicElement(p1.q, p1.alpha * a2, p1.beta * b2, m, free_reduce(p1.word + p2.word))


def pic_inverse(p: PicElement) -> PicElement:
    minv = _mat_inv(p.m)
    a, b = act_on_scaling(minv, 1 / p.alpha, 1 / p.beta)
    return PicElement(p.q, a, b, minv, word_inverse(p.word))


# -- automorphisms ----------------------------------------------------------

@lru_cache(maxsize=None)
def letter_automorphism(q: Fraction, letter: str) -> TorusAutomorphism:
    if letter == "g1":
        return TorusAutomorphism(q, 1, 1, LETTER_MATRICES["g1"])
    if letter == "g2":
        return TorusAutomorphism(q, 1, 1, LETTER_MATRICES["g2"])
    if letter in ("g1inv", "g2inv"):
        return letter_automorphism(q, INVERSE_LETTER[letter]).inverse()
    raise ValueError(f"unknown letter {letter!r}")


def word_automorphism(q, letters: Sequence[str]) -> TorusAutomorphism:
    """``sigma_{l_k} o ... o sigma_{l_1}``; its matrix is ``l_1 ... l_k``."""
    q = check_q(q)
    sigma = TorusAutomorphism.identity(q)
    for l in letters:
        sigma = compose_automorphisms(letter_automorphism(q, l), sigma)
    return sigma


def pic_to_automorphism(p: PicElement) -> TorusAutomorphism:
    sigma = word_automorphism(p.q, p.word)
    out = compose_automorphisms(sigma, TorusAutomorphism.scaling(p.q, p.alpha, p.beta))
    assert out.m == p.m
    return out


def group_word_automorphism(q, w: GroupWord) -> TorusAutomorphism:
    """Automorphism of a group word with its scaling kept exactly (no q-reduction)."""
    sigma = word_automorphism(q, w.letters)
    return compose_automorphisms(sigma, TorusAutomorphism.scaling(q, *w.scaling))


def omega_of_automorphism(s: TorusAutomorphism) -> PicElement:
    """Class of ``s`` in Pic: strip the section ``sigma_m`` and reduce mod q^Z."""
    word = word_from_matrix(s.m)
    section = word_automorphism(s.q, word)
    rest = compose_automorphisms(section.inverse(), s)
    assert rest.m == ((1, 0), (0, 1))
    return PicElement(s.q, rest.alpha, rest.beta, s.m, word)


def is_inner(s: TorusAutomorphism) -> tuple[int, int] | None:
    """``(n, m)`` when ``s = (q^n x, q^m y; 1)``, else None."""
    if s.m != ((1, 0), (0, 1)):
        return None
    ca, n = pic_normalize(s.alpha, s.q)
    cb, m = pic_normalize(s.beta, s.q)
    if ca != 1 or cb != 1:
        return None
    return n, m


# -- JSON ------------------------------------------------------------------

def pic_to_json(p: PicElement) -> dict:
    return {"alpha": format_rational(p.alpha), "beta": format_rational(p.beta),
            "m": [list(p.m[0]), list(p.m[1])], "word": list(p.word)}


def pic_from_json(data: dict, q) -> PicElement:
    try:
        m = tuple(tuple(int(v) for v in row) for row in data["m"])
        alpha = parse_rational(data["alpha"])
        beta = parse_rational(data["beta"])
        word = tuple(data["word"]) if "word" in data else None
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad Picard element: {exc}") from exc
    if word is None:
        return PicElement.from_matrix(q, alpha, beta, m)
    return PicElement(q, alpha, beta, m, word)
