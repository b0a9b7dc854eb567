"""Quantum Calogero-Moser points ``(X, Y, i, j)`` with ``qXY - YX + ij = 0``.

Group words act on points with the scaling first and then the letters from
left to right (the leftmost letter acts first). In this convention the
scaling and SL2(Z) parts combine into an action of the semidirect product
(Q*)^2 x| SL2(Z), with SL2(Z) acting on exponents by
``g(alpha, beta) = (alpha^a beta^b, alpha^c beta^d)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (Matrix, SchemaError, check_q, format_rational, mat_det, mat_inverse,
                    mat_nullspace, mat_rank, parse_rational, q_log)

LETTERS = ("g1", "g1inv", "g2", "g2inv")
LETTER_MATRICES = {
    "g1": ((1, 1), (0, 1)),
    "g1inv": ((1, -1), (0, 1)),
    "g2": ((1, 0), (-1, 1)),
    "g2inv": ((1, 0), (1, 1)),
}
INVERSE_LETTER = {"g1": "g1inv", "g1inv": "g1", "g2": "g2inv", "g2inv": "g2"}


class CMError(ValueError):
    pass


class SpectralCollision(CMError):
    pass


class SingularY(CMError):
    pass


class RankConditionFailed(CMError):
    pass


class RankNotOne(CMError):
    pass


class ValidationError(CMError):
    pass


ValidationFailed = ValidationError


@dataclass(frozen=True)
class CMPoint:
    q: Fraction
    n: int
    X: Matrix
    Y: Matrix
    i: Matrix  # n x 1
    j: Matrix  # 1 x n

    @classmethod
    def empty(cls, q) -> "CMPoint":
        q = check_q(q)
        return cls(q, 0, Matrix.zeros(0, 0), Matrix.zeros(0, 0), Matrix.zeros(0, 1), Matrix.zeros(1, 0))

    @classmethod
    def from_lists(cls, q, X, Y, i, j) -> "CMPoint":
        n = len(X)
        return cls(Fraction(q), n, Matrix(X, n), Matrix(Y, n), Matrix.column(i), Matrix.row(j) if n else Matrix.zeros(1, 0))

    def defect(self) -> Matrix:
        """``qXY - YX + ij`` (zero on a valid point)."""
        return self.X * self.Y * self.q - self.Y * self.X + self.i * self.j


@dataclass(frozen=True)
class GroupWord:
    """Scaling ``(alpha, beta)`` followed by letters applied left to right."""

    letters: tuple = ()
    scaling: tuple = (Fraction(1), Fraction(1))

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        object.__setattr__(self, "scaling", (Fraction(self.scaling[0]), Fraction(self.scaling[1])))
        for l in self.letters:
            if l not in LETTERS:
                raise ValueError(f"unknown letter {l!r}")
        if self.scaling[0] == 0 or self.scaling[1] == 0:
            raise ValueError("scaling must be nonzero")

    @classmethod
    def scale(cls, alpha, beta) -> "GroupWord":
        return cls((), (alpha, beta))

    def matrix(self) -> tuple:
        return word_matrix(self.letters)

    def is_identity_word(self) -> bool:
        return not self.letters and self.scaling == (1, 1)


def mat2_mul(a, b) -> tuple:
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def word_matrix(letters: Sequence[str]) -> tuple:
    m = ((1, 0), (0, 1))
    for l in letters:
        m = mat2_mul(m, LETTER_MATRICES[l])
    return m


def act_on_scaling(m, alpha, beta) -> tuple[Fraction, Fraction]:
    """``g(alpha, beta) = (alpha^a beta^b, alpha^c beta^d)``."""
    (a, b), (c, d) = m
    alpha, beta = Fraction(alpha), Fraction(beta)
    return alpha ** a * beta ** b, alpha ** c * beta ** d


# -- validation ------------------------------------------------------------

def cm_validate(p: CMPoint) -> tuple[bool, str]:
    """``(ok, diagnostic)``; the diagnostic names the first violated invariant."""
    n = p.n
    if p.q in (0, 1, -1):
        return False, "q must avoid 0, 1, -1"
    if p.X.shape != (n, n) or p.Y.shape != (n, n):
        return False, f"X and Y must be {n}x{n}"
    if p.i.shape != (n, 1) or p.j.shape != (1, n):
        return False, f"i must be {n}x1 and j 1x{n}"
    if n == 0:
        return True, "ok"
    if mat_det(p.X) == 0:
        return False, "X not invertible"
    if mat_det(p.Y) == 0:
        return False, "Y not invertible"
    if not p.defect().is_zero():
        return False, "qXY - YX + ij != 0"
    comm = p.X * p.Y * mat_inverse(p.X) * mat_inverse(p.Y) * p.q - Matrix.identity(n)
    if mat_rank(comm) != 1:
        return False, "rank(qXYX^-1Y^-1 - 1) != 1"
    first = next((v for v in p.i.col(0) if v != 0), None)
    if first != 1:
        return False, "gauge: first nonzero entry of i must be 1"
    return True, "ok"


def gauge_normalize(p: CMPoint) -> CMPoint:
    """Scalar GL_n gauge making the first nonzero entry of i equal to 1."""
    first = next((v for v in p.i.col(0) if v != 0), None)
    if first is None or first == 1:
        return p
    return CMPoint(p.q, p.n, p.X, p.Y, p.i * (1 / first), p.j * first)


def cm_make(n: int, q, X_diag: Sequence, i: Sequence, j: Sequence) -> CMPoint:
    """Point with ``X = diag(X_diag)`` and ``Y_ab = -i_a j_b / (q x_a - x_b)``."""
    q = check_q(q)
    xs = [Fraction(v) for v in X_diag]
    iv = [Fraction(v) for v in i]
    jv = [Fraction(v) for v in j]
    if not (len(xs) == len(iv) == len(jv) == n):
        raise ValueError("X_diag, i, j must all have length n")
    if n == 0:
        return CMPoint.empty(q)
    if any(v == 0 for v in xs):
        raise ValueError("X_diag entries must be nonzero")
    if len(set(xs)) != n:
        raise ValueError("X_diag entries must be distinct")
    for a in range(n):
        for b in range(n):
            if q * xs[a] == xs[b]:
                raise SpectralCollision(f"q*x_{a} == x_{b} ({q}*{xs[a]} = {xs[b]})")
    if not any(iv) or not any(jv):
        raise RankConditionFailed("ij = 0: the commutation defect has rank 0")
    Y = Matrix([[-iv[a] * jv[b] / (q * xs[a] - xs[b]) for b in range(n)] for a in range(n)], n)
    if mat_det(Y) == 0:
        raise SingularY("Y is singular for this (X, i, j); choose different i, j")
    p = gauge_normalize(CMPoint(q, n, Matrix.diag(xs), Y, Matrix.column(iv), Matrix.row(jv)))
    ok, msg = cm_validate(p)
    if not ok:
        raise RankConditionFailed(msg)
    return p


def recover_ij(n: int, q, X: Matrix, Y: Matrix) -> tuple[Matrix, Matrix]:
    """Gauge-normalized rank-one factorization ``ij = YX - qXY``."""
    q = Fraction(q)
    if n == 0:
        return Matrix.zeros(0, 1), Matrix.zeros(1, 0)
    D = Y * X - X * Y * q
    if mat_rank(D) != 1:
        raise RankNotOne(f"YX - qXY has rank {mat_rank(D)}")
    r0 = next(r for r in range(n) if any(v != 0 for v in D.entries[r]))
    c0 = next(c for c in range(n) if D[r0, c] != 0)
    i = Matrix.column([D[r, c0] / D[r0, c0] for r in range(n)])
    j = Matrix.row(list(D.entries[r0]))
    if i * j != D:
        raise ArithmeticError("rank-one factorization failed")
    return i, j


# -- the group action ------------------------------------------------------

def _apply_letter(p: CMPoint, letter: str) -> CMPoint:
    X, Y, i, j = p.X, p.Y, p.i, p.j
    if letter == "g1":
        Yi = mat_inverse(Y)
        X, i = Yi * X, Yi * i
    elif letter == "g1inv":
        X, i = Y * X, Y * i
    elif letter == "g2":
        Y, j = Y * X, j * X
    elif letter == "g2inv":
        Xi = mat_inverse(X)
        Y, j = Y * Xi, j * Xi
    else:
        raise ValueError(f"unknown letter {letter!r}")
    return CMPoint(p.q, p.n, X, Y, i, j)


def _apply_scaling(p: CMPoint, alpha, beta) -> CMPoint:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 1 and beta == 1:
        return p
    return CMPoint(p.q, p.n, p.X * (1 / alpha), p.Y * (1 / beta), p.i * (1 / (alpha * beta)), p.j)


def cm_act(w: GroupWord, p: CMPoint) -> CMPoint:
    """Apply the scaling ``(X, Y) -> (X/alpha, Y/beta)``, then each letter in order."""
    if p.n == 0:
        return p
    out = _apply_scaling(p, *w.scaling)
    for letter in w.letters:
        out = _apply_letter(out, letter)
    out = gauge_normalize(out)
    ok, msg = cm_validate(out)
    if not ok:
        raise ValidationFailed(f"action produced an invalid point: {msg}")
    return out


def conjugate_point(p: CMPoint, g: Matrix) -> CMPoint:
    gi = mat_inverse(g)
    return gauge_normalize(CMPoint(p.q, p.n, g * p.X * gi, g * p.Y * gi, g * p.i, p.j * gi))


def scale_point(p: CMPoint, k: int, m: int) -> CMPoint:
    """``(q^k X, q^m Y)`` with refactored, gauge-normalized ``i, j``."""
    return cm_act(GroupWord.scale(p.q ** (-k), p.q ** (-m)), p)


# -- equivalence -----------------------------------------------------------

def _q_power_exponent(ratio: Fraction, q: Fraction, n: int) -> int | None:
    K = q_log(ratio, q)
    if K is None or K % n:
        return None
    return K // n


def simultaneous_conjugator(A1: Sequence[Matrix], A2: Sequence[Matrix]) -> Matrix | None:
    """Invertible g with ``g A2[t] = A1[t] g`` for all t, or None.

    The solution space is a linear subspace; det of a generic combination is
    a polynomial of per-variable degree <= n, so it is identically zero iff it
    vanishes on the grid {0..n}^dim, which is scanned in lexicographic order.
    """
    n = A1[0].rows
    if n == 0:
        return Matrix.zeros(0, 0)
    rows = []
    for M1, M2 in zip(A1, A2):
        # (g M2 - M1 g)_{rc} = sum_k g_{rk} M2_{kc} - M1_{rk} g_{kc}
        for r in range(n):
            for c in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[r * n + k] += M2[k, c]
                    row[k * n + c] -= M1[r, k]
                rows.append(row)
    basis = mat_nullspace(Matrix(rows, n * n))
    if not basis:
        return None
    mats = [Matrix([[b[r * n + c, 0] for c in range(n)] for r in range(n)], n) for b in basis]
    for coeffs in itertools.product(range(n + 1), repeat=len(mats)):
        if not any(coeffs):
            continue
        g = Matrix.zeros(n, n)
        for t, B in zip(coeffs, mats):
            if t:
                g = g + B * t
        if mat_det(g) != 0:
            return g
    return None


def cm_equivalent(p1: CMPoint, p2: CMPoint) -> tuple[Matrix, int, int] | None:
    """``(g, k, m)`` with ``g X2 = q^k X1 g`` and ``g Y2 = q^m Y1 g``, or None."""
    if p1.q != p2.q or p1.n != p2.n:
        return None
    n, q = p1.n, p1.q
    if n == 0:
        return Matrix.zeros(0, 0), 0, 0
    k = _q_power_exponent(mat_det(p2.X) / mat_det(p1.X), q, n)
    m = _q_power_exponent(mat_det(p2.Y) / mat_det(p1.Y), q, n)
    if k is None or m is None:
        return None
    X1, Y1 = p1.X * q ** k, p1.Y * q ** m
    g = simultaneous_conjugator([X1, Y1], [p2.X, p2.Y])
    if g is None:
        return None
    if g * p2.X != X1 * g or g * p2.Y != Y1 * g:
        raise ArithmeticError("conjugator failed re-verification")
    return g, k, m


def points_equal_up_to_gauge(p1: CMPoint, p2: CMPoint) -> Matrix | None:
    """GL_n element carrying p2 onto p1 exactly (X, Y, i, j), or None."""
    if p1.n != p2.n or p1.q != p2.q:
        return None
    if p1.n == 0:
        return Matrix.zeros(0, 0)
    g = simultaneous_conjugator([p1.X, p1.Y], [p2.X, p2.Y])
    if g is None:
        return None
    # fix the scalar so that g i2 = i1 as well
    gi2 = g * p2.i
    r = next(r for r in range(p1.n) if gi2[r, 0] != 0)
    g = g * (p1.i[r, 0] / gi2[r, 0])
    if conjugate_point(p2, g) != gauge_normalize(p1):
        return None
    return g


# -- JSON ------------------------------------------------------------------

def _mat_json(M: Matrix) -> list:
    return [[format_rational(v) for v in row] for row in M.entries]


def point_to_json(p: CMPoint) -> dict:
    return {"q": format_rational(p.q), "n": p.n, "X": _mat_json(p.X), "Y": _mat_json(p.Y),
            "i": [format_rational(v) for v in p.i.col(0)] if p.n else [],
            "j": [format_rational(v) for v in p.j.entries[0]] if p.n else []}


def point_from_json(data: dict, validate: bool = True) -> CMPoint:
    try:
        q = check_q(parse_rational(data["q"]))
        n = int(data["n"])
        X = [[parse_rational(v) for v in row] for row in data["X"]]
        Y = [[parse_rational(v) for v in row] for row in data["Y"]]
        i = [parse_rational(v) for v in data["i"]]
        j = [parse_rational(v) for v in data["j"]]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"bad point: missing or malformed field {exc}") from exc
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    if len(X) != n or len(Y) != n or len(i) != n or len(j) != n:
        raise SchemaError(f"point fields do not match n={n}")
    if any(len(r) != n for r in X) or any(len(r) != n for r in Y):
        raise SchemaError(f"X and Y must be {n}x{n}")
    p = CMPoint.empty(q) if n == 0 else CMPoint.from_lists(q, X, Y, i, j)
    if validate:
        ok, msg = cm_validate(p)
        if not ok:
            raise ValidationFailed(msg)
    return p


def word_to_json(w: GroupWord) -> dict:
    return {"scaling": [format_rational(w.scaling[0]), format_rational(w.scaling[1])],
            "letters": list(w.letters)}


def word_from_json(data: dict) -> GroupWord:
    try:
        sc = data.get("scaling", ["1", "1"])
        return GroupWord(tuple(data.get("letters", [])), (parse_rational(sc[0]), parse_rational(sc[1])))
    except (TypeError, IndexError, ValueError) as exc:
        raise SchemaError(f"bad word: {exc}") from exc
