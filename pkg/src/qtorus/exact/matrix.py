"""Dense matrices over an exact field (Fraction or RatFunc entries)."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .poly import Poly


class NonSquare(ValueError):
    pass


class Singular(ArithmeticError):
    pass


class ShapeMismatch(ValueError):
    pass


def _is_zero(a) -> bool:
    return a == 0


class Matrix:
    """Row-major immutable matrix. Entries must support +, -, *, / and ``== 0``."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Sequence[Sequence], cols: int | None = None):
        rows = [tuple(_lift(v) for v in row) for row in data]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise ShapeMismatch("ragged matrix rows")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)

    @classmethod
    def _raw(cls, entries: tuple, rows: int, cols: int) -> "Matrix":
        m = object.__new__(cls)
        m.entries, m.rows, m.cols = entries, rows, cols
        return m

    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls._raw(tuple(tuple(one if r == c else zero for c in range(n)) for r in range(n)), n, n)

    @classmethod
    def zeros(cls, rows: int, cols: int, zero=Fraction(0)) -> "Matrix":
        return cls._raw(tuple(tuple(zero for _ in range(cols)) for _ in range(rows)), rows, cols)

    @classmethod
    def diag(cls, values: Sequence) -> "Matrix":
        n = len(values)
        return cls([[values[r] if r == c else 0 for c in range(n)] for r in range(n)], n)

    @classmethod
    def column(cls, values: Sequence) -> "Matrix":
        return cls([[v] for v in values], 1)

    @classmethod
    def row(cls, values: Sequence) -> "Matrix":
        return cls([list(values)], len(values))

    # -- access -----------------------------------------------------------
    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_square(self) -> bool:
        return self.rows == self.cols

    def tolist(self) -> list[list]:
        return [list(row) for row in self.entries]

    def flat(self) -> list:
        return [v for row in self.entries for v in row]

    def col(self, c: int) -> list:
        return [row[c] for row in self.entries]

    def transpose(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.entries)) if self.rows else tuple(), self.cols, self.rows)

    @property
    def T(self) -> "Matrix":
        return self.transpose()

    def map(self, fn: Callable) -> "Matrix":
        return Matrix._raw(tuple(tuple(fn(v) for v in row) for row in self.entries), self.rows, self.cols)

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def trace(self):
        if not self.is_square():
            raise NonSquare("trace of a non-square matrix")
        acc = Fraction(0)
        for k in range(self.rows):
            acc = acc + self.entries[k][k]
        return acc

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            return False
        return all(a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb))

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return Matrix._raw(tuple(tuple(a + b for a, b in zip(ra, rb))
                                 for ra, rb in zip(self.entries, other.entries)), self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return self.map(lambda v: -v)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ShapeMismatch(f"{self.shape} * {other.shape}")
            ot = other.transpose().entries
            out = []
            for row in self.entries:
                out_row = []
                for ocol in ot:
                    acc = Fraction(0)
                    for a, b in zip(row, ocol):
                        if a != 0 and b != 0:
                            acc = acc + a * b
                    out_row.append(acc)
                out.append(tuple(out_row))
            return Matrix._raw(tuple(out), self.rows, other.cols)
        return self.map(lambda v: v * other)

    def __rmul__(self, scalar):
        return self.map(lambda v: scalar * v)

    def __pow__(self, e: int) -> "Matrix":
        if not self.is_square():
            raise NonSquare("power of a non-square matrix")
        if e < 0:
            return mat_inverse(self) ** (-e)
        result, base = Matrix.identity(self.rows), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return "Matrix(" + repr([[str(v) for v in row] for row in self.entries]) + ")"

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows:
            raise ShapeMismatch("hstack row mismatch")
        return Matrix._raw(tuple(a + b for a, b in zip(self.entries, other.entries)),
                           self.rows, self.cols + other.cols)

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ShapeMismatch("vstack column mismatch")
        return Matrix._raw(self.entries + other.entries, self.rows + other.rows, self.cols)


def _lift(v):
    if isinstance(v, int) and not isinstance(v, bool):
        return Fraction(v)
    if isinstance(v, Poly):
        from .ratfunc import RatFunc
        return RatFunc(v)
    return v


# -- elimination ----------------------------------------------------------

def _rref(rows: list[list], ncols: int | None = None):
    """In-place reduced row echelon form. Returns pivot column list."""
    if not rows:
        return []
    ncols = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = None
        for k in range(r, nrows):
            if rows[k][c] != 0:
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv if v != 0 else v for v in rows[r]]
        for k in range(nrows):
            if k != r:
                f = rows[k][c]
                if f != 0:
                    prow = rows[r]
                    rows[k] = [a - f * b if b != 0 else a for a, b in zip(rows[k], prow)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def mat_det(M: Matrix):
    """Determinant by Gaussian elimination over the entry field."""
    if not M.is_square():
        raise NonSquare(f"determinant of a {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return Fraction(1)
    a = [list(row) for row in M.entries]
    det = Fraction(1)
    for c in range(n):
        piv = next((k for k in range(c, n) if a[k][c] != 0), None)
        if piv is None:
            return Fraction(0) * a[0][0]
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        p = a[c][c]
        det = det * p
        inv = 1 / p
        for k in range(c + 1, n):
            f = a[k][c]
            if f != 0:
                f = f * inv
                a[k] = [x - f * y if y != 0 else x for x, y in zip(a[k], a[c])]
    return det


def mat_rank(M: Matrix) -> int:
    rows = [list(r) for r in M.entries]
    return len(_rref(rows, M.cols))


def mat_inverse(M: Matrix) -> Matrix:
    if not M.is_square():
        raise NonSquare(f"inverse of a {M.rows}x{M.cols} matrix")
    n = M.rows
    one = Fraction(1)
    rows = [list(row) + [one if r == c else Fraction(0) for c in range(n)]
            for r, row in enumerate(M.entries)]
    pivots = _rref(rows, n)
    if len(pivots) < n:
        raise Singular("matrix is singular")
    inv = Matrix._raw(tuple(tuple(row[n:]) for row in rows), n, n)
    return inv


def mat_nullspace(M: Matrix) -> list[Matrix]:
    """Basis of the right kernel as column vectors (empty when trivial)."""
    rows = [list(r) for r in M.entries]
    pivots = _rref(rows, M.cols)
    free = [c for c in range(M.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        vec = [Fraction(0)] * M.cols
        vec[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -rows[r][f]
        basis.append(Matrix._raw(tuple((v,) for v in vec), M.cols, 1))
    return basis


def solve_linear(A: Matrix, b: Matrix) -> Matrix | None:
    """One exact solution of A x = b (free variables set to zero), or None."""
    if A.rows != b.rows:
        raise ShapeMismatch("solve_linear: row count mismatch")
    n = A.cols
    rows = [list(ra) + list(rb) for ra, rb in zip(A.entries, b.entries)]
    pivots = _rref(rows, n)
    for r in range(len(pivots), A.rows):
        if any(v != 0 for v in rows[r][n:]):
            return None
    sol = [[Fraction(0)] * b.cols for _ in range(n)]
    for r, pc in enumerate(pivots):
        sol[pc] = rows[r][n:]
    x = Matrix._raw(tuple(tuple(r) for r in sol), n, b.cols)
    if A * x != b:
        raise ArithmeticError("solve_linear: verification failed")
    return x


def char_poly_adjugate(M: Matrix, var_sign: str = "minus") -> tuple[Poly, list[Matrix]]:
    """Characteristic polynomial and adjugate coefficients of ``M -/+ t*1``.

    Returns ``(d, [C_0, C_1, ...])`` with ``d(t) = det(M - t*1)`` and
    ``adj(M - t*1) = sum_m C_m t**m`` for ``var_sign="minus"`` (``M + t*1``
    for ``"plus"``). Faddeev-LeVerrier recursion over the rationals; the
    product identity ``(M -/+ t)*adj = d*1`` is checked before returning.
    """
    if not M.is_square():
        raise NonSquare("char_poly_adjugate needs a square matrix")
    if var_sign not in ("minus", "plus"):
        raise ValueError("var_sign must be 'minus' or 'plus'")
    n = M.rows
    if n == 0:
        return Poly((1,)), []
    ident = Matrix.identity(n)
    # p(l) = det(l*1 - M) = sum c[k] l^k ; adj(l*1 - M) = sum_{k=1..n} B_k l^(n-k)
    c = [Fraction(0)] * (n + 1)
    c[n] = Fraction(1)
    B_prev = Matrix.zeros(n, n)
    Bs = []
    for k in range(1, n + 1):
        Bk = M * B_prev + ident * c[n - k + 1]
        Bs.append(Bk)
        c[n - k] = -(M * Bk).trace() / k
        B_prev = Bk
    # adj coefficients in l: coefficient of l^m is B_{n-m}
    adj_l = [Bs[n - 1 - m] for m in range(n)]
    sign_det = Fraction(-1) ** n
    sign_adj = Fraction(-1) ** (n - 1)
    if var_sign == "minus":
        # M - t = -(t - M): det = (-1)^n p(t), adj = (-1)^(n-1) adj(t - M)
        det_poly = Poly([sign_det * ck for ck in c])
        adj = [Bm * sign_adj for Bm in adj_l]
    else:
        # M + t = -((-t) - M): substitute l = -t
        det_poly = Poly([sign_det * ck * (-1) ** k for k, ck in enumerate(c)])
        adj = [Bm * (sign_adj * (-1) ** m) for m, Bm in enumerate(adj_l)]
    _check_adjugate(M, det_poly, adj, -1 if var_sign == "minus" else 1)
    return det_poly, adj


def _check_adjugate(M: Matrix, det_poly: Poly, adj: list[Matrix], s: int) -> None:
    """Verify (M + s*t)*sum C_m t^m == det(t)*1 coefficientwise."""
    n = M.rows
    ident = Matrix.identity(n)
    for k in range(n + 1):
        lhs = Matrix.zeros(n, n)
        if k < len(adj):
            lhs = lhs + M * adj[k]
        if 1 <= k <= len(adj):
            lhs = lhs + adj[k - 1] * s
        if lhs != ident * det_poly[k]:
            raise ArithmeticError("adjugate identity failed")
