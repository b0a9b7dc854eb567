"""Sparse exact elimination for the large, banded systems behind membership tests."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

try:
    from gmpy2 import mpq as _num
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _num = Fraction


def _to_num(v):
    if type(v) is _num:
        return v
    if isinstance(v, Fraction):
        return _num(v.numerator, v.denominator)
    return _num(v)


to_exact_num = _to_num


def _to_fraction(v) -> Fraction:
    return Fraction(int(v.numerator), int(v.denominator))


def solve_sparse(rows: Sequence[dict], rhs: Sequence[Fraction], order: Sequence | None = None):
    """Solve ``sum_c rows[r][c] * x[c] = rhs[r]`` exactly.

    Returns a dict ``column -> value`` (free columns omitted, i.e. zero) or
    None when the system is inconsistent. ``order`` fixes the column
    elimination order; banded systems stay sparse when it follows the band.
    """
    work = [{c: _to_num(v) for c, v in r.items() if v} for r in rows]
    b = [_to_num(v) for v in rhs]
    col_rows: dict = {}
    for i, r in enumerate(work):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    if order is None:
        order = sorted(col_rows)
    active = set(range(len(work)))
    pivots = []
    for c in order:
        cand = col_rows.get(c)
        if not cand:
            continue
        cand = cand & active
        if not cand:
            continue
        p = min(cand, key=lambda i: (len(work[i]), i))
        active.discard(p)
        prow = work[p]
        pval = prow[c]
        for i in cand:
            if i == p:
                continue
            row = work[i]
            f = row[c] / pval
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    if k not in row:
                        col_rows.setdefault(k, set()).add(i)
                    row[k] = nv
                elif k in row:
                    del row[k]
                    col_rows[k].discard(i)
            b[i] -= f * b[p]
        pivots.append((c, p))
    for i in active:
        if not work[i] and b[i] != 0:
            return None
    sol: dict = {}
    for c, p in reversed(pivots):
        prow = work[p]
        acc = b[p]
        for k, v in prow.items():
            if k != c and k in sol:
                acc -= v * sol[k]
        val = acc / prow[c]
        if val:
            sol[c] = val
    return {c: _to_fraction(v) for c, v in sol.items()}
