"""Exact scalar tower: rationals, polynomials, rational functions, matrices."""
from .rational import (Rational, SchemaError, check_q, format_rational, parse_rational,
                       q_log, valuation, valuation_prime)
from .poly import Poly, poly_gcd, poly_lcm, poly_xgcd
from .ratfunc import RatFunc
from .matrix import (Matrix, NonSquare, Singular, ShapeMismatch, char_poly_adjugate,
                     mat_det, mat_inverse, mat_nullspace, mat_rank, solve_linear)
from .sparse import solve_sparse, to_exact_num

__all__ = [
    "Rational", "SchemaError", "check_q", "format_rational", "parse_rational", "q_log",
    "valuation", "valuation_prime", "Poly", "poly_gcd", "poly_lcm", "poly_xgcd", "RatFunc",
    "Matrix", "NonSquare", "Singular", "ShapeMismatch", "char_poly_adjugate", "mat_det",
    "mat_inverse", "mat_nullspace", "mat_rank", "solve_linear", "solve_sparse", "to_exact_num",
]
