"""Exact scalar and matrix arithmetic over Q, F_p (p >= 5) and Q(t)."""

from fractions import Fraction

from .fields import GF, QQ, BadPrimeError, FieldMismatchError, PrimeField
from .linalg import (
    Matrix,
    det,
    hstack,
    in_span,
    inverse,
    rank,
    rank_and_kernel,
    reduce_matrix_mod_p,
    rref,
    solve,
    span_rank,
    vstack,
)
from .mpoly import MPoly, SizeLimitError, symbolic_det
from .upoly import QT, Poly, RatFunc, parse_poly, parse_ratfunc, poly_gcd


def reduce_mod_p(x, p: int):
    """Entrywise reduction n/d -> n * d^{-1} mod p for scalars and matrices."""
    field = GF(p)
    if isinstance(x, Matrix):
        return reduce_matrix_mod_p(x, field)
    return field.from_fraction(Fraction(x))


__all__ = [
    "QQ",
    "GF",
    "QT",
    "PrimeField",
    "BadPrimeError",
    "FieldMismatchError",
    "Matrix",
    "rref",
    "rank",
    "rank_and_kernel",
    "solve",
    "inverse",
    "det",
    "hstack",
    "vstack",
    "span_rank",
    "in_span",
    "reduce_mod_p",
    "MPoly",
    "symbolic_det",
    "SizeLimitError",
    "Poly",
    "RatFunc",
    "parse_poly",
    "parse_ratfunc",
    "poly_gcd",
]
