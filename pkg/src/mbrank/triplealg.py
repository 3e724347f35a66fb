"""111-algebras: triples (X, Y, Z) acting identically through each factor."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import QQ, Matrix, rank_and_kernel, solve
from .modules import FiniteModule, dual_module, is_cyclic
from .tensor import Tensor3, genericity_pattern


class NotSharpError(ValueError):
    """The 111-algebra dimension differs from m."""


@dataclass
class TripleAlgebra:
    basis: list  # list of (X, Y, Z) Matrix triples, echelon-canonical
    contains_unit: bool
    concise_input: bool

    @property
    def dim(self):
        return len(self.basis)

    def is_closed(self):
        """Componentwise products of basis triples solve into the span."""
        if not self.basis:
            return True
        m = self.basis[0][0].rows
        span = Matrix(
            QQ, [_flatten_triple(t, m) for t in self.basis]
        ).transpose()
        for t1 in self.basis:
            for t2 in self.basis:
                prod = (t1[0] * t2[0], t1[1] * t2[1], t1[2] * t2[2])
                if solve(span, _flatten_triple(prod, m)) is None:
                    return False
        return True


def _flatten_triple(triple, m):
    out = []
    for mat in triple:
        out.extend(mat[i, j] for i in range(m) for j in range(m))
    return out


def one_one_one_algebra(t: Tensor3) -> TripleAlgebra:
    """Kernel of the stacked system (X o_A T = Y o_B T = Z o_C T).

    Unknown order: X row-major, then Y, then Z.  For non-concise input the
    algebra is still returned; conciseness of the input is flagged because
    only then are the factor projections guaranteed one-to-one.
    """
    m = t.m
    ncols = 3 * m * m
    rows = []
    for k in range(m):
        for i in range(m):
            for j in range(m):
                row_xy = [Fraction(0)] * ncols
                row_xz = [Fraction(0)] * ncols
                for a in range(m):
                    c = t.coeffs[a][i][j]
                    if c:
                        row_xy[k * m + a] += c
                        row_xz[k * m + a] += c
                for b in range(m):
                    c = t.coeffs[k][b][j]
                    if c:
                        row_xy[m * m + i * m + b] -= c
                for cc in range(m):
                    c = t.coeffs[k][i][cc]
                    if c:
                        row_xz[2 * m * m + j * m + cc] -= c
                rows.append(row_xy)
                rows.append(row_xz)
    _, kernel = rank_and_kernel(Matrix(QQ, rows))
    basis = [
        (
            Matrix(QQ, [v[i * m : (i + 1) * m] for i in range(m)]),
            Matrix(QQ, [v[m * m + i * m : m * m + (i + 1) * m] for i in range(m)]),
            Matrix(QQ, [v[2 * m * m + i * m : 2 * m * m + (i + 1) * m] for i in range(m)]),
        )
        for v in kernel
    ]
    unit = _unit_triple(m)
    span = Matrix(QQ, [_flatten_triple(b, m) for b in basis]).transpose() if basis else None
    contains_unit = bool(basis) and solve(span, _flatten_triple(unit, m)) is not None
    concise = genericity_pattern(t).concise
    return TripleAlgebra(basis, contains_unit, concise)


def _unit_triple(m):
    ident = Matrix.identity(QQ, m)
    return (ident, ident, ident)


def rebased_triples(alg: TripleAlgebra):
    """Basis with the unit triple first, the rest in kernel order."""
    if not alg.contains_unit:
        raise NotSharpError("111-algebra does not contain the unit triple")
    m = alg.basis[0][0].rows
    span = Matrix(QQ, [_flatten_triple(b, m) for b in alg.basis]).transpose()
    coeffs = solve(span, _flatten_triple(_unit_triple(m), m))
    pivot = next(k for k, c in enumerate(coeffs) if c != 0)
    return [_unit_triple(m)] + [b for k, b in enumerate(alg.basis) if k != pivot]


def coordinate_modules(t: Tensor3):
    """The three factor modules over the 111-algebra, presented via S.

    Requires 111-sharpness (dimension exactly m); the canonical basis puts
    the unit triple first and projects the rest to each factor.
    """
    alg = one_one_one_algebra(t)
    if alg.dim != t.m:
        raise NotSharpError(f"111-algebra has dimension {alg.dim}, expected {t.m}")
    triples = rebased_triples(alg)
    mods = []
    for comp in range(3):
        acts = [tr[comp] for tr in triples[1:]]
        mods.append(FiniteModule(acts, m=t.m, field=QQ))
    return tuple(mods)


@dataclass
class BilinearDiagnostics:
    surjective: bool
    left_nondegenerate: bool
    right_nondegenerate: bool
    cyclic_M: bool
    cyclic_N: bool
    cyclic_P_dual: bool
    one_star_generic: bool

    @property
    def flags_match_genericity(self):
        return (self.cyclic_M or self.cyclic_N or self.cyclic_P_dual) == self.one_star_generic


def bilinear_map_diagnostics(t: Tensor3) -> BilinearDiagnostics:
    """The induced map A^v x B^v -> C read off the C-flattening transpose.

    Surjectivity and nondegeneracy are rank checks on the flattenings; the
    cyclicity flags live on the coordinate modules M = A-module dual,
    N = B-module dual, P = C-module.
    """
    m = t.m
    mod_a, mod_b, mod_c = coordinate_modules(t)
    rows_surj = [
        [t.coeffs[k][i][j] for j in range(m)]
        for k in range(m)
        for i in range(m)
    ]
    surjective = rank_and_kernel(Matrix(QQ, rows_surj))[0] == m
    flat_a = Matrix(QQ, [[t.coeffs[k][i][j] for i in range(m) for j in range(m)] for k in range(m)])
    flat_b = Matrix(
        QQ, [[t.coeffs[k][i][j] for k in range(m) for j in range(m)] for i in range(m)]
    )
    left_nondeg = rank_and_kernel(flat_a)[0] == m
    right_nondeg = rank_and_kernel(flat_b)[0] == m
    pattern = genericity_pattern(t)
    return BilinearDiagnostics(
        surjective=surjective,
        left_nondegenerate=left_nondeg,
        right_nondegenerate=right_nondeg,
        cyclic_M=is_cyclic(dual_module(mod_a)),
        cyclic_N=is_cyclic(dual_module(mod_b)),
        cyclic_P_dual=is_cyclic(dual_module(mod_c)),
        one_star_generic=pattern.one_star_generic,
    )
