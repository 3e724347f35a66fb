"""Small matrix pencils: trace complements, the six 2x3 classes, block modules.

A 2-dim pencil of 2x3 matrices is classified by its rank-1 locus: the gcd of
the three 2x2 minors of a*w1 + b*w2 as a binary quadratic, plus image/kernel
dimensions when every element has rank <= 1.  Root multiplicity is read off
the discriminant so nothing requires rational roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import QQ, Matrix, Poly, poly_gcd, rank_and_kernel, vstack, hstack
from .modules import FiniteModule


class InvalidPencilError(ValueError):
    pass


class NotSubcaseError(ValueError):
    """The block space does not have socle = mM of dimension 2."""


@dataclass(frozen=True)
class PencilClass:
    label: str
    generic_rank: int
    rank_one_divisor_degree: int
    discriminant_zero: bool | None
    common_kernel_dim: int
    image_span_dim: int


def trace_complement(space, b: int, c: int):
    """Perp of a list of b x c matrices under (X, Y) -> tr(X Y^T)."""
    if not space:
        return [
            Matrix(QQ, [[1 if (i, j) == (r, s) else 0 for j in range(c)] for i in range(b)])
            for r in range(b)
            for s in range(c)
        ]
    flat = Matrix(QQ, [[m[i, j] for i in range(b) for j in range(c)] for m in space])
    _, kernel = rank_and_kernel(flat)
    return [Matrix(QQ, [v[i * c : (i + 1) * c] for i in range(b)]) for v in kernel]


def _binary_minors(w1: Matrix, w2: Matrix):
    """2x2 minors of a*w1 + b*w2 as (coeff of a^2, ab, b^2) triples."""
    minors = []
    for c1 in range(3):
        for c2 in range(c1 + 1, 3):
            # det of columns (c1, c2) of a*w1 + b*w2
            a2 = w1[0, c1] * w1[1, c2] - w1[0, c2] * w1[1, c1]
            b2 = w2[0, c1] * w2[1, c2] - w2[0, c2] * w2[1, c1]
            ab = (
                w1[0, c1] * w2[1, c2]
                + w2[0, c1] * w1[1, c2]
                - w1[0, c2] * w2[1, c1]
                - w2[0, c2] * w1[1, c1]
            )
            minors.append((a2, ab, b2))
    return minors


def _binary_gcd(forms):
    """Gcd of binary quadratics given as (a^2, ab, b^2) coefficient triples.

    Returns (degree, coefficients of the gcd as a binary form of that degree,
    highest a-power first)."""
    nonzero = [f for f in forms if any(f)]
    if not nonzero:
        return -1, ()
    polys = []
    bvals = []
    for a2, ab, b2 in nonzero:
        u = Poly([b2, ab, a2])  # substitute b = 1, coefficient of x^k is a^k part
        v = 2 - u.degree  # power of b dividing the form
        polys.append(u)
        bvals.append(v)
    g = polys[0]
    for u in polys[1:]:
        g = poly_gcd(g, u)
    bmin = min(bvals)
    deg = g.degree + bmin
    coeffs = [Fraction(0)] * (deg + 1)  # index = power of a
    for k, c in enumerate(g.coeffs):
        coeffs[k] = c
    return deg, tuple(reversed(coeffs))


@dataclass(frozen=True)
class Pencil:
    shape: str  # "2x2-line" | "2x3-pencil"
    basis: tuple

    @classmethod
    def line(cls, mat):
        return cls("2x2-line", (mat,))

    @classmethod
    def of(cls, w1, w2):
        return cls("2x3-pencil", (w1, w2))


def classify_pencil(p: Pencil) -> PencilClass:
    if p.shape == "2x2-line":
        (mat,) = p.basis
        if mat.rows != 2 or mat.cols != 2 or mat.is_zero():
            raise InvalidPencilError("a 2x2 line needs one nonzero 2x2 matrix")
        r = rank_and_kernel(mat)[0]
        return PencilClass(
            label="Rank1Line" if r == 1 else "Rank2Line",
            generic_rank=r,
            rank_one_divisor_degree=-1,
            discriminant_zero=None,
            common_kernel_dim=2 - r,
            image_span_dim=r,
        )
    w1, w2 = p.basis
    for w in (w1, w2):
        if w.rows != 2 or w.cols != 3:
            raise InvalidPencilError("pencil matrices must be 2x3")
    flat = Matrix(QQ, [[w[i, j] for i in range(2) for j in range(3)] for w in (w1, w2)])
    if rank_and_kernel(flat)[0] != 2:
        raise InvalidPencilError("pencil basis is linearly dependent")
    kernel_dim = 3 - rank_and_kernel(vstack([w1, w2]))[0]
    image_dim = rank_and_kernel(hstack([w1, w2]).transpose())[0]
    minors = _binary_minors(w1, w2)
    deg, coeffs = _binary_gcd(minors)
    if deg == -1:
        # every element has rank <= 1
        if image_dim == 1:
            label = "W15"
        elif kernel_dim == 2:
            label = "W10"
        else:
            raise InvalidPencilError("rank-one pencil with inconsistent image/kernel data")
        return PencilClass(label, 1, -1, None, kernel_dim, image_dim)
    if deg == 0:
        label, disc_zero = "W11", None
    elif deg == 1:
        label, disc_zero = "W12", None
    elif deg == 2:
        a2, ab, b2 = coeffs
        disc = ab * ab - 4 * a2 * b2
        disc_zero = disc == 0
        label = "W14" if disc_zero else "W13"
    else:
        raise InvalidPencilError("minor gcd degree exceeds 2")
    return PencilClass(label, 2, deg, disc_zero, kernel_dim, image_dim)


CANONICAL_PENCILS = {
    "W10": (((0, 0, 1), (0, 0, 0)), ((0, 0, 0), (0, 0, 1))),
    "W11": (((0, 1, 0), (0, 0, 1)), ((1, 0, 0), (0, 1, 0))),
    "W12": (((1, 0, 0), (0, 0, 1)), ((0, 1, 0), (0, 0, 0))),
    "W13": (((0, 1, 0), (0, 0, 1)), ((0, 0, 0), (0, 0, 1))),
    "W14": (((0, 1, 0), (0, 0, 1)), ((0, 0, 1), (0, 0, 0))),
    "W15": (((0, 0, 0), (0, 0, 1)), ((0, 0, 0), (0, 1, 0))),
}


def canonical_pencil(label: str) -> Pencil:
    rows1, rows2 = CANONICAL_PENCILS[label]
    return Pencil.of(Matrix(QQ, rows1), Matrix(QQ, rows2))


def module_from_block_space(blocks) -> FiniteModule:
    """Degree-5 module whose variables act by the given 2x3 blocks
    (rows 4, 5 from columns 1..3)."""
    acts = []
    for blk in blocks:
        rows = [[Fraction(0)] * 5 for _ in range(5)]
        for i in range(2):
            for j in range(3):
                rows[3 + i][j] = blk[i, j]
        acts.append(Matrix(QQ, rows))
    return FiniteModule(acts, m=5, field=QQ)


def pencil_module(label: str) -> FiniteModule:
    """The block module of the 4-dim trace complement of a canonical pencil.

    Only the five classes with socle = mM of dimension 2 produce the block
    normal form; W10's complement has a vector killed by everything outside
    mM (its module shows up elsewhere in the catalog), so it is rejected.
    """
    pen = canonical_pencil(label)
    comp = trace_complement(list(pen.basis), 2, 3)
    if len(comp) != 4:
        raise InvalidPencilError("complement is not 4-dimensional")
    mod = module_from_block_space(comp)
    # subcase shape check: socle equals mM, both of dimension 2
    stacked = vstack(list(mod.actions))
    socle = 5 - rank_and_kernel(stacked)[0]
    image = rank_and_kernel(hstack(list(mod.actions)).transpose())[0]
    if socle != 2 or image != 2:
        raise NotSubcaseError(f"{label}: socle {socle}, mM {image}; not the 2x3 block shape")
    return mod


def n7_module() -> FiniteModule:
    """Degree-4 module with three actions spanning the traceless 2x2 blocks."""
    blocks = [((1, 0), (0, -1)), ((0, 1), (0, 0)), ((0, 0), (1, 0))]
    return _block4(blocks)


def n8_module() -> FiniteModule:
    """Degree-4 module with blocks spanning the y22 = 0 subspace of 2x2."""
    blocks = [((1, 0), (0, 0)), ((0, 1), (0, 0)), ((0, 0), (1, 0))]
    return _block4(blocks)


def _block4(blocks) -> FiniteModule:
    acts = []
    for blk in blocks:
        rows = [[Fraction(0)] * 4 for _ in range(4)]
        for i in range(2):
            for j in range(2):
                rows[2 + i][j] = Fraction(blk[i][j])
        acts.append(Matrix(QQ, rows))
    return FiniteModule(acts, m=4, field=QQ)
