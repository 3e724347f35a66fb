"""Degeneration families, their verifier, non-degeneration certificates,
diagram checking and the orbit-count arithmetic.

A family is a triple of matrices over Q(t) plus a factor permutation; its
orientation is pinned as T_t = (gA (x) gB (x) gC) . sigma(T_source) with
T_0 equal to the target coefficientwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalog import Catalog, load_catalog
from .exact import GF, QQ, QT, Matrix, Poly, RatFunc, det, parse_ratfunc
from .kernels import count_low_rank
from .modules import FiniteModule, support_decomposition
from .tensor import Tensor3, permute_tensor, slices

PROBE_PRIMES = (5, 7, 11, 13, 17)
GRADED_LIMIT_PAIRS = {
    ("T_{1,4}", "T_{1,12}"): ("T_{1,15}",),
    ("T_{1,5}", "T_{1,13}"): ("T_{1,15}",),
}


class UnsupportedMergeError(ValueError):
    pass


class UnstableFitError(ArithmeticError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

@dataclass
class DegenerationFamily:
    source: str
    target: str
    sigma: str
    g_a: Matrix  # over QT
    g_b: Matrix
    g_c: Matrix

    def to_json(self):
        def mat(mx):
            return [[QT.to_str(x) for x in row] for row in mx.data]

        return {
            "source": self.source,
            "target": self.target,
            "sigma": self.sigma,
            "gA": mat(self.g_a),
            "gB": mat(self.g_b),
            "gC": mat(self.g_c),
        }

    @classmethod
    def from_json(cls, obj):
        def mat(rows):
            return Matrix(QT, [[parse_ratfunc(s) for s in row] for row in rows])

        return cls(obj["source"], obj["target"], obj["sigma"], mat(obj["gA"]), mat(obj["gB"]), mat(obj["gC"]))


@dataclass
class FamilyReport:
    family: DegenerationFamily
    ok: bool
    failures: list

    def to_json(self):
        return {
            "source": self.family.source,
            "target": self.family.target,
            "ok": self.ok,
            "failures": self.failures,
        }


def _qt_tensor(t: Tensor3):
    return [[[QT.coerce(t.coeffs[k][i][j]) for j in range(t.m)] for i in range(t.m)] for k in range(t.m)]


def _apply_factor(coeffs, g: Matrix, axis: int, m: int):
    out = [[[QT.zero for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for k in range(m):
        for i in range(m):
            for j in range(m):
                c = coeffs[k][i][j]
                if c.is_zero():
                    continue
                for n in range(m):
                    if axis == 0:
                        gv = g[n, k]
                        if not gv.is_zero():
                            out[n][i][j] = out[n][i][j] + gv * c
                    elif axis == 1:
                        gv = g[n, i]
                        if not gv.is_zero():
                            out[k][n][j] = out[k][n][j] + gv * c
                    else:
                        gv = g[n, j]
                        if not gv.is_zero():
                            out[k][i][n] = out[k][i][n] + gv * c
    return out


def family_tensor(fam: DegenerationFamily, source: Tensor3):
    """Coefficients of T_t over Q(t)."""
    src = permute_tensor(source, fam.sigma)
    coeffs = _qt_tensor(src)
    coeffs = _apply_factor(coeffs, fam.g_a, 0, source.m)
    coeffs = _apply_factor(coeffs, fam.g_b, 1, source.m)
    coeffs = _apply_factor(coeffs, fam.g_c, 2, source.m)
    return coeffs


def verify_family(fam: DegenerationFamily, catalog: Catalog | None = None) -> FamilyReport:
    """Checks: generically invertible matrices, polynomial coefficients
    after exact cancellation, and exact limit at t = 0."""
    catalog = catalog or load_catalog()
    failures = []
    src = catalog.tensor_of(fam.source)
    tgt = catalog.tensor_of(fam.target)
    for label, g in (("gA", fam.g_a), ("gB", fam.g_b), ("gC", fam.g_c)):
        if g.rows != src.m or g.cols != src.m:
            failures.append((label, "wrong shape"))
            continue
        if det(g).is_zero():
            failures.append((label, "determinant vanishes identically"))
    if failures:
        return FamilyReport(fam, False, failures)
    coeffs = family_tensor(fam, src)
    m = src.m
    for k in range(m):
        for i in range(m):
            for j in range(m):
                c = coeffs[k][i][j]
                v = c.valuation()
                if v is not None and v < 0:
                    failures.append(("coefficient", f"T_t[{k}][{i}][{j}] = {c} has a pole at t = 0"))
    if failures:
        return FamilyReport(fam, False, failures)
    for k in range(m):
        for i in range(m):
            for j in range(m):
                if coeffs[k][i][j].eval_at_zero() != tgt.coeffs[k][i][j]:
                    failures.append(
                        (
                            "limit",
                            f"T_0[{k}][{i}][{j}] = {coeffs[k][i][j].eval_at_zero()} "
                            f"!= {tgt.coeffs[k][i][j]}",
                        )
                    )
    return FamilyReport(fam, not failures, failures)


def identity_family(name: str, catalog: Catalog | None = None) -> DegenerationFamily:
    catalog = catalog or load_catalog()
    m = catalog.get_entry(name).m
    ident = Matrix.identity(QT, m)
    return DegenerationFamily(name, name, "ABC", ident, ident, ident)


# -- support-collision constructor ------------------------------------------

@dataclass
class PieceLayout:
    basis: list  # ambient indices ordered as unit, u, u^2, ...
    degree: int
    jet_vars: list  # 0-based action indices for u, u^2, ...
    delta_var: int | None
    point: tuple


def derive_layout(mod: FiniteModule):
    """Curvilinear piece layout of a catalog algebra module (standard basis
    blocks, one jet chain per piece, one delta variable per off-origin piece)."""
    dec = support_decomposition(mod)
    layouts = []
    for piece in dec.pieces:
        idxs = []
        for col in piece.basis:
            nz = [i for i, x in enumerate(col) if x != 0]
            if len(nz) != 1 or col[nz[0]] != 1:
                raise UnsupportedMergeError("piece basis is not a standard block")
            idxs.append(nz[0])
        local = piece.local_module
        deg = local.m
        delta = None
        for v, lam in enumerate(piece.point):
            if lam == 1:
                if delta is not None:
                    raise UnsupportedMergeError("piece supported off the vertex frame")
                delta = v
            elif lam != 0:
                raise UnsupportedMergeError("piece supported off the vertex frame")
        if deg == 1:
            layouts.append(PieceLayout([idxs[0]], 1, [], delta, piece.point))
            continue
        # principal nilpotent: the unique variable of full nilpotency order
        principal = None
        for v in range(local.nvars):
            power = local.actions[v]
            for _ in range(deg - 2):
                power = power * local.actions[v]
            if not power.is_zero():
                if principal is not None:
                    raise UnsupportedMergeError("piece is not curvilinear")
                principal = v
        if principal is None:
            raise UnsupportedMergeError("piece is not curvilinear")
        n_mat = local.actions[principal]
        jets = [principal]
        power = n_mat
        for k in range(2, deg):
            power = power * n_mat
            matches = [
                v
                for v in range(local.nvars)
                if v not in jets and local.actions[v] == power and v != delta
            ]
            if len(matches) != 1:
                raise UnsupportedMergeError("jet variables do not follow the power pattern")
            jets.append(matches[0])
        # order the basis along the chain: unit is the vector outside im(N)
        col_space_rows = set()
        for i in range(deg):
            for j in range(deg):
                if n_mat[i, j] != 0:
                    col_space_rows.add(i)
        unit = [k for k in range(deg) if k not in col_space_rows]
        if len(unit) != 1:
            raise UnsupportedMergeError("jet chain has no unique unit")
        chain = [unit[0]]
        vec = [QQ.one if r == unit[0] else QQ.zero for r in range(deg)]
        for _ in range(deg - 1):
            vec = n_mat.matvec(vec)
            nz = [i for i, x in enumerate(vec) if x != 0]
            if len(nz) != 1 or vec[nz[0]] != 1:
                raise UnsupportedMergeError("jet chain is not monomial")
            chain.append(nz[0])
        layouts.append(PieceLayout([idxs[c] for c in chain], deg, jets, delta, piece.point))
    return layouts


def collision_family(
    source_name: str,
    target_name: str,
    merge_groups,
    catalog: Catalog | None = None,
) -> DegenerationFamily:
    """Family merging source point clusters into the target's clusters.

    merge_groups lists, per target piece (in support order), the source piece
    indices feeding it: either [i] (copied) or [base, mover], where the mover
    slides along the base's jet line with parameter t.
    """
    catalog = catalog or load_catalog()
    src_mod = catalog.module_of(source_name)
    tgt_mod = catalog.module_of(target_name)
    src_layout = derive_layout(src_mod)
    tgt_layout = derive_layout(tgt_mod)
    if len(merge_groups) != len(tgt_layout):
        raise UnsupportedMergeError("one group per target piece required")
    m = src_mod.m
    nvars = src_mod.nvars
    zero = QT.zero
    one = QT.one
    tpoly = QT.coerce(Poly.t())
    q_cols = [[zero] * m for _ in range(m)]  # q_cols[row][col]
    var_rows = [[zero] * (nvars + 1) for _ in range(nvars + 1)]
    var_rows[0][0] = one

    def tpow(k):
        if k == 0:
            return one
        return QT.coerce(Poly([0] * k + [1]))

    used = []
    for tgt_piece, group in zip(tgt_layout, merge_groups):
        used.extend(group)
        if len(group) == 1:
            src_piece = src_layout[group[0]]
            if src_piece.degree != tgt_piece.degree:
                raise UnsupportedMergeError("copied piece degrees disagree")
            for k in range(src_piece.degree):
                q_cols[src_piece.basis[k]][tgt_piece.basis[k]] = one
            for k, tv in enumerate(tgt_piece.jet_vars):
                var_rows[tv + 1][src_piece.jet_vars[k] + 1] = one
            if tgt_piece.delta_var is not None:
                if src_piece.delta_var is None:
                    raise UnsupportedMergeError("copied piece lost its vertex variable")
                var_rows[tgt_piece.delta_var + 1][src_piece.delta_var + 1] = one
            continue
        if len(group) != 2:
            raise UnsupportedMergeError("groups merge at most two pieces")
        base, mover = src_layout[group[0]], src_layout[group[1]]
        a, b = base.degree, mover.degree
        if a + b != tgt_piece.degree:
            raise UnsupportedMergeError("group degrees do not sum to the target piece")
        if mover.delta_var is None:
            raise UnsupportedMergeError("mover must sit away from the origin")
        if (tgt_piece.delta_var is None) != (base.delta_var is None):
            raise UnsupportedMergeError("base and target vertex variables disagree")
        mover_vars = [mover.delta_var] + list(mover.jet_vars)  # u^0, u^1, ... on the mover
        # basis columns u^0 .. u^{a+b-1}
        for k in range(a + b):
            col = tgt_piece.basis[k]
            if k < a:
                q_cols[base.basis[k]][col] = one
            for j in range(min(k, b - 1) + 1):
                coef = math.comb(k, j)
                q_cols[mover.basis[j]][col] = QT.coerce(Poly([0] * (k - j) + [coef]))
        # variable rows for the target jets u^1 .. u^{a+b-1}
        for k, tv in enumerate(tgt_piece.jet_vars, start=1):
            row = var_rows[tv + 1]
            if k < a:
                row[base.jet_vars[k - 1] + 1] = row[base.jet_vars[k - 1] + 1] + one
            for j in range(min(k, b - 1) + 1):
                coef = math.comb(k, j)
                row[mover_vars[j] + 1] = row[mover_vars[j] + 1] + QT.coerce(
                    Poly([0] * (k - j) + [coef])
                )
        if tgt_piece.delta_var is not None:
            row = var_rows[tgt_piece.delta_var + 1]
            row[base.delta_var + 1] = row[base.delta_var + 1] + one
            row[mover.delta_var + 1] = row[mover.delta_var + 1] + one
    if sorted(used) != list(range(len(src_layout))):
        raise UnsupportedMergeError("every source piece must be used exactly once")
    q = Matrix(QT, q_cols)
    from .exact import inverse as _inverse

    fam = DegenerationFamily(
        source_name,
        target_name,
        "ABC",
        Matrix(QT, var_rows),
        _inverse(q),
        q.transpose(),
    )
    report = verify_family(fam, catalog)
    if not report.ok:
        raise UnsupportedMergeError(f"constructed family fails verification: {report.failures[:3]}")
    return fam


SPINE_MERGES = [
    ("T_{5,1}", "T_{4,1}", [[0, 1], [2], [3], [4]]),
    ("T_{4,1}", "T_{3,1}", [[0, 1], [2], [3]]),
    ("T_{4,1}", "T_{3,3}", [[0], [2, 1], [3]]),
    ("T_{3,1}", "T_{2,1}", [[0], [2, 1]]),
    ("T_{3,1}", "T_{2,3}", [[0, 1], [2]]),
    ("T_{3,3}", "T_{2,1}", [[0, 2], [1]]),
    ("T_{3,3}", "T_{2,3}", [[0, 1], [2]]),
    ("T_{2,1}", "T_{1,1}", [[0, 1]]),
    ("T_{2,3}", "T_{1,1}", [[0, 1]]),
]


def _t27_to_t28() -> DegenerationFamily:
    """Scale the rank-2 block line into the rank-1 line."""
    t = RatFunc(Poly.t())
    inv_t = RatFunc(Poly.const(1), Poly.t())
    one = QT.one
    zero = QT.zero

    def diag(*entries):
        return Matrix(QT, [[entries[i] if i == j else zero for j in range(5)] for i in range(5)])

    g_a = diag(one, one, one, inv_t, one)
    g_b = diag(one, one, one, t, one)
    g_c = diag(one, one, one, inv_t, one)
    return DegenerationFamily("T_{2,7}", "T_{2,8}", "ABC", g_a, g_b, g_c)


def _t11_to_t111() -> DegenerationFamily:
    """Flatten the length-5 jet chain onto the 2x3 Hankel block space by the
    filtration rescaling; the variable slots reverse and pick up one power
    of t each."""
    t = RatFunc(Poly.t())
    inv_t = RatFunc(Poly.const(1), Poly.t())
    one = QT.one
    zero = QT.zero
    rows = [[zero] * 5 for _ in range(5)]
    rows[0][0] = one
    for slot in range(1, 5):
        rows[slot][5 - slot] = t
    g_a = Matrix(QT, rows)
    g_b = Matrix(
        QT,
        [
            [
                (one if i == j else zero) if i < 3 else (inv_t if i == j else zero)
                for j in range(5)
            ]
            for i in range(5)
        ],
    )
    g_c = Matrix(
        QT,
        [
            [
                (one if i == j else zero) if i < 3 else (t if i == j else zero)
                for j in range(5)
            ]
            for i in range(5)
        ],
    )
    return DegenerationFamily("T_{1,1}", "T_{1,11}", "ABC", g_a, g_b, g_c)


def constructed_families(catalog: Catalog | None = None):
    catalog = catalog or load_catalog()
    fams = [collision_family(s, t, g, catalog) for s, t, g in SPINE_MERGES]
    fams.append(_t27_to_t28())
    fams.append(_t11_to_t111())
    return fams


# ---------------------------------------------------------------------------
# d-invariants
# ---------------------------------------------------------------------------

@dataclass
class DInvariantReport:
    direction: str
    r: int
    counts: dict  # prime -> N_p
    slope: float
    dimension: int
    residual: float

    def to_json(self):
        return {
            "direction": self.direction,
            "r": self.r,
            "counts": {str(p): n for p, n in self.counts.items()},
            "slope": self.slope,
            "dimension": self.dimension,
            "residual": self.residual,
        }


def d_invariant(t: Tensor3, direction: str, r: int, primes=PROBE_PRIMES) -> DInvariantReport:
    """Affine dimension of the locus of slice combinations of rank below r,
    fitted from point counts over the probe primes.

    The threshold is strict (rank <= r - 1): that is the convention under
    which the reference values 4/4/4, 3/3/3, {3,1,3} and {2,2,2} come out
    for the anchor tensors."""
    sl = slices(t, direction)
    counts = {}
    for p in primes:
        good = all(x.denominator % p for s in sl for row in s.data for x in row)
        if not good:
            continue
        gf = GF(p)
        int_slices = [
            [[gf.from_fraction(s[i, j]) for j in range(t.m)] for i in range(t.m)] for s in sl
        ]
        counts[p] = count_low_rank(int_slices, p, r - 1)
    if len(counts) < 3:
        raise UnstableFitError("fewer than 3 good primes")
    xs = [math.log(p) for p in counts]
    ys = [math.log(max(n, 1)) for n in counts.values()]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    sxx = sum((x - xbar) ** 2 for x in xs)
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    dim = round(slope)
    residual = abs(slope - dim)
    report = DInvariantReport(direction, r, counts, slope, dim, residual)
    if residual >= 0.2:
        raise UnstableFitError(f"residual {residual:.3f} >= 0.2", report)
    return report


def d_invariant_triple(t: Tensor3, r: int, primes=PROBE_PRIMES):
    """Per-direction dimensions (None where the fit is unstable)."""
    out = {}
    for d in "ABC":
        try:
            out[d] = d_invariant(t, d, r, primes).dimension
        except UnstableFitError:
            out[d] = None
    return out
