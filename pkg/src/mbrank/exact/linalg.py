"""Exact matrices with deterministic elimination.

Pivoting is always "first nonzero in column order" so echelon forms, kernel
bases and solutions are reproducible.  Over Q the forward pass runs
fraction-free on integer-cleared rows (Bareiss-style with gcd trimming) to
keep intermediate entries small; the final reduced form is normalized back to
Fractions, so the output equals the plain RREF.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .fields import QQ, FieldMismatchError


class Matrix:
    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, data):
        self.field = field
        coerce = field.coerce
        self.data = tuple(tuple(coerce(x) for x in row) for row in data)
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    # -- constructors ---------------------------------------------------
    @classmethod
    def identity(cls, field, n):
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, field, rows, cols):
        return cls(field, [[field.zero] * cols for _ in range(rows)])

    @classmethod
    def from_rows(cls, field, rows):
        return cls(field, rows)

    # -- basics ----------------------------------------------------------
    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [self.data[i][j] for i in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.field, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.to_str(x) for x in row) for row in self.data)
        return f"Matrix({self.field}, [{body}])"

    def _check(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldMismatchError(f"mixed fields {self.field} and {other.field}")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __sub__(self, other):
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)])

    def __neg__(self):
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.data])

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.data])

    def __mul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("shape mismatch in product")
        f = self.field
        ocols = list(zip(*other.data))
        out = []
        for r in self.data:
            out.append(
                [
                    _dot(f, r, c)
                    for c in ocols
                ]
            )
        return Matrix(f, out)

    def matvec(self, v):
        f = self.field
        v = [f.coerce(x) for x in v]
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return [_dot(f, row, v) for row in self.data]

    def transpose(self):
        return Matrix(self.field, list(zip(*self.data))) if self.data else self

    def is_zero(self):
        f = self.field
        return all(f.is_zero(x) for row in self.data for x in row)

    def map_entries(self, field, fn):
        return Matrix(field, [[fn(x) for x in row] for row in self.data])


def _dot(f, xs, ys):
    acc = f.zero
    for x, y in zip(xs, ys):
        if not f.is_zero(x) and not f.is_zero(y):
            acc = f.add(acc, f.mul(x, y))
    return acc


def hstack(mats):
    field = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.field != field or m.rows != rows:
            raise FieldMismatchError("hstack pieces disagree")
    return Matrix(field, [sum((list(m.data[i]) for m in mats), []) for i in range(rows)])


def vstack(mats):
    field = mats[0].field
    cols = mats[0].cols
    out = []
    for m in mats:
        if m.field != field or m.cols != cols:
            raise FieldMismatchError("vstack pieces disagree")
        out.extend(list(r) for r in m.data)
    return Matrix(field, out)


# -- elimination ----------------------------------------------------------

def rref(mat: Matrix):
    """Reduced row echelon form; returns (rref matrix, pivot column list)."""
    if mat.field is QQ:
        rows = _rref_qq([list(r) for r in mat.data], mat.cols)
    else:
        rows = _rref_generic(mat.field, [list(r) for r in mat.data], mat.cols)
    pivots = []
    f = mat.field
    for r in rows:
        for j, x in enumerate(r):
            if not f.is_zero(x):
                pivots.append(j)
                break
    return Matrix(f, rows) if rows else Matrix(f, [[]]), pivots


def _rref_generic(f, rows, ncols):
    piv = 0
    pivots = []
    for col in range(ncols):
        sel = None
        for i in range(piv, len(rows)):
            if not f.is_zero(rows[i][col]):
                sel = i
                break
        if sel is None:
            continue
        rows[piv], rows[sel] = rows[sel], rows[piv]
        inv = f.invert(rows[piv][col])
        rows[piv] = [f.mul(inv, x) for x in rows[piv]]
        for i in range(len(rows)):
            if i != piv and not f.is_zero(rows[i][col]):
                c = rows[i][col]
                rows[i] = [f.sub(x, f.mul(c, y)) for x, y in zip(rows[i], rows[piv])]
        pivots.append(col)
        piv += 1
        if piv == len(rows):
            break
    return rows


def _rref_qq(rows, ncols):
    # clear denominators rowwise, eliminate over Z, normalize at the end
    irows = []
    for r in rows:
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        ir = [int(x * den) for x in r]
        g = 0
        for x in ir:
            g = gcd(g, x)
        if g > 1:
            ir = [x // g for x in ir]
        irows.append(ir)
    piv = 0
    pivcols = []
    for col in range(ncols):
        sel = None
        for i in range(piv, len(irows)):
            if irows[i][col]:
                sel = i
                break
        if sel is None:
            continue
        irows[piv], irows[sel] = irows[sel], irows[piv]
        prow = irows[piv]
        pval = prow[col]
        for i in range(len(irows)):
            if i == piv:
                continue
            c = irows[i][col]
            if not c:
                continue
            r = irows[i]
            newr = [x * pval - y * c for x, y in zip(r, prow)]
            g = 0
            for x in newr:
                g = gcd(g, x)
            if g > 1:
                newr = [x // g for x in newr]
            irows[i] = newr
        pivcols.append(col)
        piv += 1
        if piv == len(irows):
            break
    out = []
    for i, r in enumerate(irows):
        if i < len(pivcols):
            pv = r[pivcols[i]]
            out.append([Fraction(x, pv) for x in r])
        else:
            out.append([Fraction(0)] * ncols)
    return out


def rank_and_kernel(mat: Matrix):
    """Rank and the canonical (pivot-normalized) kernel basis.

    Kernel vectors are read off the RREF: one per free column, with entry 1
    at the free column and the negated pivot-row entries above it.
    """
    red, pivots = rref(mat)
    f = mat.field
    rank = len(pivots)
    pivset = set(pivots)
    kernel = []
    for free in range(mat.cols):
        if free in pivset:
            continue
        v = [f.zero] * mat.cols
        v[free] = f.one
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(red.data[r][free])
        kernel.append(v)
    return rank, kernel


def rank(mat: Matrix) -> int:
    return rank_and_kernel(mat)[0]


def solve(a: Matrix, b):
    """One exact solution of a x = b, or None when inconsistent."""
    f = a.field
    b = [f.coerce(x) for x in b]
    if len(b) != a.rows:
        raise ValueError("shape mismatch")
    aug = Matrix(f, [list(r) + [bv] for r, bv in zip(a.data, b)])
    red, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [f.zero] * a.cols
    for r, pc in enumerate(pivots):
        x[pc] = red.data[r][a.cols]
    return x


def inverse(a: Matrix) -> Matrix:
    if a.rows != a.cols:
        raise ValueError("inverse of a non-square matrix")
    f = a.field
    n = a.rows
    aug = hstack([a, Matrix.identity(f, n)])
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return Matrix(f, [row[n:] for row in red.data])


def det(a: Matrix):
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    f = a.field
    rows = [list(r) for r in a.data]
    n = a.rows
    acc = f.one
    sign = 1
    for col in range(n):
        sel = None
        for i in range(col, n):
            if not f.is_zero(rows[i][col]):
                sel = i
                break
        if sel is None:
            return f.zero
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            sign = -sign
        pval = rows[col][col]
        acc = f.mul(acc, pval)
        inv = f.invert(pval)
        for i in range(col + 1, n):
            c = rows[i][col]
            if f.is_zero(c):
                continue
            factor = f.mul(c, inv)
            rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], rows[col])]
    return acc if sign == 1 else f.neg(acc)


def span_rank(field, vectors) -> int:
    if not vectors:
        return 0
    return rank(Matrix(field, vectors))


def in_span(field, vectors, target):
    """Coefficients expressing target in the span of vectors, or None."""
    if not vectors:
        return None if any(not field.is_zero(field.coerce(x)) for x in target) else []
    a = Matrix(field, vectors).transpose()
    return solve(a, target)


def reduce_matrix_mod_p(mat: Matrix, field_p) -> Matrix:
    if mat.field is not QQ:
        raise FieldMismatchError("reduce_mod_p expects a matrix over QQ")
    return mat.map_entries(field_p, field_p.from_fraction)
