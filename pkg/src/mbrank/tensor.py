"""Tensors in k^m x k^m x k^m: matrix forms, slices, E-spaces, stabilizers.

Coefficient convention (fixed by the round-trip example of the source data):
a matrix form in variables x_0..x_{m-1} turns into the tensor with
T[k][i][j] = coefficient of x_k at entry (row i, column j), i.e. the term
a_{k+1} (x) b_{i+1} (x) c_{j+1}.  Slices in direction A are then the
coefficient grids themselves, and for the catalog presentations (identity
x_0-grid) they coincide with the E-space basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .exact import QQ, Matrix, inverse, rank_and_kernel, solve, symbolic_det

DIRECTIONS = ("A", "B", "C")


class NoAlphaError(ValueError):
    """The tensor is not 1_A-generic, so no invertible contraction exists."""


class InvalidIsomorphismError(ValueError):
    pass


class Tensor3:
    """Dense order-3 tensor with exact rational coefficients."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        self.m = m
        self.coeffs = tuple(
            tuple(tuple(Fraction(x) for x in row) for row in slab) for slab in coeffs
        )
        if len(self.coeffs) != m or any(
            len(slab) != m or any(len(r) != m for r in slab) for slab in self.coeffs
        ):
            raise ValueError("coefficient array must be m x m x m")

    @classmethod
    def zero(cls, m):
        return cls(m, [[[0] * m for _ in range(m)] for _ in range(m)])

    @classmethod
    def from_grids(cls, grids):
        """Tensor whose A-direction slices are the given square matrices."""
        m = grids[0].rows
        return cls(m, [[[g[i, j] for j in range(m)] for i in range(m)] for g in grids])

    def __eq__(self, other):
        return isinstance(other, Tensor3) and self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, self.coeffs))

    def entry(self, k, i, j):
        return self.coeffs[k][i][j]

    def terms(self):
        """Nonzero terms as (k, i, j, coefficient), 0-indexed."""
        for k in range(self.m):
            for i in range(self.m):
                for j in range(self.m):
                    c = self.coeffs[k][i][j]
                    if c:
                        yield (k, i, j, c)

    def to_json(self):
        return {
            "m": self.m,
            "coeffs": [[[str(x) for x in row] for row in slab] for slab in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(obj["m"], [[[Fraction(x) for x in row] for row in slab] for slab in obj["coeffs"]])

    def __repr__(self):
        terms = []
        for k, i, j, c in self.terms():
            body = f"a{k + 1}b{i + 1}c{j + 1}"
            terms.append(body if c == 1 else f"({c})*{body}")
        return " + ".join(terms) if terms else "0"


class MatrixForm:
    """Grid of homogeneous linear forms in x_0..x_{m-1}."""

    __slots__ = ("m", "entries")

    def __init__(self, m: int, entries):
        self.m = m
        norm = []
        for row in entries:
            nrow = []
            for e in row:
                nrow.append({int(v): Fraction(c) for v, c in dict(e).items() if Fraction(c) != 0})
            norm.append(nrow)
        self.entries = norm
        if len(norm) != m or any(len(r) != m for r in norm):
            raise ValueError("matrix form must be m x m")
        for row in norm:
            for e in row:
                for v in e:
                    if not 0 <= v < m:
                        raise ValueError(f"variable x{v} out of range")

    @classmethod
    def from_text(cls, rows):
        """Parse rows like 'x0 0 0', 'x1+x2 x0 0', '-x1 2*x3 0'."""
        m = len(rows)
        entries = []
        for r in rows:
            row = []
            for cell in r.split():
                row.append(_parse_linear_cell(cell))
            entries.append(row)
        return cls(m, entries)

    def to_json(self):
        return {
            "m": self.m,
            "entries": [
                [{f"x{v}": str(c) for v, c in sorted(e.items())} for e in row]
                for row in self.entries
            ],
        }

    @classmethod
    def from_json(cls, obj):
        m = obj["m"]
        entries = []
        for row in obj["entries"]:
            entries.append([{int(k.lstrip("x")): Fraction(v) for k, v in e.items()} for e in row])
        return cls(m, entries)

    def transpose(self):
        return MatrixForm(self.m, [[self.entries[j][i] for j in range(self.m)] for i in range(self.m)])


def _parse_linear_cell(cell: str) -> dict:
    cell = cell.strip()
    if cell == "0":
        return {}
    out: dict[int, Fraction] = {}
    # split into signed terms
    terms = cell.replace("-", "+-").split("+")
    for term in terms:
        term = term.strip()
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        if "*" in term:
            coef, var = term.split("*")
            c = Fraction(coef)
        else:
            var = term
            c = Fraction(1)
        if not var.startswith("x"):
            raise ValueError(f"constant term {cell!r} in a matrix form")
        v = int(var[1:])
        if neg:
            c = -c
        out[v] = out.get(v, Fraction(0)) + c
    return out


def matrix_form_to_tensor(form: MatrixForm) -> Tensor3:
    m = form.m
    coeffs = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for i in range(m):
        for j in range(m):
            for v, c in form.entries[i][j].items():
                coeffs[v][i][j] = c
    return Tensor3(m, coeffs)


def tensor_to_matrix_form(t: Tensor3) -> MatrixForm:
    m = t.m
    entries = [[{} for _ in range(m)] for _ in range(m)]
    for k, i, j, c in t.terms():
        entries[i][j][k] = c
    return MatrixForm(m, entries)


def slices(t: Tensor3, direction: str):
    """The m slice matrices of a direction: A -> T[k][.][.], etc."""
    m = t.m
    if direction == "A":
        return [Matrix(QQ, t.coeffs[k]) for k in range(m)]
    if direction == "B":
        return [
            Matrix(QQ, [[t.coeffs[k][i][j] for j in range(m)] for k in range(m)])
            for i in range(m)
        ]
    if direction == "C":
        return [
            Matrix(QQ, [[t.coeffs[k][i][j] for i in range(m)] for k in range(m)])
            for j in range(m)
        ]
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class GenericityPattern:
    concise_A: bool
    concise_B: bool
    concise_C: bool
    one_generic_A: bool
    one_generic_B: bool
    one_generic_C: bool

    @property
    def concise(self):
        return self.concise_A and self.concise_B and self.concise_C

    def one_generic(self, direction):
        return getattr(self, f"one_generic_{direction}")

    @property
    def one_star_generic(self):
        return self.one_generic_A or self.one_generic_B or self.one_generic_C

    @property
    def one_degenerate(self):
        return not self.one_star_generic

    def generic_flags(self):
        return (self.one_generic_A, self.one_generic_B, self.one_generic_C)

    def swap_bc(self):
        return GenericityPattern(
            self.concise_A,
            self.concise_C,
            self.concise_B,
            self.one_generic_A,
            self.one_generic_C,
            self.one_generic_B,
        )


def genericity_pattern(t: Tensor3) -> GenericityPattern:
    concise = {}
    generic = {}
    for d in DIRECTIONS:
        sl = slices(t, d)
        flat = Matrix(QQ, [[s[i, j] for i in range(t.m) for j in range(t.m)] for s in sl])
        concise[d] = rank_and_kernel(flat)[0] == t.m
        generic[d] = not symbolic_det(sl, t.m).is_zero()
    return GenericityPattern(
        concise["A"], concise["B"], concise["C"], generic["A"], generic["B"], generic["C"]
    )


def transform_tensor(t: Tensor3, g_a: Matrix, g_b: Matrix, g_c: Matrix, sigma: str = "ABC") -> Tensor3:
    """Apply (g_a, g_b, g_c), then permute the factors by sigma.

    sigma is a string such as "ACB": position 0 names the old factor placed
    in the A slot of the result, and so on.
    """
    m = t.m
    for g in (g_a, g_b, g_c):
        if g.rows != m or g.cols != m:
            raise ValueError("transform matrices must be m x m")
        try:
            inverse(g)
        except ZeroDivisionError:
            raise InvalidIsomorphismError("singular transform matrix") from None
    out = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for a, b, c, coef in t.terms():
        cols_a = g_a.col(a)
        cols_b = g_b.col(b)
        cols_c = g_c.col(c)
        for k in range(m):
            if cols_a[k] == 0:
                continue
            for i in range(m):
                if cols_b[i] == 0:
                    continue
                xab = coef * cols_a[k] * cols_b[i]
                for j in range(m):
                    if cols_c[j] != 0:
                        out[k][i][j] += xab * cols_c[j]
    return permute_tensor(Tensor3(m, out), sigma)


def permute_tensor(t: Tensor3, sigma: str) -> Tensor3:
    if sorted(sigma) != ["A", "B", "C"]:
        raise ValueError(f"bad permutation {sigma!r}")
    if sigma == "ABC":
        return t
    m = t.m
    slot_of = {factor: slot for slot, factor in enumerate(sigma)}
    out = [[[Fraction(0)] * m for _ in range(m)] for _ in range(m)]
    for a, b, c, coef in t.terms():
        old = (a, b, c)
        new = [0, 0, 0]
        for f_idx, f_name in enumerate("ABC"):
            new[slot_of[f_name]] = old[f_idx]
        out[new[0]][new[1]][new[2]] = coef
    return Tensor3(m, out)


def compose_sigma(second: str, first: str) -> str:
    """Permutation applied as permute(permute(t, first), second)."""
    return "".join(first["ABC".index(f)] for f in second)


def choose_alpha(t: Tensor3):
    """First functional with invertible A-contraction: coordinates, then 0/1 combos."""
    m = t.m
    sl = slices(t, "A")
    candidates = []
    for k in range(m):
        v = [Fraction(0)] * m
        v[k] = Fraction(1)
        candidates.append(v)
    for counter in range(1, 2**m):
        bits = [(counter >> k) & 1 for k in range(m)]
        if sum(bits) == 1:
            continue
        candidates.append([Fraction(b) for b in bits])
    for alpha in candidates:
        mat = _alpha_slice(sl, alpha)
        if rank_and_kernel(mat)[0] == m:
            return alpha
    raise NoAlphaError("tensor is not 1_A-generic")


def _alpha_slice(sl, alpha):
    m = sl[0].rows
    acc = Matrix.zero(QQ, m, m)
    for a, s in zip(alpha, sl):
        if a:
            acc = acc + s.scale(a)
    return acc


@dataclass(frozen=True)
class ESpace:
    basis: tuple
    alpha_used: tuple

    @property
    def m(self):
        return len(self.basis)


def e_space(t: Tensor3, alpha=None) -> ESpace:
    """E_alpha(T): slices times the inverse alpha-slice, identity first."""
    if alpha is None:
        alpha = choose_alpha(t)
    alpha = [Fraction(a) for a in alpha]
    sl = slices(t, "A")
    mat = _alpha_slice(sl, alpha)
    try:
        inv = inverse(mat)
    except ZeroDivisionError:
        raise NoAlphaError("T_A(alpha) is singular") from None
    basis = [s * inv for s in sl]
    pivot = next(k for k, a in enumerate(alpha) if a != 0)
    ident = Matrix.identity(QQ, t.m)
    rebased = [ident] + [b for k, b in enumerate(basis) if k != pivot]
    return ESpace(tuple(rebased), tuple(alpha))


def strassen_and_end_closed(e: ESpace):
    """(pairwise commutation, closure of products under the span)."""
    basis = list(e.basis)
    m = basis[0].rows
    commutes = all(
        (basis[i] * basis[j] - basis[j] * basis[i]).is_zero()
        for i in range(len(basis))
        for j in range(i + 1, len(basis))
    )
    span = Matrix(QQ, [[b[i, j] for i in range(m) for j in range(m)] for b in basis]).transpose()
    end_closed = True
    for x in basis:
        for y in basis:
            prod = x * y
            vec = [prod[i, j] for i in range(m) for j in range(m)]
            if solve(span, vec) is None:
                end_closed = False
                break
        if not end_closed:
            break
    return commutes, end_closed


def stabilizer_dimension(t: Tensor3) -> int:
    """dim of the Lie algebra {(X, Y, Z) : X.T + Y.T + Z.T = 0}."""
    m = t.m
    ncols = 3 * m * m
    rows = []
    for k in range(m):
        for i in range(m):
            for j in range(m):
                row = [Fraction(0)] * ncols
                for a in range(m):
                    c = t.coeffs[a][i][j]
                    if c:
                        row[k * m + a] += c
                for b in range(m):
                    c = t.coeffs[k][b][j]
                    if c:
                        row[m * m + i * m + b] += c
                for cc in range(m):
                    c = t.coeffs[k][i][cc]
                    if c:
                        row[2 * m * m + j * m + cc] += c
                rows.append(row)
    mat = Matrix(QQ, rows)
    return mat.cols - rank_and_kernel(mat)[0]


ALL_SIGMAS = tuple("".join(p) for p in permutations("ABC"))
