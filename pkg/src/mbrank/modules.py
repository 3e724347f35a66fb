"""Finite modules over S = k[x_1..x_n] stored as commuting action matrices.

Degree-m modules live on k^m; the actions list holds the matrices of
x_1, ..., x_n.  Concise modules have n = m - 1 and {id, X_1..X_n} linearly
independent, which is exactly when the multiplication tensor is m x m x m.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .exact import (
    GF,
    QQ,
    Matrix,
    Poly,
    det,
    hstack,
    rank_and_kernel,
    rref,
    solve,
    vstack,
)
from .tensor import ESpace, Tensor3, genericity_pattern, stabilizer_dimension


class NotAModuleError(ValueError):
    """Action matrices do not commute."""


class NotSplitError(ValueError):
    """Some action has an eigenvalue outside the base field."""

    def __init__(self, msg, char_poly=None):
        super().__init__(msg)
        self.char_poly = char_poly


class NotLocalError(ValueError):
    pass


class NotConciseError(ValueError):
    pass


class NotSurjectiveError(ValueError):
    pass


class FiniteModule:
    __slots__ = ("m", "nvars", "actions", "field")

    def __init__(self, actions, m=None, field=None, check=True):
        actions = list(actions)
        if not actions and m is None:
            raise ValueError("degree required for a module with no actions")
        self.field = field if field is not None else (actions[0].field if actions else QQ)
        self.m = m if m is not None else actions[0].rows
        self.nvars = len(actions)
        self.actions = tuple(actions)
        for x in self.actions:
            if x.rows != self.m or x.cols != self.m or x.field != self.field:
                raise ValueError("action matrices must be square of size m over one field")
        if check:
            for i in range(self.nvars):
                for j in range(i + 1, self.nvars):
                    if not (self.actions[i] * self.actions[j] - self.actions[j] * self.actions[i]).is_zero():
                        raise NotAModuleError(f"actions {i + 1} and {j + 1} do not commute")

    def __eq__(self, other):
        return (
            isinstance(other, FiniteModule)
            and self.m == other.m
            and self.field == other.field
            and self.actions == other.actions
        )

    def __hash__(self):
        return hash((self.m, self.actions))

    def __repr__(self):
        return f"FiniteModule(m={self.m}, vars={self.nvars}, field={self.field})"

    def to_json(self):
        f = self.field
        return {
            "m": self.m,
            "vars": self.nvars,
            "actions": [[[f.to_str(x) for x in row] for row in a.data] for a in self.actions],
        }

    @classmethod
    def from_json(cls, obj, field=QQ):
        acts = [Matrix(field, rows) for rows in obj["actions"]]
        return cls(acts, m=obj["m"], field=field)

    def action_of(self, coeffs):
        """Matrix of the linear form sum_i coeffs[i] * x_i."""
        acc = Matrix.zero(self.field, self.m, self.m)
        for c, x in zip(coeffs, self.actions):
            if not self.field.is_zero(self.field.coerce(c)):
                acc = acc + x.scale(c)
        return acc

    def apply_monomial(self, expts, vec):
        out = list(vec)
        for i, e in enumerate(expts):
            for _ in range(e):
                out = self.actions[i].matvec(out)
        return out

    def reduce_mod_p(self, p):
        gf = GF(p)
        return FiniteModule(
            [a.map_entries(gf, gf.from_fraction) for a in self.actions],
            m=self.m,
            field=gf,
            check=False,
        )


def from_e_space(e: ESpace) -> FiniteModule:
    basis = list(e.basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not (basis[i] * basis[j] - basis[j] * basis[i]).is_zero():
                raise NotAModuleError("E-space fails the commutation (Strassen) check")
    return FiniteModule(basis[1:], m=basis[0].rows)


def multiplication_tensor(mod: FiniteModule) -> Tensor3:
    concise, _ = module_flags(mod)
    if not concise:
        raise NotConciseError("multiplication tensor needs a concise module")
    ident = Matrix.identity(mod.field, mod.m)
    grids = [ident] + list(mod.actions)
    return Tensor3.from_grids(grids)


def dual_module(mod: FiniteModule) -> FiniteModule:
    return FiniteModule([a.transpose() for a in mod.actions], m=mod.m, field=mod.field, check=False)


def module_flags(mod: FiniteModule):
    """(concise, end_closed) for the action span with identity."""
    f = mod.field
    m = mod.m
    ident = Matrix.identity(f, m)
    vecs = [[x[i, j] for i in range(m) for j in range(m)] for x in [ident, *mod.actions]]
    span = Matrix(f, vecs)
    concise = (mod.nvars == m - 1) and rank_and_kernel(span)[0] == m
    span_t = span.transpose()
    end_closed = True
    for x in mod.actions:
        for y in mod.actions:
            prod = x * y
            vec = [prod[i, j] for i in range(m) for j in range(m)]
            if solve(span_t, vec) is None:
                end_closed = False
                break
        if not end_closed:
            break
    return concise, end_closed


# -- support decomposition --------------------------------------------------

@dataclass
class SupportPiece:
    point: tuple
    local_dim: int
    local_module: FiniteModule
    basis: list  # column vectors spanning the piece inside k^m


@dataclass
class SupportDecomposition:
    pieces: list

    @property
    def cardinality(self):
        return len(self.pieces)

    def degree_decomposition(self):
        return tuple(sorted((p.local_dim for p in self.pieces), reverse=True))


def char_poly(mat: Matrix) -> Poly:
    """Characteristic polynomial det(lambda I - X) via Faddeev-LeVerrier."""
    f = mat.field
    n = mat.rows
    if f is QQ:
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        mk = Matrix.identity(f, n)
        for k in range(1, n + 1):
            mk = mat * mk
            tr = sum((mk[i, i] for i in range(n)), Fraction(0))
            c = -tr / k
            coeffs[n - k] = c
            mk = mk + Matrix.identity(f, n).scale(c)
        return Poly(coeffs)
    # small prime fields: same recursion, dividing by k needs k < p
    coeffs = [f.zero] * (n + 1)
    coeffs[n] = f.one
    mk = Matrix.identity(f, n)
    for k in range(1, n + 1):
        mk = mat * mk
        tr = f.zero
        for i in range(n):
            tr = f.add(tr, mk[i, i])
        c = f.mul(f.neg(tr), f.invert(f.coerce(k)))
        coeffs[n - k] = c
        mk = mk + Matrix.identity(f, n).scale(c)
    return coeffs  # list over F_p, low degree first


def _eigenvalues(mat: Matrix):
    """All eigenvalues in the base field, with multiplicity; NotSplitError otherwise."""
    f = mat.field
    n = mat.rows
    if f is QQ:
        cp = char_poly(mat)
        roots = []
        rem = cp
        for cand in _rational_root_candidates(cp):
            while rem.degree > 0 and rem.eval(cand) == 0:
                roots.append(cand)
                rem = rem // Poly([-cand, 1])
        if rem.degree > 0:
            raise NotSplitError(f"characteristic polynomial {cp} does not split over QQ", cp)
        return roots
    coeffs = char_poly(mat)
    roots = []
    rem = list(coeffs)
    for cand in range(f.p):
        while len(rem) > 1 and _eval_fp(f, rem, cand) == 0:
            roots.append(cand)
            rem = _deflate_fp(f, rem, cand)
    if len(rem) > 1:
        raise NotSplitError(f"characteristic polynomial does not split over {f.name}", rem)
    return roots


def _eval_fp(f, coeffs, x):
    acc = f.zero
    for c in reversed(coeffs):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _deflate_fp(f, coeffs, root):
    n = len(coeffs) - 1
    out = [f.zero] * n
    acc = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = acc
        acc = f.add(coeffs[i], f.mul(acc, root))
    return out


def _rational_root_candidates(p: Poly):
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    ints = [int(c * den) for c in p.coeffs]
    a0 = next((abs(c) for c in ints if c), 0)
    # constant term divisors over leading divisors, small first, both signs, plus 0
    an = abs(ints[-1])
    cands = [Fraction(0)]
    for p_div in _divisors(abs(ints[0]) if ints[0] else a0):
        for q_div in _divisors(an):
            for s in (1, -1):
                c = Fraction(s * p_div, q_div)
                if c not in cands:
                    cands.append(c)
    return cands


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _restrict_action(x: Matrix, basis_cols):
    """Matrix of x on the invariant subspace spanned by the given columns."""
    f = x.field
    bmat = Matrix(f, basis_cols).transpose()
    cols = []
    for b in basis_cols:
        img = x.matvec(b)
        coeff = solve(bmat, img)
        if coeff is None:
            raise ValueError("subspace is not invariant")
        cols.append(coeff)
    return Matrix(f, cols).transpose()


def restrict_module(mod: FiniteModule, basis_rows) -> FiniteModule:
    """Module structure on an invariant subspace (basis given as row vectors)."""
    acts = [_restrict_action(x, [list(r) for r in basis_rows]) for x in mod.actions]
    return FiniteModule(acts, m=len(basis_rows), field=mod.field, check=False)


def support_decomposition(mod: FiniteModule) -> SupportDecomposition:
    f = mod.field
    m = mod.m
    pieces = [([_unit_vec(f, m, i) for i in range(m)], [])]  # (basis columns, point prefix)
    for x in mod.actions:
        refined = []
        for basis, point in pieces:
            xr = _restrict_action(x, basis)
            evs = sorted(set(_eigenvalues(xr)))
            if len(evs) == 1:
                refined.append((basis, point + [evs[0]]))
                continue
            bmat = Matrix(f, [list(b) for b in basis]).transpose()
            for lam in evs:
                shifted = xr - Matrix.identity(f, xr.rows).scale(lam)
                power = shifted
                for _ in range(xr.rows - 1):
                    power = power * shifted
                _, ker = rank_and_kernel(power)
                sub = [bmat.matvec(v) for v in ker]
                refined.append((sub, point + [lam]))
        pieces = refined
    out = []
    # origin first, then vertices in variable order
    for basis, point in sorted(pieces, key=lambda bp: tuple(reversed(bp[1]))):
        local = restrict_module(mod, basis)
        shifted = FiniteModule(
            [a - Matrix.identity(f, local.m).scale(lam) for a, lam in zip(local.actions, point)],
            m=local.m,
            field=f,
            check=False,
        )
        out.append(SupportPiece(tuple(point), local.m, shifted, basis))
    if sum(p.local_dim for p in out) != m:
        raise NotSplitError("generalized eigenspaces do not fill the module")
    return SupportDecomposition(out)


def _unit_vec(f, m, i):
    v = [f.zero] * m
    v[i] = f.one
    return v


# -- local invariants --------------------------------------------------------

@dataclass(frozen=True)
class LocalInvariants:
    dim: int
    min_generators: int
    socle_dim: int
    hilbert: tuple
    cyclic: bool
    cocyclic: bool

    def as_tuple(self):
        return (self.dim, self.min_generators, self.socle_dim, self.hilbert, self.cyclic, self.cocyclic)


def local_invariants(piece: FiniteModule) -> LocalInvariants:
    f = piece.field
    m = piece.m
    for x in piece.actions:
        power = x
        for _ in range(m - 1):
            power = power * x
        if not power.is_zero():
            raise NotLocalError("action is not nilpotent; module is not local at the origin")
    if piece.nvars:
        stacked_h = hstack(list(piece.actions))
        stacked_v = vstack(list(piece.actions))
        image_rank = rank_and_kernel(stacked_h.transpose())[0]
        socle = m - rank_and_kernel(stacked_v)[0]
    else:
        image_rank = 0
        socle = m
    min_gens = m - image_rank
    hilbert = []
    current = [_unit_vec(f, m, i) for i in range(m)]
    dims = [m]
    while True:
        nxt = []
        for x in piece.actions:
            for v in current:
                nxt.append(x.matvec(v))
        if not nxt:
            dim_next = 0
        else:
            dim_next = rank_and_kernel(Matrix(f, nxt))[0]
        if dim_next == 0:
            break
        dims.append(dim_next)
        red, _ = _row_space_basis(f, nxt)
        current = red
    hilbert = tuple(a - b for a, b in zip(dims, dims[1:] + [0]))
    return LocalInvariants(
        dim=m,
        min_generators=min_gens,
        socle_dim=socle,
        hilbert=hilbert,
        cyclic=min_gens == 1,
        cocyclic=socle == 1,
    )


def _row_space_basis(f, rows):
    red, pivots = rref(Matrix(f, rows))
    basis = [list(red.data[i]) for i in range(len(pivots))]
    return basis, pivots


def min_generators_global(mod: FiniteModule) -> int:
    """Minimal number of module generators (max of the local counts, by CRT)."""
    dec = support_decomposition(mod)
    return max(local_invariants(p.local_module).min_generators for p in dec.pieces)


def is_cyclic(mod: FiniteModule) -> bool:
    return min_generators_global(mod) == 1


def is_cocyclic(mod: FiniteModule) -> bool:
    return min_generators_global(dual_module(mod)) == 1


def ann_linear_dim(mod: FiniteModule) -> int:
    """dim of the linear forms sum c_i x_i annihilating the module."""
    if not mod.nvars:
        return 0
    f = mod.field
    rows = []
    for r in range(mod.m):
        for c in range(mod.m):
            rows.append([x[r, c] for x in mod.actions])
    return mod.nvars - rank_and_kernel(Matrix(f, rows))[0]


# -- Hom and isomorphism ------------------------------------------------------

def hom_basis(m1: FiniteModule, m2: FiniteModule):
    """Canonical basis of {F : F X1_i = X2_i F} as m2.m x m1.m matrices."""
    if m1.nvars != m2.nvars:
        raise ValueError("modules over different polynomial rings")
    if m1.field != m2.field:
        raise ValueError("modules over different fields")
    f = m1.field
    r, c = m2.m, m1.m
    rows = []
    for x1, x2 in zip(m1.actions, m2.actions):
        for i in range(r):
            for j in range(c):
                row = [f.zero] * (r * c)
                for k in range(c):
                    row[i * c + k] = f.add(row[i * c + k], x1[k, j])
                for k in range(r):
                    row[k * c + j] = f.sub(row[k * c + j], x2[i, k])
                rows.append(row)
    _, kernel = rank_and_kernel(Matrix(f, rows))
    return [Matrix(f, [v[i * c : (i + 1) * c] for i in range(r)]) for v in kernel]


def end_dim(mod: FiniteModule) -> int:
    return len(hom_basis(mod, mod))


@dataclass
class IsoResult:
    verdict: str  # "yes" | "no" | "probably-not"
    witness: Matrix | None = None
    failure_bound: Fraction | None = None


def isomorphic_modules(m1: FiniteModule, m2: FiniteModule, trials: int = 12, seed: int = 0) -> IsoResult:
    """Probabilistic isomorphism test through the Hom space.

    A random Hom element with nonzero determinant is a witness.  "no" is
    returned only on sound dimension obstructions; otherwise failure to find
    a witness gives "probably-not" with the Schwartz-Zippel bound
    (m/101)^trials for coefficients drawn from [-50, 50].
    """
    if m1.m != m2.m:
        return IsoResult("no")
    if m1 == m2:
        return IsoResult("yes", Matrix.identity(m1.field, m1.m))
    hom = hom_basis(m1, m2)
    if not hom:
        return IsoResult("no")
    d1 = end_dim(m1)
    d2 = end_dim(m2)
    if len(hom) != d1 or d1 != d2:
        return IsoResult("no")
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-50, 50) for _ in hom]
        cand = Matrix.zero(m1.field, m2.m, m1.m)
        for c, h in zip(coeffs, hom):
            if c:
                cand = cand + h.scale(c)
        if not m1.field.is_zero(det(cand)):
            return IsoResult("yes", cand)
    bound = Fraction(m1.m, 101) ** trials
    return IsoResult("probably-not", None, bound)


def self_dual_verdict(mod: FiniteModule, trials: int = 12, seed: int = 0):
    """Is the module isomorphic to its dual, allowing variable permutations?

    Duality statements in the catalog hold up to a change of variables; a
    permutation of the actions suffices for every catalog entry, so the
    search runs over strict isomorphisms to all permuted duals.  Returns
    ("yes", permutation, witness) or ("probably-not", None, None).
    """
    from itertools import permutations as _perms

    d = dual_module(mod)
    # cheap refutation first: the local profiles are permutation-invariant
    if raw_local_profile(mod) != raw_local_profile(d):
        return ("probably-not", None, None)
    e_self = end_dim(mod)
    rng = random.Random(seed)
    for perm in _perms(range(mod.nvars)):
        cand = FiniteModule([d.actions[p] for p in perm], m=mod.m, field=mod.field, check=False)
        hom = hom_basis(mod, cand)
        if len(hom) != e_self:
            continue
        for _ in range(trials):
            coeffs = [rng.randint(-50, 50) for _ in hom]
            witness = Matrix.zero(mod.field, mod.m, mod.m)
            for c, h in zip(coeffs, hom):
                if c:
                    witness = witness + h.scale(c)
            if not mod.field.is_zero(det(witness)):
                return ("yes", perm, witness)
    return ("probably-not", None, None)


def raw_local_profile(mod: FiniteModule):
    """Sorted per-piece local invariants (no dual symmetrization)."""
    dec = support_decomposition(mod)
    return tuple(sorted(local_invariants(p.local_module).as_tuple() for p in dec.pieces))


def dual_separation_evidence(mod: FiniteModule, primes=(5, 7)):
    """Evidence that mod and its dual are inequivalent, or None.

    Local invariants are change-of-variable invariants; when they agree the
    submodule statistics over small prime fields are compared (F_p-rational
    evidence in the sense of the finite-field checks, not a proof)."""
    d = dual_module(mod)
    a, b = raw_local_profile(mod), raw_local_profile(d)
    if a != b:
        return {"kind": "local-invariants", "module": a, "dual": b}
    for p in primes:
        mp, dp = mod.reduce_mod_p(p), d.reduce_mod_p(p)
        for r in range(2, mod.m):
            prof_m = _submodule_profile(mp, r)
            prof_d = _submodule_profile(dp, r)
            if prof_m != prof_d:
                return {
                    "kind": "submodule-profile",
                    "p": p,
                    "r": r,
                    "module": prof_m,
                    "dual": prof_d,
                }
    return None


def _submodule_profile(mod_p: FiniteModule, r: int):
    out: dict[tuple, int] = {}
    for s in submodules_of_degree(mod_p, r):
        key = (s.min_generators, s.ann_linear)
        out[key] = out.get(key, 0) + 1
    return tuple(sorted(out.items()))


# -- submodule enumeration over F_p -------------------------------------------

@dataclass
class SubmoduleInfo:
    pivots: tuple
    basis: tuple  # echelon rows over F_p
    dim: int
    cyclic: bool
    min_generators: int
    ann_linear: int


def submodules_of_degree(mod: FiniteModule, r: int, jobs: int = 1):
    """All r-dimensional invariant subspaces of F_p^m with per-submodule stats.

    Enumerates reduced-echelon representatives per pivot pattern with numpy,
    keeps the subspaces invariant under every action, then computes exact
    statistics on the survivors.
    """
    import numpy as np

    f = mod.field
    if not hasattr(f, "p"):
        raise ValueError("submodule enumeration runs over a prime field")
    p = f.p
    m = mod.m
    if not 0 < r <= m:
        raise ValueError("bad submodule dimension")
    acts = [np.array([[int(x[i, j]) for j in range(m)] for i in range(m)], dtype=np.int64) for x in mod.actions]
    from itertools import combinations

    def invariant_reps(pivots):
        free_pos = [
            (i, j)
            for i in range(r)
            for j in range(m)
            if j > pivots[i] and j not in pivots
        ]
        nfree = len(free_pos)
        count = p**nfree
        basis = np.zeros((count, r, m), dtype=np.int64)
        for i, pc in enumerate(pivots):
            basis[:, i, pc] = 1
        if nfree:
            grid = np.indices((p,) * nfree).reshape(nfree, -1).T  # (count, nfree)
            for idx, (i, j) in enumerate(free_pos):
                basis[:, i, j] = grid[:, idx]
        ok = np.ones(count, dtype=bool)
        piv_idx = list(pivots)
        for x in acts:
            imgs = (basis @ x.T) % p  # (count, r, m)
            coeff = imgs[:, :, piv_idx]  # (count, r, r)
            resid = (imgs - coeff @ basis) % p
            ok &= ~resid.any(axis=(1, 2))
            if not ok.any():
                break
        return [
            [[int(v) for v in basis[sel, i]] for i in range(r)]
            for sel in np.nonzero(ok)[0]
        ]

    patterns = list(combinations(range(m), r))
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_pattern = list(pool.map(invariant_reps, patterns))
    else:
        per_pattern = [invariant_reps(p_) for p_ in patterns]
    out = []
    for pivots, reps in zip(patterns, per_pattern):
        for rows in reps:
            out.append(_submodule_stats(mod, pivots, rows))
    return out


def _submodule_stats(mod: FiniteModule, pivots, rows) -> SubmoduleInfo:
    sub = restrict_module(mod, rows)
    mg = min_generators_global(sub)
    # annihilating linear forms among the ambient variables, restricted to the subspace
    f = mod.field
    sysrows = []
    for vrow in rows:
        imgs = [x.matvec(vrow) for x in mod.actions]
        for coord in range(mod.m):
            sysrows.append([img[coord] for img in imgs])
    ann = mod.nvars - rank_and_kernel(Matrix(f, sysrows))[0]
    return SubmoduleInfo(
        pivots=tuple(pivots),
        basis=tuple(tuple(r) for r in rows),
        dim=len(rows),
        cyclic=mg == 1,
        min_generators=mg,
        ann_linear=ann,
    )


# -- initial module / associated graded ---------------------------------------

def _monomials(nvars, degree):
    if degree == 0:
        return [tuple([0] * nvars)]
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out)


def nilpotency_bound(mod: FiniteModule) -> int:
    """Smallest D with m^D M = 0 (module must be local at the origin)."""
    f = mod.field
    current = [_unit_vec(f, mod.m, i) for i in range(mod.m)]
    d = 0
    while True:
        nxt = []
        for x in mod.actions:
            for v in current:
                nxt.append(x.matvec(v))
        d += 1
        if not nxt:
            return d
        basis, pivots = _row_space_basis(f, nxt)
        if not pivots:
            return d
        current = basis
        if d > mod.m:
            raise NotLocalError("actions are not nilpotent")


@dataclass
class GradedModule:
    module: FiniteModule
    hilbert: tuple
    basis_labels: list  # (degree, slot, exponent tuple) per graded basis element


def initial_module(generators, mod: FiniteModule) -> GradedModule:
    """gr(M) = S^r / in(K) for the presentation sending e_i to generators[i].

    The initial form of a kernel element is its top-degree homogeneous part;
    in(K) is the span of initial forms, computed degree by degree up to the
    bound D with m^D M = 0 (kernel truncated at D + 1).
    """
    f = mod.field
    m = mod.m
    r = len(generators)
    gens = [[f.coerce(x) for x in g] for g in generators]
    bound = nilpotency_bound(mod) + 1
    # images of all (monomial, slot) columns, degree by degree
    mono_by_deg = [_monomials(mod.nvars, d) for d in range(bound + 1)]
    img_by_deg = []
    for d in range(bound + 1):
        cols = []
        for slot in range(r):
            for e in mono_by_deg[d]:
                cols.append(mod.apply_monomial(e, gens[slot]))
        img_by_deg.append(cols)
    total_cols = [c for cols in img_by_deg for c in cols]
    if rank_and_kernel(Matrix(f, total_cols))[0] != m:
        raise NotSurjectiveError("tagged elements do not generate the module")
    # in(K)_d = projection to degree d of ker(S_{<=d}^r -> M)
    in_rows_by_deg = []
    offsets = []
    off = 0
    for d in range(bound + 1):
        offsets.append(off)
        off += len(img_by_deg[d])
    for d in range(bound + 1):
        cols = [c for dd in range(d + 1) for c in img_by_deg[dd]]
        _, kernel = rank_and_kernel(Matrix(f, cols).transpose())
        start = offsets[d]
        width = len(img_by_deg[d])
        rows = [v[start : start + width] for v in kernel]
        in_rows_by_deg.append(rows)
    # complements and graded action
    grade_basis = []  # list per degree of free (slot, mono) indices
    red_by_deg = []
    for d in range(bound + 1):
        width = len(img_by_deg[d])
        if in_rows_by_deg[d]:
            red, pivots = rref(Matrix(f, in_rows_by_deg[d]))
        else:
            red, pivots = None, []
        red_by_deg.append((red, pivots))
        free = [i for i in range(width) if i not in set(pivots)]
        grade_basis.append(free)
    hilbert = []
    for d in range(bound + 1):
        if grade_basis[d]:
            hilbert.append(len(grade_basis[d]))
        else:
            break
    hilbert = tuple(hilbert)
    if sum(hilbert) != m:
        raise AssertionError("graded dimension drifted from the module degree")
    labels = []
    index_of = {}
    for d in range(len(hilbert)):
        for pos in grade_basis[d]:
            slot, e = _col_label(mono_by_deg[d], r, pos)
            index_of[(d, pos)] = len(labels)
            labels.append((d, slot, e))
    dim = len(labels)
    acts = []
    for var in range(mod.nvars):
        cols = []
        for d, slot, e in labels:
            if d + 1 >= len(hilbert):
                cols.append([f.zero] * dim)
                continue
            e2 = list(e)
            e2[var] += 1
            target_pos = _col_index(mono_by_deg[d + 1], r, slot, tuple(e2))
            vec = [f.zero] * len(img_by_deg[d + 1])
            vec[target_pos] = f.one
            vec = _reduce_against(f, vec, red_by_deg[d + 1])
            col = [f.zero] * dim
            for pos in grade_basis[d + 1]:
                if not f.is_zero(vec[pos]):
                    col[index_of[(d + 1, pos)]] = vec[pos]
            cols.append(col)
        acts.append(Matrix(f, cols).transpose())
    graded = FiniteModule(acts, m=dim, field=f, check=False)
    return GradedModule(graded, hilbert, labels)


def _col_label(monos, r, pos):
    per = len(monos)
    return pos // per, monos[pos % per]


def _col_index(monos, r, slot, e):
    return slot * len(monos) + monos.index(e)


def _reduce_against(f, vec, red_pivots):
    red, pivots = red_pivots
    if not pivots:
        return vec
    out = list(vec)
    for row_idx, pc in enumerate(pivots):
        c = out[pc]
        if f.is_zero(c):
            continue
        row = red.data[row_idx]
        out = [f.sub(x, f.mul(c, y)) for x, y in zip(out, row)]
    return out


# -- direct sums with the concise convention ----------------------------------

def intrinsic_piece(local: FiniteModule) -> FiniteModule:
    """Minimal action list of a local piece: the first linearly independent
    nilpotent actions, dropping zero and dependent ones (degree-1 pieces keep
    no actions).  Used to rebuild direct sums from support decompositions."""
    f = local.field
    chosen = []
    flat_rows = []
    for x in local.actions:
        if x.is_zero():
            continue
        vec = [x[i, j] for i in range(local.m) for j in range(local.m)]
        if rank_and_kernel(Matrix(f, flat_rows + [vec]))[0] == len(flat_rows) + 1:
            chosen.append(x)
            flat_rows.append(vec)
        if len(chosen) == local.m - 1:
            break
    return FiniteModule(chosen, m=local.m, field=f, check=False)


def direct_sum_concise(pieces, points=None, allow_manual=False) -> FiniteModule:
    """Block-diagonal concise module: piece 1 at the origin takes the first
    variables, each later piece gets its own jets then one delta variable
    acting as the identity on its block (so its support sits at that
    variable's vertex).

    Pieces must be cyclic or cocyclic unless allow_manual is set (the N_7/N_8
    completions are handled that way)."""
    f = pieces[0].field
    if not allow_manual:
        for p in pieces:
            inv = local_invariants(p)
            if not (inv.cyclic or inv.cocyclic):
                raise ValueError(
                    "piece is neither cyclic nor cocyclic; pass allow_manual for the N_7/N_8 cases"
                )
    m = sum(p.m for p in pieces)
    nvars = sum(p.nvars for p in pieces) + len(pieces) - 1
    if nvars != m - 1:
        raise NotConciseError("variable budget does not match the degree")
    offsets = []
    off = 0
    for p in pieces:
        offsets.append(off)
        off += p.m
    actions = []
    canonical_points = [tuple([Fraction(0)] * nvars)]

    def embed(block: Matrix, piece_idx):
        rows = [[f.zero] * m for _ in range(m)]
        o = offsets[piece_idx]
        for i in range(block.rows):
            for j in range(block.cols):
                rows[o + i][o + j] = block[i, j]
        return Matrix(f, rows)

    var = 0
    for a in pieces[0].actions:
        actions.append(embed(a, 0))
        var += 1
    for idx in range(1, len(pieces)):
        for a in pieces[idx].actions:
            actions.append(embed(a, idx))
            var += 1
        delta_index = var
        actions.append(embed(Matrix.identity(f, pieces[idx].m), idx))
        var += 1
        pt = [Fraction(0)] * nvars
        pt[delta_index] = Fraction(1)
        canonical_points.append(tuple(pt))
    if points is not None:
        pts = [tuple(Fraction(x) for x in p) for p in points]
        if len(set(pts)) != len(pts):
            raise NotConciseError("repeated support points (Lemma-2.11 situation)")
        if pts != canonical_points:
            raise NotConciseError("support points must follow the delta-variable convention")
    mod = FiniteModule(actions, m=m, field=f)
    concise, _ = module_flags(mod)
    if not concise:
        raise NotConciseError("direct sum is not concise")
    return mod


# -- fingerprints --------------------------------------------------------------

@dataclass(frozen=True)
class InvariantFingerprint:
    m: int
    genericity: tuple
    stabilizer_dim: int
    support_cardinality: int
    degree_decomposition: tuple
    piece_records: tuple
    end_dim: int
    end_closed: bool
    self_dual: bool

    def as_tuple(self):
        return (
            self.m,
            self.genericity,
            self.stabilizer_dim,
            self.support_cardinality,
            self.degree_decomposition,
            self.piece_records,
            self.end_dim,
            self.end_closed,
            self.self_dual,
        )


def fingerprint(mod: FiniteModule, seed: int = 0) -> InvariantFingerprint:
    """Isomorphism-separating tuple; equality is necessary for equivalence.

    Per-piece local invariants are stored as the sorted pair of the piece's
    record and its dual's record so that fingerprints of M and its dual agree
    except for the B/C swap in the genericity pattern.
    """
    concise, end_closed = module_flags(mod)
    if not concise:
        raise NotConciseError("fingerprints are defined for concise modules")
    mu = multiplication_tensor(mod)
    pattern = genericity_pattern(mu)
    stab = stabilizer_dimension(mu)
    dec = support_decomposition(mod)
    recs = []
    for piece in dec.pieces:
        inv = local_invariants(piece.local_module).as_tuple()
        inv_dual = local_invariants(dual_module(piece.local_module)).as_tuple()
        recs.append(tuple(sorted([inv, inv_dual])))
    recs = tuple(sorted(recs))
    sd = self_dual_verdict(mod, seed=seed)[0] == "yes"
    return InvariantFingerprint(
        m=mod.m,
        genericity=(
            pattern.concise_A,
            pattern.concise_B,
            pattern.concise_C,
            pattern.one_generic_A,
            pattern.one_generic_B,
            pattern.one_generic_C,
        ),
        stabilizer_dim=stab,
        support_cardinality=dec.cardinality,
        degree_decomposition=dec.degree_decomposition(),
        piece_records=recs,
        end_dim=end_dim(mod),
        end_closed=end_closed,
        self_dual=sd,
    )
