"""Sparse multivariate polynomials over Q with graded-lex monomial order.

Used for the symbolic determinants that decide 1-genericity and for the
2x2-minor quadratics of the pencil classifier.  Monomials are exponent
tuples; the zero polynomial is the empty dict, which makes the zero test
canonical.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations


def _grlex_key(mono):
    return (sum(mono), mono)


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        self.terms: dict[tuple, Fraction] = {}
        if terms:
            for mono, c in dict(terms).items():
                c = Fraction(c)
                if c != 0:
                    if len(mono) != nvars:
                        raise ValueError("monomial arity mismatch")
                    self.terms[tuple(mono)] = c

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        c = Fraction(c)
        return cls(nvars, {tuple([0] * nvars): c} if c else None)

    @classmethod
    def var(cls, nvars, i, c=1):
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): Fraction(c)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items()))))

    def __add__(self, other):
        out = dict(self.terms)
        for mono, c in other.terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return MPoly(self.nvars, out)

    def __neg__(self):
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(self.nvars, other)
        out: dict[tuple, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def eval(self, point):
        point = [Fraction(x) for x in point]
        acc = Fraction(0)
        for mono, c in self.terms.items():
            v = c
            for e, x in zip(mono, point):
                if e:
                    v *= x**e
            acc += v
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), Fraction(0))

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            names = [
                f"x{i}" + (f"^{e}" if e > 1 else "")
                for i, e in enumerate(mono)
                if e
            ]
            body = "*".join(names)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c}*{body}")
        return (" + ".join(parts)).replace("+ -", "- ")

    __repr__ = __str__


class SizeLimitError(ValueError):
    """The Leibniz expansion is only validated at catalog scale (m <= 5)."""


def symbolic_det(slices, nvars: int) -> MPoly:
    """det(sum_i x_i * slice_i) expanded by the Leibniz rule.

    slices are square Matrix objects over QQ or GF(p) of equal size m <= 5.
    """
    m = slices[0].rows
    if m > 5:
        raise SizeLimitError(f"symbolic determinant limited to m <= 5, got {m}")
    for s in slices:
        if s.rows != m or s.cols != m:
            raise ValueError("slices must be square of equal size")
    entries = [
        [
            MPoly(
                nvars,
                {
                    tuple(1 if v == k else 0 for v in range(nvars)): Fraction(slices[k][i, j])
                    for k in range(len(slices))
                    if not slices[k].field.is_zero(slices[k][i, j])
                },
            )
            for j in range(m)
        ]
        for i in range(m)
    ]
    # Laplace expansion with shared minors over column subsets
    minors = {(): MPoly.const(nvars, 1)}
    for i in range(m):
        new = {}
        for subset in combinations(range(m), i + 1):
            acc = MPoly.zero(nvars)
            for k, j in enumerate(subset):
                e = entries[i][j]
                if e.is_zero():
                    continue
                rest = subset[:k] + subset[k + 1 :]
                prev = minors[rest]
                if prev.is_zero():
                    continue
                term = e * prev
                acc = acc + term if (i + k) % 2 == 0 else acc - term
            new[subset] = acc
        minors = new
    return minors[tuple(range(m))]

