"""Apolarity for modules: contraction action on dual polynomials.

Dual elements live in a direct sum of r copies of k[y_1..y_n]; the variable
x_i acts by decrementing the y_i exponent (divided powers are unnecessary in
characteristic 0 or p >= 5 at these degrees).  A module is presented by dual
generators; its contraction closure V carries the x_i actions, and the
presented quotient is the dual of V.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import QQ, Matrix, solve
from .modules import FiniteModule


@dataclass(frozen=True)
class DualElement:
    """Map (slot, exponent tuple) -> coefficient, slots 0..r-1."""

    nvars: int
    slots: int
    terms: tuple  # sorted tuple of ((slot, expts), Fraction)

    @classmethod
    def make(cls, nvars, slots, terms):
        clean = {}
        for (slot, expts), c in dict(terms).items():
            c = Fraction(c)
            if c == 0:
                continue
            expts = tuple(int(e) for e in expts)
            if len(expts) != nvars or not 0 <= slot < slots:
                raise ValueError("bad dual term")
            clean[(slot, expts)] = clean.get((slot, expts), Fraction(0)) + c
        items = tuple(sorted((k, v) for k, v in clean.items() if v != 0))
        return cls(nvars, slots, items)

    def is_zero(self):
        return not self.terms

    def as_dict(self):
        return dict(self.terms)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (slot, expts), c in self.terms:
            mono = "*".join(
                f"y{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(expts) if e
            )
            body = f"{mono or '1'}*e{slot + 1}^"
            parts.append(body if c == 1 else f"({c})*{body}")
        return " + ".join(parts)


def contract(i: int, d: DualElement) -> DualElement:
    """Action of x_{i+1}: per-slot exponent decrement on y_{i+1}."""
    out = {}
    for (slot, expts), c in d.terms:
        if expts[i] > 0:
            e2 = list(expts)
            e2[i] -= 1
            key = (slot, tuple(e2))
            out[key] = out.get(key, Fraction(0)) + c
    return DualElement.make(d.nvars, d.slots, out)


def parse_dual(nvars, slots, spec) -> DualElement:
    """Build from {slot(1-based): {monomial: coeff}} with monomials like 'y1^2*y2' or '1'."""
    terms = {}
    for slot, monos in spec.items():
        s = int(slot) - 1
        for mono, c in monos.items():
            expts = [0] * nvars
            if mono.strip() != "1":
                for factor in mono.split("*"):
                    factor = factor.strip()
                    if "^" in factor:
                        var, e = factor.split("^")
                    else:
                        var, e = factor, 1
                    expts[int(var.lstrip("y")) - 1] += int(e)
            key = (s, tuple(expts))
            terms[key] = terms.get(key, Fraction(0)) + Fraction(c)
    return DualElement.make(nvars, slots, terms)


def _term_key(slot_expts):
    slot, expts = slot_expts
    return (sum(expts), expts, slot)


def _leading(d: DualElement):
    return max(d.terms, key=lambda kv: _term_key(kv[0]))


def _reduce(d: DualElement, basis):
    """Reduce against echelonized basis elements (leading terms distinct)."""
    work = dict(d.terms)
    changed = True
    while changed:
        changed = False
        for b in basis:
            (lead_key, lead_c) = _leading_item(b)
            c = work.get(lead_key)
            if c:
                factor = c / lead_c
                for k, v in b.terms:
                    nv = work.get(k, Fraction(0)) - factor * v
                    if nv:
                        work[k] = nv
                    else:
                        work.pop(k, None)
                changed = True
    return DualElement.make(d.nvars, d.slots, work)


def _leading_item(d: DualElement):
    key = max((k for k, _ in d.terms), key=_term_key)
    c = dict(d.terms)[key]
    return key, c


def contraction_closure(gens):
    """Graded-lex echelon basis of the span closed under all contractions."""
    nvars = gens[0].nvars
    basis = []
    queue = list(gens)
    while queue:
        d = queue.pop(0)
        rem = _reduce(d, basis)
        if rem.is_zero():
            continue
        basis.append(rem)
        for i in range(nvars):
            nxt = contract(i, rem)
            if not nxt.is_zero():
                queue.append(nxt)
    basis.sort(key=lambda b: _term_key(_leading_item(b)[0]), reverse=True)
    return basis


def module_from_dual_generators(gens, nvars: int) -> FiniteModule:
    """The quotient F/(gens)^perp as a module: dual of the contraction closure."""
    basis = contraction_closure(list(gens))
    dim = len(basis)
    coords = sorted({k for b in basis for k, _ in b.terms}, key=_term_key)
    cmat = Matrix(QQ, [[dict(b.terms).get(k, Fraction(0)) for b in basis] for k in coords])
    actions = []
    for i in range(nvars):
        cols = []
        for b in basis:
            img = contract(i, b)
            vec = [dict(img.terms).get(k, Fraction(0)) for k in coords]
            coeffs = solve(cmat, vec)
            if coeffs is None:
                raise AssertionError("closure is not closed")
            cols.append(coeffs)
        actions.append(Matrix(QQ, cols).transpose())
    closure_module = FiniteModule(actions, m=dim, field=QQ)
    return FiniteModule([a.transpose() for a in closure_module.actions], m=dim, field=QQ, check=False)
