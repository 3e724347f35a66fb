"""Univariate polynomials Q[t] and the rational function field Q(t)."""

from __future__ import annotations

import re
from fractions import Fraction


class Poly:
    """Dense coefficient list, low degree first, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls([Fraction(c)])

    @classmethod
    def t(cls):
        return cls([0, 1])

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        other = _as_poly(other)
        return other is not None and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) + (-self)

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        acc = Poly.const(1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def divmod(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        qdeg = len(rem) - len(other.coeffs)
        if qdeg < 0:
            return Poly(), self
        quo = [Fraction(0)] * (qdeg + 1)
        lead = other.coeffs[-1]
        for i in range(qdeg, -1, -1):
            c = rem[i + other.degree] / lead
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quo), Poly(rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def monic(self):
        if self.is_zero():
            return self
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def valuation(self):
        """Order of vanishing at t = 0 (inf for the zero polynomial)."""
        if self.is_zero():
            return None
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def eval(self, x):
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                tpow = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    parts.append(tpow)
                elif c == -1:
                    parts.append(f"-{tpow}")
                else:
                    parts.append(f"{c}*{tpow}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    __repr__ = __str__


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return None


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


_TERM_RE = re.compile(
    r"(?P<sign>[+-])?\s*(?P<coef>\d+(?:/\d+)?)?\s*(?:\*\s*)?(?P<t>t(?:\^(?P<exp>\d+))?)?\s*"
)


def parse_poly(s: str) -> Poly:
    """Parse '1 - 2*t + t^3' style strings."""
    s = s.strip()
    if not s:
        raise ValueError("empty polynomial string")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial {s!r} at position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        coef = m.group("coef")
        tpart = m.group("t")
        if coef is None and tpart is None:
            raise ValueError(f"cannot parse polynomial {s!r} at position {pos}")
        c = Fraction(coef) if coef is not None else Fraction(1)
        e = 0
        if tpart is not None:
            e = int(m.group("exp")) if m.group("exp") else 1
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = m.end()
    n = max(coeffs) + 1 if coeffs else 0
    return Poly([coeffs.get(i, Fraction(0)) for i in range(n)])


class RatFunc:
    """Element of Q(t), normalized with monic denominator and gcd 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead = den.coeffs[-1]
        if lead != 1:
            num = num * Poly.const(1 / lead)
            den = den * Poly.const(1 / lead)
        self.num = num
        self.den = den

    @classmethod
    def coerce_from(cls, x):
        if isinstance(x, RatFunc):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly.const(Fraction(x)))

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def __eq__(self, other):
        other = RatFunc.coerce_from(other)
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = RatFunc.coerce_from(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.coerce_from(other))

    def __rsub__(self, other):
        return RatFunc.coerce_from(other) + (-self)

    def __mul__(self, other):
        other = RatFunc.coerce_from(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RatFunc.coerce_from(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(t)")
        return RatFunc(self.num * other.den, self.den * other.num)

    def valuation(self):
        """t-adic valuation; None for zero."""
        if self.is_zero():
            return None
        return self.num.valuation() - self.den.valuation()

    def eval_at_zero(self):
        v = self.valuation()
        if v is None:
            return Fraction(0)
        if v < 0:
            raise ZeroDivisionError("pole at t = 0")
        if v > 0:
            return Fraction(0)
        nv = self.num.valuation()
        return self.num.coeffs[nv] / self.den.coeffs[self.den.valuation()]

    def eval(self, x):
        d = self.den.eval(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at t = {x}")
        return self.num.eval(x) / d

    def __str__(self):
        if self.is_poly():
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def parse_ratfunc(s: str) -> RatFunc:
    s = s.strip()
    if "/" in s and ("t" in s or "(" in s):
        # split on a top-level slash: "(num)/(den)" or "num/den" with t present
        depth = 0
        for i, ch in enumerate(s):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "/" and depth == 0:
                num, den = s[:i], s[i + 1 :]
                return RatFunc(parse_poly(num.strip().strip("()")), parse_poly(den.strip().strip("()")))
    if "t" not in s:
        return RatFunc(Poly.const(Fraction(s)))
    return RatFunc(parse_poly(s))


class FunctionField:
    """Q(t) as a field tag for Matrix."""

    name = "QQ(t)"

    def __init__(self):
        self.zero = RatFunc(Poly())
        self.one = RatFunc(Poly.const(1))

    def coerce(self, x):
        return RatFunc.coerce_from(x)

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def invert(a):
        if a.is_zero():
            raise ZeroDivisionError("inverse of 0 in Q(t)")
        return RatFunc(a.den, a.num)

    @staticmethod
    def is_zero(a):
        return a.is_zero()

    @staticmethod
    def to_str(a):
        return str(a)

    def from_str(self, s):
        return parse_ratfunc(s)

    def __repr__(self):
        return "QQ(t)"


QT = FunctionField()
