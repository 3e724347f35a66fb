"""Field tags for exact arithmetic: Q, prime fields F_p (p >= 5), and Q(t).

A field object bundles the element operations so matrices can stay generic.
Elements are plain python objects (Fraction, int residue, RatFunc); the field
tag on a matrix is what prevents accidental mixed-field arithmetic.
"""

from __future__ import annotations

from fractions import Fraction


class FieldMismatchError(TypeError):
    pass


class BadPrimeError(ArithmeticError):
    """A denominator hit the modulus while reducing mod p."""


class RationalField:
    name = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x):
        return x if type(x) is Fraction else Fraction(x)

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
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in QQ")
        return 1 / a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def to_str(a):
        return str(a)

    def from_str(self, s):
        return Fraction(s)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class PrimeField:
    """F_p with residues stored in [0, p)."""

    def __init__(self, p: int):
        if p < 5:
            raise ValueError("prime fields below 5 are out of scope")
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        return int(x) % self.p

    def from_fraction(self, q: Fraction):
        if q.denominator % self.p == 0:
            raise BadPrimeError(f"denominator {q.denominator} divisible by {self.p}")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def invert(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"inverse of 0 in {self.name}")
        return pow(a, -1, self.p)

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def to_str(a):
        return str(a)

    def from_str(self, s):
        return self.coerce(Fraction(s))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return self.name


_GF_CACHE: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _GF_CACHE:
        _GF_CACHE[p] = PrimeField(p)
    return _GF_CACHE[p]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True
