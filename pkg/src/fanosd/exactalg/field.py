"""Exact coefficient fields: prime fields GF(p) and the rationals."""
from __future__ import annotations

from fractions import Fraction
import random

DEFAULT_PRIME = 32003


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """A coefficient field.

    ``p is None`` means the rationals; elements are ``int`` or ``Fraction``.
    Otherwise elements of GF(p) are ints in ``[0, p)``.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    def __call__(self, x) -> int | Fraction:
        """Coerce an int, Fraction or numeric string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else x
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        return x if self.p is None else x % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return Fraction(1) / x
        return pow(x, -1, self.p)

    def div(self, a, b):
        return self.reduce(a * self.inv(b))

    def neg(self, x):
        return self.reduce(-x)

    def random_element(self, rng: random.Random, bound: int = 10):
        """Uniform element of GF(p); an integer in [-bound, bound] over Q."""
        if self.p is None:
            return rng.randint(-bound, bound)
        return rng.randrange(self.p)

    def to_str(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = Field(None)


def GF(p: int) -> Field:
    return Field(p)


def field_from_name(name: str) -> Field:
    """Parse ``"QQ"``/``"rationals"``/``"GF(7)"``/``"7"`` into a Field."""
    s = name.strip().lower()
    if s in ("qq", "q", "rational", "rationals"):
        return QQ
    if s.startswith("gf(") and s.endswith(")"):
        s = s[3:-1]
    return Field(int(s))
