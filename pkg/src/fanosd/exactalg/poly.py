"""Sparse multivariate polynomials over an exact field.

Monomials are packed into a single int, 16 bits per exponent, so that
multiplying monomials is integer addition.  Exponents must stay below 2**16.
"""
from __future__ import annotations

from fractions import Fraction
import re
from typing import Iterable, Sequence

from .field import Field, QQ

BITS = 16
MASK = (1 << BITS) - 1


def pack(exps: Sequence[int]) -> int:
    key = 0
    for i, e in enumerate(exps):
        if e < 0 or e > MASK:
            raise ValueError(f"exponent {e} out of range")
        key |= e << (BITS * i)
    return key


def unpack(key: int, nvars: int) -> tuple[int, ...]:
    return tuple((key >> (BITS * i)) & MASK for i in range(nvars))


def default_names(nvars: int) -> list[str]:
    return [f"z{i}" for i in range(nvars)]


class Poly:
    """Element of ``field[z_0, ..., z_{nvars-1}]``.

    ``terms`` maps packed exponent vectors to nonzero coefficients.  Values are
    treated as immutable once constructed.
    """

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars: int, field: Field = QQ, terms: dict | None = None):
        self.nvars = nvars
        self.field = field
        self.terms = {} if terms is None else terms

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, field: Field = QQ) -> "Poly":
        return cls(nvars, field)

    @classmethod
    def const(cls, c, nvars: int, field: Field = QQ) -> "Poly":
        c = field(c)
        return cls(nvars, field, {0: c} if c != 0 else {})

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ) -> "Poly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        return cls(nvars, field, {1 << (BITS * i): field(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, field: Field = QQ) -> "Poly":
        c = field(coeff)
        return cls(len(exps), field, {pack(exps): c} if c != 0 else {})

    @classmethod
    def linear(cls, coeffs: Sequence, field: Field = QQ) -> "Poly":
        """The linear form sum_i coeffs[i] * z_i."""
        terms = {}
        for i, c in enumerate(coeffs):
            c = field(c)
            if c != 0:
                terms[1 << (BITS * i)] = c
        return cls(len(coeffs), field, terms)

    @classmethod
    def from_dict(cls, d: dict, nvars: int, field: Field = QQ) -> "Poly":
        """Build from ``{exponent tuple: coefficient}``."""
        terms = {}
        for exps, c in d.items():
            if len(exps) != nvars:
                raise ValueError("exponent vector length does not match nvars")
            c = field(c)
            if c != 0:
                k = pack(exps)
                terms[k] = field.reduce(terms.get(k, 0) + c)
                if terms[k] == 0:
                    del terms[k]
        return cls(nvars, field, terms)

    # -- basic queries ------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> list[tuple[tuple[int, ...], object]]:
        """(exponents, coefficient) pairs in graded-lex descending order."""
        out = [(unpack(k, self.nvars), c) for k, c in self.terms.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return out

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(pack(exps), 0)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(unpack(k, self.nvars)) for k in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(unpack(k, self.nvars)) for k in self.terms}
        return len(degs) <= 1

    def linear_coefficients(self) -> list:
        """Coefficient vector of a linear form; raises if not homogeneous of degree <= 1."""
        vec = [0] * self.nvars
        for k, c in self.terms.items():
            if k == 0 or k & (k - 1) or (k.bit_length() - 1) % BITS:
                raise ValueError(f"{self} is not a linear form")
            vec[(k.bit_length() - 1) // BITS] = c
        return vec

    # -- arithmetic ---------------------------------------------------
    def _check(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise ValueError(f"arity mismatch: {self.nvars} vs {other.nvars}")
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(other, self.nvars, self.field)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        p = self.field.p
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if p is not None:
                v %= p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Poly(self.nvars, self.field, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, self.field, {k: self.field.reduce(-c) for k, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = self.field(c)
        if c == 0:
            return Poly(self.nvars, self.field)
        p = self.field.p
        if p is None:
            return Poly(self.nvars, self.field, {k: v * c for k, v in self.terms.items()})
        return Poly(self.nvars, self.field, {k: v * c % p for k, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for k2, c2 in b.items():
            for k1, c1 in a.items():
                k = k1 + k2
                out[k] = get(k, 0) + c1 * c2
        p = self.field.p
        if p is None:
            out = {k: v for k, v in out.items() if v}
        else:
            out = {k: v % p for k, v in out.items() if v % p}
        return Poly(self.nvars, self.field, out)

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power")
        result = Poly.const(1, self.nvars, self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            c = self.field(other)
            return self.terms == ({0: c} if c != 0 else {})
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, self.field, frozenset(self.terms.items())))

    # -- evaluation / substitution -----------------------------------
    def evaluate(self, point: Sequence):
        """Value at a point of field^nvars."""
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        f = self.field
        total = 0
        for k, c in self.terms.items():
            term = c
            for i in range(self.nvars):
                e = (k >> (BITS * i)) & MASK
                if e:
                    term = term * point[i] ** e
            total += term
        return f.reduce(total) if f.p is not None else f(total)

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace z_i by images[i]; all images share one target ring."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return Poly.const(self.terms.get(0, 0), 0, self.field)
        target = images[0]
        result = Poly.zero(target.nvars, target.field)
        powers: dict = {}
        for k, c in self.terms.items():
            term = Poly.const(c, target.nvars, target.field)
            for i in range(self.nvars):
                e = (k >> (BITS * i)) & MASK
                if e:
                    pw = powers.get((i, e))
                    if pw is None:
                        pw = powers[(i, e)] = images[i] ** e
                    term = term * pw
            result = result + term
        return result

    def change_field(self, field: Field) -> "Poly":
        return Poly(self.nvars, field, {k: field(c) for k, c in self.terms.items() if field(c) != 0})

    def extend(self, nvars: int) -> "Poly":
        """Same polynomial viewed in a ring with more variables appended."""
        if nvars < self.nvars:
            raise ValueError("cannot shrink the variable set")
        return Poly(nvars, self.field, dict(self.terms))

    # -- printing / parsing ------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = list(names) if names is not None else default_names(self.nvars)
        if not self.terms:
            return "0"
        pieces = []
        for exps, c in self.items():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exps) if e
            )
            neg = False
            if self.field.p is None and c < 0:
                neg, c = True, -c
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            pieces.append(("- " if neg else "+ ") + body)
        s = " ".join(pieces)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Poly({self.to_str()!r}, {self.field!r})"

    @classmethod
    def parse(cls, text: str, names: Sequence[str], field: Field = QQ) -> "Poly":
        """Parse ``"2*z0^2*z1 - z2 + 1/3"`` over the given variable names."""
        return parse_poly(text, names, field)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")
_NUMBER = re.compile(r"^\d+(?:/\d+)?$")


def parse_poly(text: str, names: Sequence[str], field: Field = QQ) -> Poly:
    index = {n: i for i, n in enumerate(names)}
    nvars = len(names)
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial string")
    if s[0] not in "+-":
        s = "+" + s
    parts = _TERM_SPLIT.split(s)
    # split yields ['', sign, term, sign, term, ...]
    if parts[0].strip():
        raise ValueError(f"cannot parse {text!r}")
    result = Poly.zero(nvars, field)
    for sign, term in zip(parts[1::2], parts[2::2]):
        term = term.strip()
        if not term:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = Fraction(1)
        exps = [0] * nvars
        for factor in term.split("*"):
            factor = factor.strip()
            if _NUMBER.match(factor):
                coeff *= Fraction(factor)
                continue
            m = _FACTOR.match(factor)
            if not m or m.group(1) not in index:
                raise ValueError(f"unknown factor {factor!r} in {text!r}")
            exps[index[m.group(1)]] += int(m.group(2) or 1)
        if sign == "-":
            coeff = -coeff
        result = result + Poly.monomial(exps, field(coeff), field)
    return result


def monomials_of_degree(nvars: int, degree: int) -> Iterable[tuple[int, ...]]:
    """All exponent vectors of the given total degree, graded-lex descending."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for e in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - e):
            yield (e,) + rest
