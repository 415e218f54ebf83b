"""Polynomials in z whose coefficients are affine-linear in named unknowns.

Used to carry first-order deformations: an entry ``N_ij(z)`` of an unknown
matrix, and the linearized minors built from such entries.
"""
from __future__ import annotations

from typing import Sequence

from .field import Field
from .poly import BITS, Poly, unpack

CONST = -1  # pseudo-unknown index for the constant part of an affine form


class LinUnknownPoly:
    """Map ``packed z-monomial -> {unknown index | CONST: coefficient}``."""

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars: int, field: Field, terms: dict | None = None):
        self.nvars = nvars
        self.field = field
        self.terms = {} if terms is None else terms

    @classmethod
    def unknown_linear_form(cls, unknowns: Sequence[int], nvars: int, field: Field) -> "LinUnknownPoly":
        """sum_t u[unknowns[t]] * z_t, a generic linear form with unknown coefficients."""
        if len(unknowns) != nvars:
            raise ValueError("one unknown per z-variable expected")
        return cls(nvars, field, {1 << (BITS * t): {u: 1} for t, u in enumerate(unknowns)})

    @classmethod
    def from_poly(cls, p: Poly) -> "LinUnknownPoly":
        return cls(p.nvars, p.field, {k: {CONST: c} for k, c in p.terms.items()})

    def has_unknowns(self) -> bool:
        return any(u != CONST for form in self.terms.values() for u in form)

    def __add__(self, other: "LinUnknownPoly") -> "LinUnknownPoly":
        if isinstance(other, Poly):
            other = LinUnknownPoly.from_poly(other)
        if other.nvars != self.nvars or other.field != self.field:
            raise ValueError("ring mismatch")
        out = {k: dict(v) for k, v in self.terms.items()}
        for k, form in other.terms.items():
            target = out.setdefault(k, {})
            for u, c in form.items():
                target[u] = target.get(u, 0) + c
        return LinUnknownPoly(self.nvars, self.field, out)._normalized()

    def __mul__(self, other) -> "LinUnknownPoly":
        if isinstance(other, LinUnknownPoly):
            if self.has_unknowns() and other.has_unknowns():
                raise ValueError("product of two unknowns is not affine-linear")
            if self.has_unknowns():
                return self._times_poly_terms({k: f[CONST] for k, f in other.terms.items() if CONST in f})
            return other._times_poly_terms({k: f[CONST] for k, f in self.terms.items() if CONST in f})
        if isinstance(other, Poly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ValueError("ring mismatch")
            return self._times_poly_terms(other.terms)
        c = self.field(other)
        return LinUnknownPoly(
            self.nvars, self.field, {k: {u: v * c for u, v in f.items()} for k, f in self.terms.items()}
        )._normalized()

    __rmul__ = __mul__

    def _times_poly_terms(self, pterms: dict) -> "LinUnknownPoly":
        out: dict = {}
        for k2, c2 in pterms.items():
            for k1, form in self.terms.items():
                target = out.setdefault(k1 + k2, {})
                for u, c in form.items():
                    target[u] = target.get(u, 0) + c * c2
        return LinUnknownPoly(self.nvars, self.field, out)._normalized()

    def _normalized(self) -> "LinUnknownPoly":
        red = self.field.reduce
        clean = {}
        for k, form in self.terms.items():
            f = {u: red(c) for u, c in form.items()}
            f = {u: c for u, c in f.items() if c != 0}
            if f:
                clean[k] = f
        self.terms = clean
        return self

    def equations(self) -> list[tuple[tuple[int, ...], dict]]:
        """One affine form per z-monomial; the polynomial vanishes iff all do."""
        out = [(unpack(k, self.nvars), f) for k, f in self.terms.items()]
        out.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return out


def accumulate_linearized(target: dict, cofactor: Poly, unknown_block: Sequence[int]) -> None:
    """Add ``cofactor(z) * sum_t u[unknown_block[t]] z_t`` into ``target``.

    ``target`` maps packed monomials to ``{unknown: coefficient}``.  This is the
    hot loop of the deformation solvers, so it skips building intermediate
    LinUnknownPoly objects.
    """
    shifts = [(1 << (BITS * t), u) for t, u in enumerate(unknown_block)]
    for k, c in cofactor.terms.items():
        for shift, u in shifts:
            row = target.get(k + shift)
            if row is None:
                target[k + shift] = {u: c}
            else:
                row[u] = row.get(u, 0) + c
