"""Explicit linear spaces of matrices and Borel-fixed staircase patterns.

A point of the Grassmannian is carried as a matrix whose entries are linear
forms in ``z0..zk``; the span of the entries is the subspace itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from math import comb
import json
import re
from typing import Sequence

from .exactalg import DEFAULT_PRIME, GF, QQ, Field, Poly, det_polymat, field_from_name, matrix_rank, parse_poly
from .exactalg.poly import default_names
from .invariants import (
    ALTERNATING, RECTANGULAR, SYMMETRIC, DomainError, Params, Variant, kappa, normalize_tag, s_max,
)

DEFAULT_FIELD = GF(DEFAULT_PRIME)

NONE = "none"
_SYMMETRY_OF = {SYMMETRIC: SYMMETRIC, ALTERNATING: ALTERNATING, RECTANGULAR: NONE}


@dataclass
class LinMatrixSpace:
    """A rows x cols matrix of linear forms; its entries span the subspace."""

    rows: int
    cols: int
    entries: list[list[Poly]]
    symmetry: str = NONE
    names: list[str] | None = None
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise ValueError("entries do not match the declared shape")
        if self.symmetry not in (SYMMETRIC, ALTERNATING, NONE):
            raise ValueError(f"unknown symmetry {self.symmetry!r}")
        if self.names is None:
            self.names = default_names(self.nvars)
        self.check_symmetry()

    @property
    def nvars(self) -> int:
        return self.entries[0][0].nvars

    @property
    def field(self) -> Field:
        return self.entries[0][0].field

    def check_symmetry(self) -> None:
        if self.symmetry == NONE:
            return
        if self.rows != self.cols:
            raise ValueError("symmetric and alternating spaces must be square")
        for i in range(self.rows):
            for j in range(i, self.cols):
                a, b = self.entries[i][j], self.entries[j][i]
                if self.symmetry == SYMMETRIC and a != b:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")
                if self.symmetry == ALTERNATING and a != -b:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
            if self.symmetry == ALTERNATING and self.entries[i][i]:
                raise ValueError("alternating matrix with nonzero diagonal")

    def free_positions(self) -> list[tuple[int, int]]:
        """Positions that determine the matrix (upper triangle when symmetric)."""
        if self.symmetry == SYMMETRIC:
            return [(i, j) for i in range(self.rows) for j in range(i, self.cols)]
        if self.symmetry == ALTERNATING:
            return [(i, j) for i in range(self.rows) for j in range(i + 1, self.cols)]
        return [(i, j) for i in range(self.rows) for j in range(self.cols)]

    def coefficient_matrix(self) -> list[list]:
        """One row per z-variable: its coefficient in each free position."""
        pos = self.free_positions()
        out = [[0] * len(pos) for _ in range(self.nvars)]
        for c, (i, j) in enumerate(pos):
            for t, v in enumerate(self.entries[i][j].linear_coefficients()):
                out[t][c] = v
        return out

    def span_dim(self) -> int:
        return matrix_rank(self.coefficient_matrix(), self.field, len(self.free_positions()))

    def is_linear(self) -> bool:
        try:
            self.coefficient_matrix()
        except ValueError:
            return False
        return True

    def change_field(self, field: Field) -> "LinMatrixSpace":
        ents = [[e.change_field(field) for e in row] for row in self.entries]
        return LinMatrixSpace(self.rows, self.cols, ents, self.symmetry, list(self.names), dict(self.meta))

    def evaluate(self, point: Sequence) -> list[list]:
        return [[e.evaluate(point) for e in row] for row in self.entries]

    def to_json_obj(self) -> dict:
        obj = {
            "rows": self.rows,
            "cols": self.cols,
            "symmetry": self.symmetry,
            "entries": [[e.to_str(self.names) for e in row] for row in self.entries],
            "vars": list(self.names),
            "field": repr(self.field),
        }
        if self.meta:
            obj["meta"] = self.meta
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: dict, field: Field | None = None) -> "LinMatrixSpace":
        for key in ("rows", "cols", "entries"):
            if key not in obj:
                raise ValueError(f"matrix JSON is missing {key!r}")
        if field is None:
            field = field_from_name(obj["field"]) if "field" in obj else DEFAULT_FIELD
        texts = [[str(e) for e in row] for row in obj["entries"]]
        names = obj.get("vars") or _infer_names(texts)
        ents = [[parse_poly(t, names, field) for t in row] for row in texts]
        symmetry = obj.get("symmetry", NONE)
        return cls(int(obj["rows"]), int(obj["cols"]), ents, symmetry, list(names), dict(obj.get("meta", {})))

    @classmethod
    def from_json(cls, text: str, field: Field | None = None) -> "LinMatrixSpace":
        return cls.from_json_obj(json.loads(text), field)

    def pretty(self) -> str:
        cells = [[e.to_str(self.names) for e in row] for row in self.entries]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_ZNAME = re.compile(r"^z(\d+)$")


def _infer_names(texts) -> list[str]:
    found = {m for row in texts for t in row for m in _IDENT.findall(t)}
    if all(_ZNAME.match(x) for x in found):
        top = max((int(_ZNAME.match(x).group(1)) for x in found), default=0)
        return default_names(top + 1)
    return sorted(found)


def _zero(nvars, field):
    return Poly.zero(nvars, field)


def _matrix_from_cells(rows, cols, cells, symmetry, names, field) -> LinMatrixSpace:
    """Place variable t at cells[t] (and its mirror image when symmetric)."""
    nvars = len(cells)
    ents = [[_zero(nvars, field) for _ in range(cols)] for _ in range(rows)]
    for t, (i, j) in enumerate(cells):
        v = Poly.var(t, nvars, field)
        ents[i][j] = v
        if symmetry == SYMMETRIC:
            ents[j][i] = v
        elif symmetry == ALTERNATING:
            ents[j][i] = -v
    return LinMatrixSpace(rows, cols, ents, symmetry, names)


def generic_matrix(variant: str, n: int, m: int | None = None, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    """One fresh variable per free position, named by its 1-indexed position."""
    tag = normalize_tag(variant)
    rows = m if tag == RECTANGULAR else n
    if tag == RECTANGULAR and m is None:
        raise DomainError("rectangular generic matrix needs m")
    if tag == SYMMETRIC:
        cells = [(i, j) for i in range(n) for j in range(i, n)]
    elif tag == ALTERNATING:
        cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    else:
        cells = [(i, j) for i in range(rows) for j in range(n)]
    names = [f"x{i + 1}_{j + 1}" for i, j in cells]
    return _matrix_from_cells(rows, n, cells, _SYMMETRY_OF[tag], names, field)


def in_standard_zero_block(params: Params, s: int, i: int, j: int) -> bool:
    """Whether 0-indexed position (i, j) is forced to zero in the standard s-compression space."""
    r = params.r
    a, b = i + 1, j + 1
    if params.tag == RECTANGULAR:
        return a > s and b > r - s - 1
    if params.tag == ALTERNATING and a == b:
        return True
    return (a > s and b > r - s - 1) or (a > r - s - 1 and b > s)


def standard_cells(params: Params, s: int) -> list[tuple[int, int]]:
    if not 0 <= s <= s_max(params):
        raise DomainError(f"s={s} outside 0..{s_max(params)}")
    rows = params.m if params.tag == RECTANGULAR else params.n
    if params.tag == SYMMETRIC:
        pos = [(i, j) for i in range(rows) for j in range(i, params.n)]
    elif params.tag == ALTERNATING:
        pos = [(i, j) for i in range(rows) for j in range(i + 1, params.n)]
    else:
        pos = [(i, j) for i in range(rows) for j in range(params.n)]
    return [(i, j) for i, j in pos if not in_standard_zero_block(params, s, i, j)]


def standard_compression(params: Params, s: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    cells = standard_cells(params, s)
    rows = params.m if params.tag == RECTANGULAR else params.n
    names = [f"x{i + 1}_{j + 1}" for i, j in cells]
    space = _matrix_from_cells(rows, params.n, cells, _SYMMETRY_OF[params.tag], names, field)
    space.meta.update(kind="standard-compression", s=s)
    return space


def block_D(s: int, z: Sequence[Poly]) -> LinMatrixSpace:
    """The s x (s+1) band with z0, z1, z2 on consecutive diagonals.

    s = 1 is allowed: the single row (z0 z1), since z2 falls off the edge.
    """
    if s < 1:
        raise DomainError("block_D needs s >= 1")
    if len(z) != 3:
        raise ValueError("block_D takes exactly three forms")
    nvars, field = z[0].nvars, z[0].field
    ents = [[_zero(nvars, field) for _ in range(s + 1)] for _ in range(s)]
    for i in range(s):
        for d in range(3):
            if i + d <= s:
                ents[i][i + d] = z[d]
    meta = {"kind": "block-D", "s": s}
    if s == 1:
        meta["note"] = "single-row case (z0 z1)"
    return LinMatrixSpace(s, s + 1, ents, NONE, meta=meta)


def block_D_vars(s: int, k: int, field: Field = DEFAULT_FIELD, use_z2: bool = True) -> LinMatrixSpace:
    """block_D over z0..zk with (z0, z1, z2), or (z0, z1, 0) when use_z2 is off or k < 2."""
    nvars = k + 1
    zs = [Poly.var(t, nvars, field) if t < nvars else _zero(nvars, field) for t in range(3)]
    if not use_z2:
        zs[2] = _zero(nvars, field)
    return block_D(s, zs)


def p_closed(s: int, i: int, field: Field = QQ) -> Poly:
    """Maximal minor of the band matrix with column i (1-indexed) deleted, in closed form."""
    if not 1 <= i <= s + 1:
        raise DomainError(f"i={i} outside 1..{s + 1}")
    terms = {}
    ell = 0
    while s - i + 1 - 2 * ell >= 0:
        c = (-1) ** ell * comb(s - i - ell + 1, ell)
        if c:
            terms[(i + ell - 1, s - i + 1 - 2 * ell, ell)] = c
        ell += 1
    return Poly.from_dict(terms, 3, field)


def deleted_column_minor(D: LinMatrixSpace, i: int) -> Poly:
    """Determinant of D (s x (s+1)) with column i (1-indexed) removed."""
    if D.cols != D.rows + 1:
        raise ValueError("D must be s x (s+1)")
    keep = [c for c in range(D.cols) if c != i - 1]
    return det_polymat([[row[c] for c in keep] for row in D.entries])


def bordered_matrix(A: Sequence[Sequence[Poly]], D: LinMatrixSpace) -> list[list[Poly]]:
    s, w = D.rows, D.cols
    if len(A) != w or any(len(row) != w for row in A):
        raise ValueError(f"A must be {w} x {w} to border D")
    zero = _zero(D.nvars, D.field)
    top = [[zero] * s + list(D.entries[i]) for i in range(s)]
    bottom = [[D.entries[i][a] for i in range(s)] + list(A[a]) for a in range(w)]
    return top + bottom


def bordered_expand(A: Sequence[Sequence[Poly]], D: LinMatrixSpace) -> Poly:
    """det [[0, D], [D^t, A]] via the expansion (-1)^s sum (-1)^(i+j) a_ij p_i p_j.

    The overall sign only matters up to the vanishing of the sum.
    """
    s = D.rows
    if D.cols != s + 1:
        raise ValueError("D must be s x (s+1)")
    if len(A) != s + 1 or any(len(row) != s + 1 for row in A):
        raise ValueError(f"A must be {s + 1} x {s + 1}")
    p = [deleted_column_minor(D, i + 1) for i in range(s + 1)]
    total = _zero(D.nvars, D.field)
    for i in range(s + 1):
        for j in range(s + 1):
            term = A[i][j] * p[i] * p[j]
            total = total + term if (i + j + s) % 2 == 0 else total - term
    direct = det_polymat(bordered_matrix(A, D))
    if direct != total:
        raise AssertionError("bordered expansion disagrees with the determinant")
    return total


def kronecker_pencil(s: int, n_prime: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    """[[0, B], [B^t, 0]] with B the s x (s+1+n'-r') z0/z1 band, r' = 2s+1."""
    r_prime = 2 * s + 1
    if s < 1 or n_prime < r_prime:
        raise DomainError(f"need s >= 1 and n' >= 2s+1, got s={s}, n'={n_prime}")
    z0, z1 = Poly.var(0, 2, field), Poly.var(1, 2, field)
    zero = _zero(2, field)
    ents = [[zero] * n_prime for _ in range(n_prime)]
    for i in range(s):
        for c, v in ((i, z0), (i + 1, z1)):
            ents[i][s + c] = v
            ents[s + c][i] = v
    return LinMatrixSpace(n_prime, n_prime, ents, SYMMETRIC, meta={"kind": "kronecker-pencil", "s": s, "r": r_prime})


def middle_point(B: Sequence[Sequence[Poly]], D: LinMatrixSpace, k: int | None = None) -> LinMatrixSpace:
    """Q = [[B, D], [D^t, 0]] with B s x s symmetric and D s x (s+1)."""
    s = D.rows
    if D.cols != s + 1:
        raise ValueError("D must be s x (s+1)")
    if len(B) != s or any(len(row) != s for row in B):
        raise ValueError("B must be s x s")
    n = 2 * s + 1
    zero = _zero(D.nvars, D.field)
    ents = [[zero] * n for _ in range(n)]
    for i in range(s):
        for j in range(s):
            ents[i][j] = B[i][j]
        for c in range(s + 1):
            ents[i][s + c] = D.entries[i][c]
            ents[s + c][i] = D.entries[i][c]
    Q = LinMatrixSpace(n, n, ents, SYMMETRIC, meta={"kind": "middle", "s": s})
    want = D.nvars if k is None else k + 1
    if Q.span_dim() != want:
        raise DomainError(f"entries span {Q.span_dim()} dimensions, expected {want}")
    return Q


def default_middle_point(n: int, k: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    """Middle point with D the (z0, z1, z2) band; further variables go to D's empty cells, then B, then the band."""
    if n % 2 == 0 or n < 3:
        raise DomainError("middle point needs odd n >= 3")
    s = (n - 1) // 2
    params = Params.make(SYMMETRIC, n, n, k)
    if not 1 <= k <= kappa(params, s):
        raise DomainError(f"middle point needs 1 <= k <= {kappa(params, s)}")
    nvars = k + 1
    with_z2 = k >= 2 and s >= 2
    D = block_D_vars(s, k, field, use_z2=with_z2)
    B = [[_zero(nvars, field) for _ in range(s)] for _ in range(s)]
    slots = [("D", i, c) for i in range(s) for c in range(s + 1) if not D.entries[i][c]]
    slots += [("B", i, j) for i in range(s) for j in range(i, s)]
    slots += [("D", i, c) for i in range(s) for c in range(s + 1) if D.entries[i][c]]
    extra = range(3 if with_z2 else 2, nvars)
    for t, (which, i, j) in zip(extra, slots):
        v = Poly.var(t, nvars, field)
        if which == "B":
            B[i][j] = v
            B[j][i] = v
        else:
            D.entries[i][j] = D.entries[i][j] + v
    return middle_point(B, D, k)


def intersection_point(n: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    """[[z0, z1, 0...], [z1, 0, ...], 0...]: lies on every line component."""
    if n < 2:
        raise DomainError("need n >= 2")
    z0, z1 = Poly.var(0, 2, field), Poly.var(1, 2, field)
    zero = _zero(2, field)
    ents = [[zero] * n for _ in range(n)]
    ents[0][0], ents[0][1], ents[1][0] = z0, z1, z1
    return LinMatrixSpace(n, n, ents, SYMMETRIC, meta={"kind": "intersection"})


def diagonal_space(diag: Sequence[int], nvars: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    """diag(z_{d0}, z_{d1}, ...) with -1 meaning a zero entry."""
    n = len(diag)
    ents = [[_zero(nvars, field) for _ in range(n)] for _ in range(n)]
    for i, t in enumerate(diag):
        if t >= 0:
            ents[i][i] = Poly.var(t, nvars, field)
    return LinMatrixSpace(n, n, ents, SYMMETRIC)


# -- Borel-fixed staircase patterns ---------------------------------------

def is_borel_pattern(space: LinMatrixSpace) -> bool:
    """Entries are distinct single variables and the zero set is down-right closed."""
    pos = space.free_positions()
    seen = set()
    zero = set()
    for i, j in pos:
        e = space.entries[i][j]
        if not e.terms:
            zero.add((i, j))
            continue
        if len(e.terms) != 1:
            return False
        (key, _), = e.terms.items()
        if key == 0 or key & (key - 1) or key in seen:
            return False
        seen.add(key)
    if space.symmetry == NONE:
        return all(
            (a, b) in zero
            for i, j in zero
            for a in range(i, space.rows)
            for b in range(j, space.cols)
        )
    # on the upper triangle (strict when alternating), closure below and to the right
    pos_set = set(pos)
    return all(
        (a, b) in zero
        for i, j in zero
        for a in range(i, space.rows)
        for b in range(j, space.cols)
        if (a, b) in pos_set
    )


@dataclass(frozen=True)
class StaircasePattern:
    """Up-left closed support of a Borel-fixed point.

    ``row_lengths`` describe the full diagram (for symmetric and alternating
    variants it is self-conjugate, ignoring the diagonal for alternating);
    ``cells`` lists the free positions, upper triangle only when symmetric.
    """

    variant: str
    n: int
    m: int | None
    row_lengths: tuple[int, ...]
    cells: tuple[tuple[int, int], ...]
    fits: frozenset = frozenset()

    @property
    def size(self) -> int:
        return len(self.cells)

    def to_space(self, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
        rows = self.m if self.variant == RECTANGULAR else self.n
        return _matrix_from_cells(rows, self.n, list(self.cells), _SYMMETRY_OF[self.variant], None, field)

    def as_dict(self) -> dict:
        return {"row_lengths": list(self.row_lengths), "cells": [list(c) for c in self.cells], "fits": sorted(self.fits)}


@dataclass(frozen=True)
class FlagSpec:
    dimU: int
    dimW: int
    nested: bool = True

    @classmethod
    def for_s(cls, params: Params, s: int, nested: bool = True) -> "FlagSpec":
        if not 0 <= s <= s_max(params):
            raise DomainError(f"s={s} outside 0..{s_max(params)}")
        n, r = params.n, params.r
        spec = cls(s + 1 + n - r, n - s, nested)
        if nested and spec.dimU > spec.dimW:
            raise DomainError("nested flag needs dim U <= dim W")
        return spec

    def s_value(self, n: int, r: int) -> int:
        s = n - self.dimW
        if self.dimU != s + 1 + n - r:
            raise ValueError("dimensions do not encode a single s")
        return s


def _upper_cells_from_distinct_parts(parts: Sequence[int], start_offset: int) -> list[tuple[int, int]]:
    # row i holds parts[i] cells starting at column i + start_offset
    return [(i, i + start_offset + c) for i, a in enumerate(parts) for c in range(a)]


def symmetric_staircases(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Upper-triangle cell sets of all self-conjugate diagrams in an n x n box.

    Built from strictly decreasing row counts a_1 > a_2 > ... (Durfee rows).
    """
    out = []

    def rec(prefix, top):
        out.append(tuple(_upper_cells_from_distinct_parts(prefix, 0)))
        i = len(prefix)
        for a in range(min(top, n - i), 0, -1):
            rec(prefix + [a], a - 1)

    rec([], n)
    return out


def _row_sequences(nrows: int, bound) -> list[list[int]]:
    """Nonincreasing end-columns e_0 >= e_1 >= ..., each at most bound(i)."""
    out = []

    def rec(prefix):
        i = len(prefix)
        if i == nrows:
            out.append(list(prefix))
            return
        hi = bound(i)
        if prefix:
            hi = min(hi, prefix[-1])
        for e in range(hi, -1, -1):
            rec(prefix + [e])

    rec([])
    return out


def all_staircases(variant: str, n: int, m: int | None = None) -> list[tuple[tuple[int, int], ...]]:
    """Every up-left closed support (free positions only) for the variant."""
    tag = normalize_tag(variant)
    if tag == SYMMETRIC:
        return symmetric_staircases(n)
    if tag == ALTERNATING:
        # row i keeps columns i+1 .. e_i - 1; e nonincreasing in the full diagram
        seqs = _row_sequences(n, lambda i: n)
        found = set()
        for e in seqs:
            cells = tuple((i, j) for i in range(n) for j in range(i + 1, e[i]))
            found.add(cells)
        return sorted(found, key=lambda c: (len(c), c))
    seqs = _row_sequences(m, lambda i: n)
    return [tuple((i, j) for i in range(m) for j in range(e[i])) for e in seqs]


def _row_lengths(cells, nrows, mirrored) -> tuple[int, ...]:
    """Row i of the full diagram ends at its rightmost occupied column."""
    full = set(cells)
    if mirrored:
        full |= {(j, i) for i, j in cells}
    ends = [max((j + 1 for a, j in full if a == i), default=0) for i in range(nrows)]
    while ends and ends[-1] == 0:
        ends.pop()
    return tuple(ends)


@lru_cache(maxsize=256)
def _patterns_by_size(tag: str, n: int, m: int | None, r: int) -> dict:
    params = Params(Variant(tag, m if tag == RECTANGULAR else None), n, r, 0)
    allowed = {s: set(standard_cells(params, s)) for s in range(s_max(params) + 1)}
    buckets: dict[int, list[StaircasePattern]] = {}
    for cells in all_staircases(tag, n, m):
        fits = frozenset(s for s, ok in allowed.items() if all(c in ok for c in cells))
        if not fits:
            continue
        lengths = _row_lengths(cells, m if tag == RECTANGULAR else n, tag != RECTANGULAR)
        pat = StaircasePattern(tag, n, m, lengths, tuple(cells), fits)
        buckets.setdefault(len(cells), []).append(pat)
    return buckets


def enumerate_borel_fixed(params: Params) -> list[StaircasePattern]:
    """Staircase supports with k+1 free cells inside some standard compression pattern."""
    buckets = _patterns_by_size(params.tag, params.n, params.m, params.r)
    return list(buckets.get(params.k + 1, []))
