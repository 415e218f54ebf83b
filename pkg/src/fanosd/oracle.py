"""Brute-force checks over small prime fields.

Subspaces are enumerated once each through their reduced row echelon bases,
so counts can be compared against Gaussian binomials.  A failed flag search
only says something about GF(q)-rational flags, never about the closure.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
import json
import random
from typing import Iterator

from .exactalg import Field, MinorCache, Poly, rank_nullspace, rref
from .invariants import ALTERNATING, RECTANGULAR, SYMMETRIC, DomainError, Params, ambient_dim, s_max
from .spaces import NONE, LinMatrixSpace, generic_matrix

OVER_FQ_CAVEAT = "absence of a flag over GF({q}) is evidence, not proof, of absence over the algebraic closure"

# default exhaustive-size limits
MAX_FLAG_N = 5
MAX_FLAG_Q = 9
MAX_SCAN_Q = 3
MAX_SCAN_AMBIENT = 6
MAX_SCAN_K = 1


def gaussian_binomial(N: int, d: int, q: int) -> int:
    """Number of d-dimensional subspaces of GF(q)^N."""
    if d < 0 or d > N:
        return 0
    num = den = 1
    for i in range(d):
        num *= q ** (N - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def echelon_subspaces(N: int, d: int, q: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Every d-dim subspace of GF(q)^N as its reduced row echelon basis.

    Order: pivot sets lexicographically, then free entries lexicographically.
    """
    for pivots in combinations(range(N), d):
        pset = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, N) if j not in pset]
        for values in product(range(q), repeat=len(free)):
            rows = [[0] * N for _ in range(d)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, j), v in zip(free, values):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def _prime_field(q: int, symmetric: bool) -> Field:
    try:
        F = Field(q)
    except ValueError:
        raise DomainError(f"q={q} is not supported; only prime fields are implemented") from None
    if symmetric and q == 2:
        raise DomainError("characteristic 2 is excluded for symmetric matrices")
    return F


def find_nonzero_minor(space: LinMatrixSpace, r: int, cache: MinorCache | None = None):
    """(rows, cols, minor) of the first nonvanishing r x r minor, or None."""
    if r > min(space.rows, space.cols):
        return None
    cache = cache or MinorCache(space.entries)
    for rows in combinations(range(space.rows), r):
        for cols in combinations(range(space.cols), r):
            m = cache.minor(rows, cols)
            if m.terms:
                return rows, cols, m
    return None


def verify_all_rank_lt(space: LinMatrixSpace, r: int) -> bool:
    """Every r x r minor is the zero polynomial, so every member has rank < r."""
    return find_nonzero_minor(space, r) is None


@dataclass(frozen=True)
class FqFlag:
    U: tuple[tuple[int, ...], ...]
    W: tuple[tuple[int, ...], ...]
    q: int

    @property
    def nested(self) -> bool:
        F = Field(self.q)
        rank_w = len(rref(self.W, F)[1]) if self.W else 0
        rank_both = len(rref(list(self.W) + list(self.U), F)[1]) if (self.W or self.U) else 0
        return rank_w == rank_both

    def swapped(self) -> "FqFlag":
        return FqFlag(self.W, self.U, self.q)

    def as_dict(self) -> dict:
        return {"U": [list(u) for u in self.U], "W": [list(w) for w in self.W], "q": self.q}


def _coefficient_matrices(space: LinMatrixSpace, F: Field) -> list[list[list[int]]]:
    """M_t with space = sum_t z_t M_t, reduced into GF(q)."""
    mats = [[[0] * space.cols for _ in range(space.rows)] for _ in range(space.nvars)]
    for i in range(space.rows):
        for j in range(space.cols):
            for t, c in enumerate(space.entries[i][j].linear_coefficients()):
                mats[t][i][j] = F(c)
    return mats


def _canonical(rows, F: Field) -> tuple[tuple[int, ...], ...]:
    reduced, _ = rref(rows, F)
    return tuple(tuple(int(x) for x in r) for r in reduced)


def _orthogonal_complement(U, mats, F: Field, ncols: int, left: bool):
    """Basis of {w : u M_t w^T = 0} (left=True) or {w : w M_t u^T = 0}."""
    eqs = []
    for u in U:
        for M in mats:
            if left:
                eqs.append([F.reduce(sum(u[i] * M[i][j] for i in range(len(u)))) for j in range(ncols)])
            else:
                eqs.append([F.reduce(sum(M[i][j] * u[j] for j in range(len(u)))) for i in range(ncols)])
    if not eqs:
        return [[1 if a == b else 0 for b in range(ncols)] for a in range(ncols)]
    _, basis = rank_nullspace(eqs, F, ncols)
    return [[int(x) for x in v] for v in basis]


def _subspaces_between(U, Wmax, dimW: int, F: Field):
    """All dimW-subspaces W with U <= W <= Wmax (U = () gives all of them)."""
    q = F.p
    # complete U to a basis of Wmax, then choose the remaining directions
    basis_u = [list(u) for u in U]
    extra = []
    cur = _canonical(basis_u, F) if basis_u else ()
    for v in Wmax:
        trial = list(cur) + [v]
        if len(rref(trial, F)[1]) > len(cur):
            extra.append(v)
            cur = _canonical(trial, F)
    need = dimW - len(basis_u)
    if need < 0 or need > len(extra):
        return
    for coeffs in echelon_subspaces(len(extra), need, q):
        rows = [[F.reduce(sum(c * e[j] for c, e in zip(row, extra))) for j in range(len(extra[0]))] for row in coeffs]
        yield _canonical(basis_u + rows, F)


def _check_flag(space: LinMatrixSpace, U, W, rect: bool) -> None:
    for u in U:
        for w in W:
            total = Poly.zero(space.nvars, space.field)
            for i in range(space.rows):
                for j in range(space.cols):
                    a, b = (w[i], u[j]) if rect else (u[i], w[j])
                    if a and b and space.entries[i][j].terms:
                        total = total + space.entries[i][j] * (a * b)
            if total.terms:
                raise AssertionError("flag search returned a non-orthogonal pair")


def find_flags(space: LinMatrixSpace, s: int, q: int, nested: bool = True, r: int | None = None,
               max_n: int = MAX_FLAG_N, max_q: int = MAX_FLAG_Q) -> list[FqFlag]:
    """All GF(q)-rational flags witnessing an s-compression structure.

    U has dimension s+1+n-r and W dimension n-s (m-s on the row side for
    rectangular spaces); nested asks for U inside W.
    """
    if r is None:
        r = space.meta.get("r")
    if r is None:
        raise DomainError("rank bound r is required")
    rect = space.symmetry == NONE
    n = space.cols
    if n > max_n or q > max_q or (rect and space.rows > max_n):
        raise DomainError(f"flag search limited to n <= {max_n}, q <= {max_q}")
    if rect and nested:
        raise DomainError("nested flags are only defined for square symmetric/alternating spaces")
    F = _prime_field(q, space.symmetry == SYMMETRIC)
    Fspace = space.change_field(F)
    mats = _coefficient_matrices(Fspace, F)
    dimU = s + 1 + n - r
    dimW = (space.rows if rect else n) - s
    if dimU < 0 or dimW < 0:
        raise DomainError(f"s={s} gives negative flag dimensions")
    out = []
    for U in echelon_subspaces(n, dimU, q):
        Wmax = _orthogonal_complement(U, mats, F, space.rows if rect else n, left=not rect)
        if len(Wmax) < dimW:
            continue
        if nested:
            if len(rref([list(w) for w in Wmax] + [list(u) for u in U], F)[1]) > len(Wmax):
                continue
            candidates = _subspaces_between(U, Wmax, dimW, F)
        else:
            candidates = _subspaces_between((), Wmax, dimW, F)
        for W in candidates:
            _check_flag(Fspace, U, W, rect)
            out.append(FqFlag(U, W, q))
    return out


@dataclass
class Classification:
    s_values: frozenset
    flags: dict
    q: int

    @property
    def caveat(self) -> str:
        return OVER_FQ_CAVEAT.format(q=self.q)

    def as_dict(self) -> dict:
        return {
            "s_values": sorted(self.s_values),
            "flag_counts": {str(s): len(f) for s, f in sorted(self.flags.items())},
            "q": self.q,
            "caveat": self.caveat,
        }


def classify_point(space: LinMatrixSpace, params: Params, q: int) -> Classification:
    """The s values for which a nested flag exists over GF(q)."""
    nested = params.tag != RECTANGULAR
    flags = {}
    for s in range(s_max(params) + 1):
        flags[s] = find_flags(space, s, q, nested, params.r)
    return Classification(frozenset(s for s, f in flags.items() if f), flags, q)


def _space_from_basis(basis, cells, rows, cols, symmetry, F: Field) -> LinMatrixSpace:
    nv = len(basis)
    ents = [[Poly.zero(nv, F) for _ in range(cols)] for _ in range(rows)]
    for c, (i, j) in enumerate(cells):
        e = Poly.linear([b[c] for b in basis], F)
        ents[i][j] = e
        if symmetry == SYMMETRIC:
            ents[j][i] = e
        elif symmetry == ALTERNATING:
            ents[j][i] = -e
    return LinMatrixSpace(rows, cols, ents, symmetry)


def iter_fano_points(params: Params, q: int, max_q: int = MAX_SCAN_Q, max_ambient: int = MAX_SCAN_AMBIENT,
                     max_k: int = MAX_SCAN_K, stats: dict | None = None) -> Iterator[LinMatrixSpace]:
    """Stream every GF(q)-rational (k+1)-subspace whose members all have rank < r."""
    if q > max_q or ambient_dim(params) > max_ambient or params.k > max_k:
        raise DomainError(f"exhaustive scan limited to q <= {max_q}, ambient dim <= {max_ambient}, k <= {max_k}")
    F = _prime_field(q, params.tag == SYMMETRIC)
    template = generic_matrix(params.tag, params.n, params.m, F)
    cells = template.free_positions()
    N = len(cells)
    scanned = 0
    for basis in echelon_subspaces(N, params.k + 1, q):
        scanned += 1
        space = _space_from_basis(basis, cells, template.rows, template.cols, template.symmetry, F)
        if verify_all_rank_lt(space, params.r):
            space.meta["basis"] = [list(b) for b in basis]
            yield space
    if stats is not None:
        stats["scanned"] = scanned


def enumerate_fano_points(params: Params, q: int, **limits) -> list[LinMatrixSpace]:
    return list(iter_fano_points(params, q, **limits))


def write_jsonl(spaces, fh) -> int:
    count = 0
    for sp in spaces:
        fh.write(json.dumps(sp.to_json_obj()) + "\n")
        count += 1
    return count


def random_subspace(variant: str, n: int, k: int, q: int, seed: int, m: int | None = None) -> LinMatrixSpace:
    """k+1 uniformly random matrices over GF(q), redrawn until independent."""
    F = _prime_field(q, variant == SYMMETRIC)
    template = generic_matrix(variant, n, m, F)
    cells = template.free_positions()
    rng = random.Random(seed)
    while True:
        basis = [[rng.randrange(q) for _ in cells] for _ in range(k + 1)]
        if len(rref(basis, F)[1]) == k + 1:
            sp = _space_from_basis(basis, cells, template.rows, template.cols, template.symmetry, F)
            sp.meta["seed"] = seed
            return sp


def lines_gf3_scan(q: int = 3) -> dict:
    """Scan every line of 3x3 symmetric matrices over GF(q) and classify those on the determinant."""
    params = Params.make(SYMMETRIC, 3, 3, 1)
    stats: dict = {}
    on_scheme = classified = 0
    unclassified = []
    for sp in iter_fano_points(params, q, stats=stats):
        on_scheme += 1
        cls = classify_point(sp, params, q)
        if cls.s_values:
            classified += 1
        else:
            unclassified.append(sp.meta["basis"])
    return {
        "scanned": stats["scanned"],
        "expected": gaussian_binomial(6, 2, q),
        "on_scheme": on_scheme,
        "classified": classified,
        "unclassified": unclassified,
    }
