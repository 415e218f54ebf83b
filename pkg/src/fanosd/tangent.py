"""Zariski tangent dimensions on Fano schemes of symmetric determinantal loci.

Two independent routes:

* ``tangent_dim_chart`` linearizes every r x r minor of the generic symmetric
  matrix at Q and counts first-order deformations directly.
* ``tangent_dim_blocks`` reads the blocks of a nested s-compression point and
  only solves the small system for the completion block A.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field
from itertools import combinations
from math import comb
import json
import random

from .exactalg import Field, MinorCache, Poly, accumulate_linearized, det_polymat, matrix_rank, rank_nullspace
from .exactalg.linalg import rank_mod_p
from .invariants import SYMMETRIC, DomainError, Params, ambient_dim, kappa, s_max
from .oracle import find_nonzero_minor
from .spaces import DEFAULT_FIELD, LinMatrixSpace, in_standard_zero_block, standard_cells


class NotOnSchemeError(DomainError):
    """The matrix space has a nonvanishing r x r minor."""

    def __init__(self, rows, cols, minor: Poly, names=None):
        self.rows, self.cols, self.minor = tuple(rows), tuple(cols), minor
        super().__init__(
            f"minor rows={list(self.rows)} cols={list(self.cols)} is {minor.to_str(names)}, not zero"
        )


@dataclass
class TangentReport:
    ambient_grassmannian_dim: int
    lift_unknowns: int
    constraint_rows: int
    rank: int
    tangent_dim: int
    method: str
    seed: int | None = None
    params: dict = dc_field(default_factory=dict)
    field: str = ""
    details: dict = dc_field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_field(field: Field) -> None:
    if field.characteristic == 2:
        raise DomainError("characteristic 2 is not supported for symmetric matrices")


def _pair_index(n: int) -> dict:
    """(i, j) and (j, i) share the number of the upper pair, row-major."""
    order = [(i, j) for i in range(n) for j in range(i, n)]
    idx = {}
    for c, (i, j) in enumerate(order):
        idx[(i, j)] = idx[(j, i)] = c
    return idx


def _validate_point(Q: LinMatrixSpace, params: Params) -> None:
    if params.tag != SYMMETRIC or Q.symmetry != SYMMETRIC:
        raise DomainError("tangent computations are implemented for symmetric matrices only")
    if Q.rows != params.n:
        raise DomainError(f"matrix is {Q.rows} x {Q.cols}, expected n={params.n}")
    _check_field(Q.field)
    if not Q.is_linear():
        raise DomainError("entries must be linear forms")
    k = params.k
    if Q.nvars != k + 1:
        raise DomainError(f"matrix uses {Q.nvars} variables, expected k+1={k + 1}")
    span = Q.span_dim()
    if span != k + 1:
        raise DomainError(f"entries span {span} dimensions, expected k+1={k + 1}")


def _dense_rows(equations, nunknowns, p):
    for eq in equations:
        row = [0] * nunknowns
        for u, c in eq:
            row[u] = c % p if p else c
        yield row


def _rank_of(equations: list, nunknowns: int, field: Field) -> int:
    if not equations:
        return 0
    if field.p is not None:
        return rank_mod_p(_dense_rows(equations, nunknowns, field.p), nunknowns, field.p)
    return matrix_rank(list(_dense_rows(equations, nunknowns, None)), field, nunknowns)


def _collect(target: dict, field: Field, sink: set) -> None:
    for form in target.values():
        eq = tuple(sorted((u, field.reduce(c)) for u, c in form.items() if field.reduce(c) != 0))
        if eq:
            sink.add(eq)


def chart_equations(Q: LinMatrixSpace, r: int, cache: MinorCache | None = None) -> list:
    """Linearized r x r minor conditions on a symmetric deformation N = sum u_{ij,t} z_t."""
    n, nv, field = Q.rows, Q.nvars, Q.field
    cache = cache or MinorCache(Q.entries)
    pidx = _pair_index(n)
    blocks = {p: [p * nv + t for t in range(nv)] for p in set(pidx.values())}
    eqs: set = set()
    for rows in combinations(range(n), r):
        for cols in combinations(range(n), r):
            target: dict = {}
            for a_i, a in enumerate(rows):
                for b_i, b in enumerate(cols):
                    cof = cache.cofactor(list(rows), list(cols), a_i, b_i)
                    if cof.terms:
                        accumulate_linearized(target, cof, blocks[pidx[(a, b)]])
            _collect(target, field, eqs)
    return sorted(eqs)


def trivial_deformations(Q: LinMatrixSpace) -> list[list]:
    """Vectors N = Q with z_t replaced by z_t', one per (t, t')."""
    n, nv = Q.rows, Q.nvars
    pidx = _pair_index(n)
    npairs = comb(n + 1, 2)
    out = []
    for t in range(nv):
        for t2 in range(nv):
            v = [0] * (npairs * nv)
            for i in range(n):
                for j in range(i, n):
                    c = Q.entries[i][j].linear_coefficients()[t]
                    v[pidx[(i, j)] * nv + t2] = c
            out.append(v)
    return out


def _annihilates(equations, v, field) -> bool:
    return all(field.reduce(sum(c * v[u] for u, c in eq)) == 0 for eq in equations)


def tangent_dim_chart(Q: LinMatrixSpace, params: Params, seed: int | None = None) -> TangentReport:
    _validate_point(Q, params)
    n, r, k = params.n, params.r, params.k
    field = Q.field
    cache = MinorCache(Q.entries)
    bad = find_nonzero_minor(Q, r, cache)
    if bad is not None:
        raise NotOnSchemeError(*bad, names=Q.names)
    eqs = chart_equations(Q, r, cache)
    unknowns = (k + 1) * comb(n + 1, 2)
    for v in trivial_deformations(Q):
        if not _annihilates(eqs, v, field):
            raise AssertionError("a reparametrization of Q violates the linearized minors")
    rank = _rank_of(eqs, unknowns, field)
    return TangentReport(
        ambient_grassmannian_dim=(k + 1) * (ambient_dim(params) - k),
        lift_unknowns=unknowns,
        constraint_rows=len(eqs),
        rank=rank,
        tangent_dim=unknowns - rank - (k + 1) ** 2,
        method="chart",
        seed=seed,
        params=params.as_dict(),
        field=repr(field),
    )


# -- block route -----------------------------------------------------------

def _anchored_system(D: LinMatrixSpace, s: int):
    """Equations on A (w x w symmetric, linear entries) from the s-anchored (2s+1)-minors of [[0, D], [D^t, A]]."""
    w = D.cols
    nv, field = D.nvars, D.field
    size = s + w
    zero = Poly.zero(nv, field)
    M = [[zero] * size for _ in range(size)]
    for i in range(s):
        for c in range(w):
            M[i][s + c] = D.entries[i][c]
            M[s + c][i] = D.entries[i][c]
    cache = MinorCache(M)
    pidx = _pair_index(w)
    blocks = {p: [p * nv + t for t in range(nv)] for p in set(pidx.values())}
    anchor = list(range(s))
    eqs: set = set()
    for rb in combinations(range(w), s + 1):
        rows = anchor + [s + a for a in rb]
        for cb in combinations(range(w), s + 1):
            cols = anchor + [s + b for b in cb]
            target: dict = {}
            for a_i, a in enumerate(rb):
                for b_i, b in enumerate(cb):
                    cof = cache.cofactor(rows, cols, s + a_i, s + b_i)
                    if cof.terms:
                        accumulate_linearized(target, cof, blocks[pidx[(a, b)]])
            _collect(target, field, eqs)
    return sorted(eqs), nv * comb(w + 1, 2)


def a_det(D: LinMatrixSpace, s: int, n: int, r: int, k: int) -> int:
    """Dimension of the symmetric completions A killing every s-anchored (2s+1)-minor."""
    w = s + 1 + n - r
    if D.rows != s or D.cols != w:
        raise DomainError(f"D must be {s} x {w}, got {D.rows} x {D.cols}")
    if D.nvars != k + 1:
        raise DomainError(f"D uses {D.nvars} variables, expected {k + 1}")
    eqs, unknowns = _anchored_system(D, s)
    return unknowns - _rank_of(eqs, unknowns, D.field)


def _sub(Q: LinMatrixSpace, rows: range, cols: range) -> list[list[Poly]]:
    return [[Q.entries[i][j] for j in cols] for i in rows]


def extract_blocks(Q: LinMatrixSpace, params: Params, s: int) -> dict:
    """Split a nested s-compression point into B, C, D, E; raise if the zero blocks are not zero."""
    n, r = params.n, params.r
    if not 0 <= s <= s_max(params):
        raise DomainError(f"s={s} outside 0..{s_max(params)}")
    for i in range(n):
        for j in range(n):
            if in_standard_zero_block(params, s, i, j) and Q.entries[i][j].terms:
                raise DomainError(f"entry ({i + 1},{j + 1}) must vanish in the s={s} block form")
    mid = r - 2 * s - 1
    return {
        "B": _sub(Q, range(s), range(s)),
        "C": _sub(Q, range(s), range(s, s + mid)),
        "D": _sub(Q, range(s), range(s + mid, n)),
        "E": _sub(Q, range(s, s + mid), range(s, s + mid)),
    }


def tangent_dim_blocks(Q: LinMatrixSpace, params: Params, s: int, seed: int | None = None) -> TangentReport:
    _validate_point(Q, params)
    n, r, k = params.n, params.r, params.k
    blocks = extract_blocks(Q, params, s)
    mid = r - 2 * s - 1
    w = s + 1 + n - r
    details = {"s": s}
    if mid > 0 and not det_polymat(blocks["E"]).terms:
        tdim = (comb(n + 1, 2) - 1 - k) * (k + 1)
        details["branch"] = "singular-E"
        return TangentReport(
            ambient_grassmannian_dim=(k + 1) * (ambient_dim(params) - k),
            lift_unknowns=0, constraint_rows=0, rank=0, tangent_dim=tdim,
            method="blocks", seed=seed, params=params.as_dict(), field=repr(Q.field), details=details,
        )
    D = LinMatrixSpace(s, w, blocks["D"]) if s > 0 else None
    if D is None:
        # no anchoring rows: the 1 x 1 minors force A = 0
        unknowns = (k + 1) * comb(w + 1, 2)
        eqs = [((u, 1),) for u in range(unknowns)]
        rank, adet = unknowns, 0
    else:
        eqs, unknowns = _anchored_system(D, s)
        rank = _rank_of(eqs, unknowns, Q.field)
        adet = unknowns - rank
    details.update(branch="regular", a_det=adet)
    tdim = adet + w * mid * (k + 1) + (kappa(params, s) - k) * (k + 1)
    return TangentReport(
        ambient_grassmannian_dim=(k + 1) * (ambient_dim(params) - k),
        lift_unknowns=unknowns, constraint_rows=len(eqs), rank=rank, tangent_dim=tdim,
        method="blocks", seed=seed, params=params.as_dict(), field=repr(Q.field), details=details,
    )


def _vector_to_matrix(v, w, nv, field) -> list[list[Poly]]:
    pidx = _pair_index(w)
    out = [[None] * w for _ in range(w)]
    for i in range(w):
        for j in range(w):
            p = pidx[(i, j)]
            out[i][j] = Poly.linear([v[p * nv + t] for t in range(nv)], field)
    return out


def _matrix_to_vector(A, w, nv) -> list:
    pidx = _pair_index(w)
    v = [0] * (nv * comb(w + 1, 2))
    for i in range(w):
        for j in range(i, w):
            for t, c in enumerate(A[i][j].linear_coefficients()):
                v[pidx[(i, j)] * nv + t] = c
    return v


def row_span_completions(D: LinMatrixSpace) -> list[list[list[Poly]]]:
    """D~ + D~^t for D~ = E_ij D, i.e. D~ has row j of D in row i."""
    s, w = D.rows, D.cols
    zero = Poly.zero(D.nvars, D.field)
    out = []
    for i in range(w):
        for j in range(s):
            Dt = [[zero] * w for _ in range(w)]
            Dt[i] = list(D.entries[j])
            out.append([[Dt[a][b] + Dt[b][a] for b in range(w)] for a in range(w)])
    return out


def solution_space_A(D: LinMatrixSpace, s: int | None = None):
    """Basis of the admissible A blocks and the outcome of the row-span membership test.

    Returns ``(basis, status)`` with status ``"verified"`` when every basis
    element is a symmetrized row-span matrix, ``"skipped"`` when D is too
    special for the count to match, ``"failed"`` otherwise.
    """
    s = D.rows if s is None else s
    w, nv, field = D.cols, D.nvars, D.field
    eqs, unknowns = _anchored_system(D, s)
    rows = [[0] * unknowns for _ in eqs]
    for row, eq in zip(rows, eqs):
        for u, c in eq:
            row[u] = c
    if rows:
        _, null = rank_nullspace(rows, field, unknowns)
    else:
        null = [[field(1) if c == u else 0 for c in range(unknowns)] for u in range(unknowns)]
    basis = [_vector_to_matrix(v, w, nv, field) for v in null]
    gens = [_matrix_to_vector(A, w, nv) for A in row_span_completions(D)]
    g = matrix_rank(gens, field, unknowns) if gens else 0
    if len(null) != s * w or g != s * w:
        return basis, "skipped"
    combined = matrix_rank(gens + [list(v) for v in null], field, unknowns)
    return basis, "verified" if combined == g else "failed"


# -- random points ---------------------------------------------------------

STRUCTURES = ("general", "zero-B", "zero-C", "singular-E")


def random_block_point(params: Params, s: int, seed: int, field: Field = DEFAULT_FIELD,
                       structure: str = "general", max_tries: int = 200) -> LinMatrixSpace:
    """Random k-plane inside the standard s-compression space.

    Entries in the star cells are random linear forms.  Draws with fewer than
    k+1 independent entries, or with det E = 0 when E should be general, are
    rejected and redrawn from the same seeded stream.
    """
    if params.tag != SYMMETRIC:
        raise DomainError("random block points are symmetric only")
    if structure not in STRUCTURES:
        raise DomainError(f"unknown structure {structure!r}")
    _check_field(field)
    n, r, k = params.n, params.r, params.k
    if k > kappa(params, s):
        raise DomainError(f"k={k} exceeds kappa({s})={kappa(params, s)}")
    mid = r - 2 * s - 1
    if structure == "singular-E" and mid == 0:
        raise DomainError("singular-E needs a nonempty middle block")
    cells = standard_cells(params, s)

    def keep(i, j):
        if structure == "zero-B":
            return not (i < s and j < s)
        if structure == "zero-C":
            return not (i < s and s <= j < s + mid)
        if structure == "singular-E":
            # last row/column of E vanish
            return not (s <= i < s + mid and j == s + mid - 1)
        return True

    cells = [c for c in cells if keep(*c)]
    rng = random.Random(seed)
    nv = k + 1
    for attempt in range(1, max_tries + 1):
        ents = [[Poly.zero(nv, field) for _ in range(n)] for _ in range(n)]
        for i, j in cells:
            e = Poly.linear([field.random_element(rng) for _ in range(nv)], field)
            ents[i][j] = e
            ents[j][i] = e
        Q = LinMatrixSpace(n, n, ents, SYMMETRIC, meta={"kind": "random-block", "s": s, "seed": seed,
                                                      "structure": structure, "attempts": attempt})
        if Q.span_dim() != nv:
            continue
        if mid > 0 and structure != "singular-E":
            E = _sub(Q, range(s, s + mid), range(s, s + mid))
            if not det_polymat(E).terms:
                continue
        return Q
    raise DomainError(f"no admissible point after {max_tries} draws (seed {seed})")


def random_general_point(params: Params, s: int, seed: int, field: Field = DEFAULT_FIELD) -> LinMatrixSpace:
    return random_block_point(params, s, seed, field, "general")
