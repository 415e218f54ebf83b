"""Named verification suites shared by the CLI and the test-suite."""
from __future__ import annotations

from fractions import Fraction
from itertools import product
import random

from .exactalg import QQ, Poly, jensen_sides, matrix_rank
from .invariants import (
    ALTERNATING, RECTANGULAR, SYMMETRIC, DomainError, Params, ambient_dim, build_graph, connected_components,
    cycle_disconnected, kappa, max_k, s_max,
)
from .oracle import classify_point, lines_gf3_scan, verify_all_rank_lt
from .spaces import (
    LinMatrixSpace, block_D_vars, deleted_column_minor, diagonal_space, enumerate_borel_fixed, is_borel_pattern,
    kronecker_pencil, p_closed,
)
from .tangent import STRUCTURES, random_block_point, tangent_dim_blocks, tangent_dim_chart


def iter_params(variant: str, max_n: int, min_n: int = 2):
    """Every valid (variant, n, m, r) with k = 0, n in [min_n, max_n]."""
    for n in range(min_n, max_n + 1):
        ms = range(2, n + 1) if variant == RECTANGULAR else [None]
        for m in ms:
            for r in range(2, n + 1):
                try:
                    yield Params.make(variant, n, r, 0, m=m)
                except DomainError:
                    continue


def _result(suite, failures, cases, **extra) -> dict:
    out = {"suite": suite, "passed": not failures, "cases": cases, "failures": failures[:20]}
    out.update(extra)
    return out


def graph_equivalence(max_n: int = 12) -> dict:
    failures, cases = [], 0
    for variant in (SYMMETRIC, ALTERNATING, RECTANGULAR):
        for base in iter_params(variant, max_n):
            for k in range(max_k(base) + 1):
                p = base.with_k(k)
                parts = connected_components(build_graph(p))
                if not parts:
                    continue
                cases += 1
                if cycle_disconnected(p) != (len(parts) >= 2):
                    failures.append(p.as_dict())
    return _result("graph-equivalence", failures, cases)


def jensen(random_cases: int = 200, seed: int = 0) -> dict:
    failures, cases = [], 0
    for a, b, g in product(range(-5, 6), repeat=3):
        for L in range(9):
            cases += 1
            left, right = jensen_sides(a, b, g, L)
            if left != right:
                failures.append([a, b, g, L])
    rng = random.Random(seed)
    for _ in range(random_cases):
        a, b, g = (Fraction(rng.randint(-10, 10), rng.randint(1, 6)) for _ in range(3))
        L = rng.randint(0, 12)
        cases += 1
        left, right = jensen_sides(a, b, g, L)
        if left != right:
            failures.append([str(a), str(b), str(g), L])
    return _result("jensen", failures, cases, seed=seed)


def product_coefficient_rank(s: int) -> tuple[int, int]:
    """(rank, count) of the coefficient matrix of p_i p_j, i <= j."""
    ps = [p_closed(s, i, QQ) for i in range(1, s + 2)]
    prods = [ps[i] * ps[j] for i in range(s + 1) for j in range(i, s + 1)]
    monos = sorted({key for pr in prods for key in pr.terms})
    rows = [[pr.terms.get(key, 0) for key in monos] for pr in prods]
    return matrix_rank(rows, QQ, len(monos)), len(prods)


def p_minors(max_s: int = 6, max_rank_s: int = 5) -> dict:
    failures, cases = [], 0
    for s in range(1, max_s + 1):
        D = block_D_vars(s, 2, QQ)
        for i in range(1, s + 2):
            cases += 1
            if deleted_column_minor(D, i) != p_closed(s, i, QQ):
                failures.append({"s": s, "i": i})
    for s in range(1, max_rank_s + 1):
        cases += 1
        rank, count = product_coefficient_rank(s)
        if rank != count:
            failures.append({"s": s, "rank": rank, "products": count})
    return _result("p-minors", failures, cases)


def example_fixed_points() -> tuple[LinMatrixSpace, LinMatrixSpace]:
    """The two 4x4 unipotent-fixed examples: (repeated z3, Borel-fixed staircase)."""
    z = [Poly.var(t, 5, QQ) for t in range(5)]
    o = Poly.zero(5, QQ)
    left = [[z[0], z[1], z[2], z[3]], [z[1], z[4], z[3], o], [z[2], z[3], o, o], [z[3], o, o, o]]
    right = [[z[0], z[1], z[2], z[3]], [z[1], z[4], o, o], [z[2], o, o, o], [z[3], o, o, o]]
    return LinMatrixSpace(4, 4, left, SYMMETRIC), LinMatrixSpace(4, 4, right, SYMMETRIC)


def borel(max_n: int = 8, minor_check_n: int = 5) -> dict:
    failures, cases = [], 0
    left, right = example_fixed_points()
    cases += 2
    if is_borel_pattern(left):
        failures.append("left example accepted")
    if not is_borel_pattern(right):
        failures.append("right example rejected")
    for variant in (SYMMETRIC, ALTERNATING, RECTANGULAR):
        for base in iter_params(variant, max_n):
            for k in range(ambient_dim(base) + 1):
                p = base.with_k(k)
                pats = enumerate_borel_fixed(p)
                cases += 1
                if (not pats) != (k > max_k(p)):
                    failures.append(p.as_dict())
                if p.n <= minor_check_n:
                    for pat in pats:
                        sp = pat.to_space(QQ)
                        if not is_borel_pattern(sp) or not verify_all_rank_lt(sp, p.r):
                            failures.append({"params": p.as_dict(), "pattern": pat.as_dict()})
    return _result("borel", failures, cases)


def lines_gf3() -> dict:
    scan = lines_gf3_scan(3)
    failures = []
    if scan["scanned"] != scan["expected"]:
        failures.append(f"scanned {scan['scanned']} of {scan['expected']}")
    if scan["unclassified"]:
        failures.append(f"{len(scan['unclassified'])} lines without a nested flag")
    p = Params.make(SYMMETRIC, 3, 3, 1)
    diag = classify_point(diagonal_space([0, 1, -1], 2, QQ), p, 3)
    if diag.s_values != {0}:
        failures.append(f"diag(z0,z1,0) classified as {sorted(diag.s_values)}")
    pencil = classify_point(kronecker_pencil(1, 3, QQ), p, 3)
    if pencil.s_values != {1} or len(pencil.flags[1]) != 1:
        failures.append("pencil does not have exactly one flag at s=1")
    return _result("lines-gf3", failures, scan["scanned"], on_scheme=scan["on_scheme"],
                   classified=scan["classified"], caveat=diag.caveat)


def tangent_cross(max_n: int = 6, max_k_cap: int = 3, seed: int = 0) -> dict:
    failures, cases = [], 0
    for base in iter_params(SYMMETRIC, max_n, min_n=3):
        for s in range(s_max(base) + 1):
            for k in range(min(kappa(base, s), max_k_cap) + 1):
                p = base.with_k(k)
                for structure in STRUCTURES:
                    try:
                        Q = random_block_point(p, s, seed, structure=structure)
                    except DomainError:
                        continue
                    cases += 1
                    a = tangent_dim_chart(Q, p).tangent_dim
                    b = tangent_dim_blocks(Q, p, s).tangent_dim
                    if a != b:
                        failures.append({"params": p.as_dict(), "s": s, "structure": structure, "chart": a, "blocks": b})
    return _result("tangent-cross", failures, cases, seed=seed)


SUITES = {
    "graph-equivalence": graph_equivalence,
    "jensen": jensen,
    "p-minors": p_minors,
    "borel": borel,
    "lines-gf3": lines_gf3,
    "tangent-cross": tangent_cross,
}
