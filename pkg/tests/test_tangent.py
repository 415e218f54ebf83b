from math import comb

import pytest

from fanosd.exactalg import GF, QQ, Poly
from fanosd.invariants import SYMMETRIC, DomainError, Params, dim_component, flag_dim, kappa, nonreduced_gap, \
    s_max, tangent_formula_general, tangent_formula_middle, variety_dim
from fanosd.spaces import LinMatrixSpace, block_D_vars, default_middle_point, generic_matrix, \
    intersection_point, middle_point, standard_compression
from fanosd.tangent import (
    NotOnSchemeError, a_det, extract_blocks, random_block_point, random_general_point, solution_space_A,
    tangent_dim_blocks, tangent_dim_chart,
)


def sym(n, r, k):
    return Params.make(SYMMETRIC, n, r, k)


# -- known values -----------------------------------------------------------------

def test_general_point_n5_r4():
    p = sym(5, 4, 1)
    for seed in (0, 7, 123):
        Q = random_general_point(p, 0, seed)
        rep = tangent_dim_chart(Q, p, seed)
        assert rep.tangent_dim == 20 == tangent_formula_general(p, 0)
        assert rep.lift_unknowns == 2 * comb(6, 2)
        assert rep.tangent_dim == rep.lift_unknowns - rep.rank - 4
        assert rep.tangent_dim - dim_component(p, 0) == nonreduced_gap(p, 0) == 6
        assert tangent_dim_blocks(Q, p, 0).tangent_dim == 20


def test_middle_point_n3():
    # kappa(1) = 2 here, so the component through this point has dimension 4
    p = sym(3, 3, 1)
    D = block_D_vars(1, 1)
    Q = middle_point([[Poly.zero(2, D.field)]], D, 1)
    chart = tangent_dim_chart(Q, p).tangent_dim
    blocks = tangent_dim_blocks(Q, p, 1)
    assert chart == blocks.tangent_dim == tangent_formula_middle(p) == dim_component(p, 1) == 4
    assert blocks.details["a_det"] == 2


def test_middle_point_n5():
    for k in (1, 2, 3):
        p = sym(5, 5, k)
        Q = default_middle_point(5, k)
        assert tangent_dim_chart(Q, p).tangent_dim == tangent_formula_middle(p)
    assert tangent_formula_middle(sym(5, 5, 2)) == 24


def test_singular_E_branch():
    p = sym(5, 4, 1)
    Q = random_block_point(p, 1, 3, structure="singular-E")
    rep = tangent_dim_blocks(Q, p, 1)
    assert rep.details["branch"] == "singular-E"
    assert rep.tangent_dim == (15 - 1 - 1) * 2 == 26
    assert tangent_dim_chart(Q, p).tangent_dim == 26


def test_intersection_point_is_special():
    p = sym(4, 4, 1)
    rep = tangent_dim_chart(intersection_point(4), p)
    assert rep.tangent_dim > max(dim_component(p, s) for s in range(s_max(p) + 1))


# -- cross-method agreement -------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_cross_methods(n):
    for r in range(3, n + 1):
        base = sym(n, r, 0)
        for s in range(s_max(base) + 1):
            for k in range(min(kappa(base, s), 2) + 1):
                p = base.with_k(k)
                for structure in ("general", "zero-B", "zero-C", "singular-E"):
                    try:
                        Q = random_block_point(p, s, 11, structure=structure)
                    except DomainError:
                        continue
                    a = tangent_dim_chart(Q, p).tangent_dim
                    b = tangent_dim_blocks(Q, p, s).tangent_dim
                    assert a == b, (n, r, s, k, structure)
                    if k >= 1:
                        assert a >= dim_component(p, s)


def test_general_formula_on_grid():
    for n in (3, 4, 5):
        for r in range(3, n + 1):
            base = sym(n, r, 0)
            for s in range(s_max(base) + 1):
                for k in range(1, min(kappa(base, s), 2) + 1):
                    p = base.with_k(k)
                    Q = random_general_point(p, s, 5)
                    t = tangent_dim_chart(Q, p).tangent_dim
                    assert t == tangent_formula_general(p, s), (n, r, s, k)
                    assert (t == dim_component(p, s)) == (nonreduced_gap(p, s) == 0)


def test_k0_general_points_are_smooth_points_of_the_variety():
    # a single general matrix of rank r-1 is a smooth point of X; the k >= 1 formulas do not apply
    for n in (4, 5, 6):
        for r in range(3, n + 1):
            p = sym(n, r, 0)
            for s in range(s_max(p) + 1):
                Q = random_general_point(p, s, 2)
                assert tangent_dim_chart(Q, p).tangent_dim == variety_dim(p)


def test_full_standard_compression():
    for n in (3, 4, 5):
        for r in range(3, n + 1):
            base = sym(n, r, 0)
            for s in range(s_max(base) + 1):
                p = base.with_k(kappa(base, s))
                Q = standard_compression(base, s)
                t = tangent_dim_chart(Q, p).tangent_dim
                assert t == tangent_dim_blocks(Q, p, s).tangent_dim
                if r == 2 * s + 1:
                    assert t == flag_dim(p, s)
                else:
                    assert t == tangent_formula_general(p, s) >= flag_dim(p, s)


# -- a_det and admissible A blocks ---------------------------------------------------------

def test_a_det_examples():
    assert a_det(block_D_vars(1, 1), 1, 3, 3, 1) == 2
    for s in (1, 2, 3):
        D = block_D_vars(s, 2)
        assert a_det(D, s, 2 * s + 1, 2 * s + 1, 2) == s * (s + 1)
    zero = Poly.zero(2, GF(32003))
    D0 = LinMatrixSpace(1, 2, [[zero, zero]])
    assert a_det(D0, 1, 3, 3, 1) == 2 * comb(3, 2)


def test_solution_space_A():
    basis, status = solution_space_A(block_D_vars(1, 1))
    assert (len(basis), status) == (2, "verified")
    basis, status = solution_space_A(block_D_vars(2, 2))
    assert (len(basis), status) == (6, "verified")
    F = GF(32003)
    z = [Poly.var(t, 3, F) for t in range(3)]
    zero = Poly.zero(3, F)
    D = LinMatrixSpace(2, 3, [[z[0], z[1], z[2]], [zero, zero, zero]])
    basis, status = solution_space_A(D)
    assert len(basis) > 6 and status == "skipped"


def test_solution_space_random_D():
    F = GF(32003)
    import random
    rng = random.Random(4)
    for s in (1, 2, 3):
        ents = [[Poly.linear([rng.randrange(32003) for _ in range(3)], F) for _ in range(s + 1)] for _ in range(s)]
        basis, status = solution_space_A(LinMatrixSpace(s, s + 1, ents))
        assert (len(basis), status) == (s * (s + 1), "verified")


# -- reports and errors ------------------------------------------------------------------

def test_determinism():
    p = sym(5, 4, 2)
    a = tangent_dim_chart(random_block_point(p, 1, 9), p, 9).to_json()
    b = tangent_dim_chart(random_block_point(p, 1, 9), p, 9).to_json()
    assert a == b
    assert random_block_point(p, 1, 9).to_json() == random_block_point(p, 1, 9).to_json()
    assert random_block_point(p, 1, 9).meta["attempts"] >= 1


def test_report_fields():
    p = sym(4, 3, 1)
    rep = tangent_dim_chart(random_general_point(p, 0, 1), p, 1).to_dict()
    for key in ("ambient_grassmannian_dim", "lift_unknowns", "constraint_rows", "rank", "tangent_dim", "method", "seed"):
        assert key in rep
    assert rep["ambient_grassmannian_dim"] == 2 * (9 - 1)
    assert rep["method"] == "chart"


def test_not_on_scheme():
    g = generic_matrix(SYMMETRIC, 3)
    with pytest.raises(NotOnSchemeError) as exc:
        tangent_dim_chart(g, sym(3, 3, 5))
    assert exc.value.rows == (0, 1, 2)


def test_input_errors():
    p = sym(3, 3, 1)
    D = block_D_vars(1, 1)
    Q = middle_point([[Poly.zero(2, D.field)]], D, 1)
    with pytest.raises(DomainError):
        tangent_dim_chart(Q, sym(3, 3, 2))  # variable count
    with pytest.raises(DomainError):
        tangent_dim_chart(Q, sym(4, 3, 1))  # size
    with pytest.raises(DomainError):
        tangent_dim_chart(Q.change_field(GF(2)), p)
    with pytest.raises(DomainError):
        random_block_point(p, 1, 0, field=GF(2))
    with pytest.raises(DomainError):
        random_block_point(sym(5, 5, 1), 2, 0, structure="singular-E")
    with pytest.raises(DomainError):
        random_block_point(p, 1, 0, structure="weird")
    with pytest.raises(DomainError):
        extract_blocks(Q, p, 0)  # not in s=0 block form


def test_rational_field():
    p = sym(3, 3, 1)
    D = block_D_vars(1, 1, QQ)
    Q = middle_point([[Poly.zero(2, QQ)]], D, 1)
    assert tangent_dim_chart(Q, p).tangent_dim == 4
