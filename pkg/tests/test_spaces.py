from math import comb
import random

import pytest
from hypothesis import given, settings, strategies as st

from fanosd.exactalg import GF, QQ, Poly, det_polymat
from fanosd.invariants import ALTERNATING, RECTANGULAR, SYMMETRIC, DomainError, Params, kappa, s_max
from fanosd.oracle import verify_all_rank_lt
from fanosd.spaces import (
    FlagSpec, LinMatrixSpace, all_staircases, block_D, block_D_vars, bordered_expand,
    bordered_matrix, default_middle_point, deleted_column_minor, diagonal_space, enumerate_borel_fixed,
    generic_matrix, intersection_point, is_borel_pattern, kronecker_pencil, middle_point, p_closed,
    standard_cells, standard_compression,
)
from fanosd.verify import example_fixed_points, product_coefficient_rank


def P(variant, n, r, k=0, m=None):
    return Params.make(variant, n, r, k, m=m)


# -- generic matrices ---------------------------------------------------------------

def test_generic_examples():
    g = generic_matrix(SYMMETRIC, 2, field=QQ)
    assert g.span_dim() == 3
    assert g.entries[0][1] == g.entries[1][0]
    assert g.names == ["x1_1", "x1_2", "x2_2"]
    a = generic_matrix(ALTERNATING, 3, field=QQ)
    assert a.span_dim() == 3
    assert all(not a.entries[i][i] for i in range(3))
    assert a.entries[1][0] == -a.entries[0][1]
    assert generic_matrix(RECTANGULAR, 3, m=2, field=QQ).span_dim() == 6
    for n in range(2, 6):
        assert is_borel_pattern(generic_matrix(SYMMETRIC, n, field=QQ))


def test_symmetry_checked():
    z = [Poly.var(t, 2, QQ) for t in range(2)]
    with pytest.raises(ValueError):
        LinMatrixSpace(2, 2, [[z[0], z[1]], [z[0], z[0]]], SYMMETRIC)
    with pytest.raises(ValueError):
        LinMatrixSpace(2, 2, [[z[0], z[1]], [-z[1], z[0]]], ALTERNATING)


# -- standard compression --------------------------------------------------------------

def test_standard_compression_examples():
    assert standard_compression(P(SYMMETRIC, 6, 6), 0, QQ).span_dim() == 15
    sp = standard_compression(P(RECTANGULAR, 4, 3, m=3), 0, QQ)
    assert sp.span_dim() == 6 == kappa(P(RECTANGULAR, 4, 3, m=3), 0) + 1
    assert all(not sp.entries[i][j] for i in range(3) for j in range(2, 4))
    _, right = example_fixed_points()
    std = standard_compression(P(SYMMETRIC, 4, 4), 1, QQ)
    support = lambda M: {(i, j) for i in range(4) for j in range(4) if M.entries[i][j]}  # noqa: E731
    assert support(std) == support(right)
    with pytest.raises(DomainError):
        standard_compression(P(SYMMETRIC, 6, 6), 3)


def _std_params(max_n):
    for n in range(2, max_n + 1):
        for r in range(2, n + 1):
            for variant, m in [(SYMMETRIC, None), (ALTERNATING, None)] + [(RECTANGULAR, m) for m in range(r, n + 1)]:
                try:
                    yield P(variant, n, r, m=m)
                except DomainError:
                    pass


def test_standard_span_is_kappa_plus_one():
    for p in _std_params(8):
        for s in range(s_max(p) + 1):
            assert standard_compression(p, s).span_dim() == kappa(p, s) + 1


def test_standard_minors_vanish():
    for p in _std_params(6):
        for s in range(s_max(p) + 1):
            assert verify_all_rank_lt(standard_compression(p, s), p.r), (p, s)


def test_standard_minors_vanish_n7_symmetric():
    for r in (3, 5, 7):
        p = P(SYMMETRIC, 7, r)
        for s in range(s_max(p) + 1):
            assert verify_all_rank_lt(standard_compression(p, s), r)


def test_standard_compression_is_borel_fixed():
    for p in _std_params(6):
        for s in range(s_max(p) + 1):
            assert is_borel_pattern(standard_compression(p, s, QQ))


# -- D blocks and p minors ----------------------------------------------------------------

def test_block_D_shapes():
    D = block_D_vars(2, 2, QQ)
    z0, z1, z2 = (Poly.var(t, 3, QQ) for t in range(3))
    zero = Poly.zero(3, QQ)
    assert D.entries == [[z0, z1, z2], [zero, z0, z1]]
    D3 = block_D_vars(3, 2, QQ)
    assert D3.entries[2] == [zero, zero, z0, z1]
    bi = block_D_vars(2, 2, QQ, use_z2=False)
    assert not bi.entries[0][2]
    one = block_D_vars(1, 1, QQ)
    assert one.rows == 1 and one.cols == 2 and "note" in one.meta
    with pytest.raises(DomainError):
        block_D_vars(0, 1)


def test_p_closed_small():
    z0, z1, z2 = (Poly.var(t, 3, QQ) for t in range(3))
    assert p_closed(2, 1) == z1 * z1 - z0 * z2
    assert p_closed(2, 2) == z0 * z1
    assert p_closed(2, 3) == z0 * z0
    for s in range(1, 8):
        assert p_closed(s, s + 1) == Poly.monomial((s, 0, 0), 1, QQ)
        assert p_closed(s, s) == Poly.monomial((s - 1, 1, 0), 1, QQ)
    with pytest.raises(DomainError):
        p_closed(2, 4)


def test_p_closed_is_minor():
    for s in range(1, 7):
        D = block_D_vars(s, 2, QQ)
        for i in range(1, s + 2):
            assert deleted_column_minor(D, i) == p_closed(s, i), (s, i)


def test_p_recursion():
    z0, z1, z2 = (Poly.var(t, 3, QQ) for t in range(3))
    for s in range(3, 9):
        for i in range(1, s - 1):
            assert p_closed(s, i) == z1 * p_closed(s - 1, i) - z0 * z2 * p_closed(s - 2, i)


@pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
def test_p_products_independent(s):
    rank, count = product_coefficient_rank(s)
    assert count == comb(s + 2, 2)
    assert rank == count


# -- bordered determinants ------------------------------------------------------------------

def test_bordered_s1_by_hand():
    # ring z0, z1, a11, a12, a22
    v = [Poly.var(t, 5, QQ) for t in range(5)]
    zero = Poly.zero(5, QQ)
    D = block_D(1, [v[0], v[1], zero])
    A = [[v[2], v[3]], [v[3], v[4]]]
    expect = -(v[2] * v[1] * v[1] - v[3] * v[0] * v[1] * 2 + v[4] * v[0] * v[0])
    assert bordered_expand(A, D) == expect
    assert bordered_expand([[zero, zero], [zero, zero]], D).is_zero()


def test_bordered_single_entry_s2():
    v = [Poly.var(t, 4, QQ) for t in range(4)]
    zero = Poly.zero(4, QQ)
    D = block_D(2, v[:3])
    A = [[zero] * 3 for _ in range(3)]
    A[2][2] = v[3]
    got = bordered_expand(A, D)
    p3 = v[0] * v[0]
    # (-1)^s (-1)^(3+3) a33 p3^2 with s = 2
    assert got == v[3] * p3 * p3
    assert got == det_polymat(bordered_matrix(A, D))


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(0, 2**32))
def test_bordered_random(s, seed):
    rng = random.Random(seed)
    F = GF(32003)
    nv = 3
    forms = lambda: Poly.linear([rng.randrange(32003) for _ in range(nv)], F)  # noqa: E731
    D = block_D(s, [Poly.var(t, nv, F) for t in range(3)])
    A = [[None] * (s + 1) for _ in range(s + 1)]
    for i in range(s + 1):
        for j in range(i, s + 1):
            A[i][j] = A[j][i] = forms()
    assert bordered_expand(A, D) == det_polymat(bordered_matrix(A, D))


def test_bordered_shape_mismatch():
    D = block_D_vars(2, 2, QQ)
    with pytest.raises(ValueError):
        bordered_expand([[Poly.zero(3, QQ)] * 2] * 2, D)


# -- pencils and middle points -----------------------------------------------------------------

def test_kronecker_pencil():
    P3 = kronecker_pencil(1, 3, QQ)
    z0, z1 = Poly.var(0, 2, QQ), Poly.var(1, 2, QQ)
    assert P3.entries[0][1:] == [z0, z1]
    assert P3.span_dim() == 2
    P5 = kronecker_pencil(2, 5, QQ)
    assert [[bool(e) for e in row[2:]] for row in P5.entries[:2]] == [[True, True, False], [False, True, True]]
    assert P5.span_dim() == 2
    assert kronecker_pencil(1, 4, QQ).span_dim() == 2
    with pytest.raises(DomainError):
        kronecker_pencil(2, 4)


def test_middle_point_examples():
    D = block_D_vars(1, 1, QQ)
    Q = middle_point([[Poly.zero(2, QQ)]], D, 1)
    assert Q.rows == 3 and Q.span_dim() == 2
    assert det_polymat(Q.entries).is_zero()
    Q5 = default_middle_point(5, 2, QQ)
    assert Q5.span_dim() == 3
    assert det_polymat(Q5.entries).is_zero()
    with pytest.raises(DomainError):
        middle_point([[Poly.zero(2, QQ)]], D, 2)


def test_default_middle_point_spans():
    for n in (3, 5, 7):
        s = (n - 1) // 2
        top = kappa(P(SYMMETRIC, n, n), s)
        for k in range(1, top + 1):
            Q = default_middle_point(n, k)
            assert Q.span_dim() == k + 1
            # zero (s+1) x (s+1) block
            assert all(not Q.entries[i][j] for i in range(s, n) for j in range(s, n))
    with pytest.raises(DomainError):
        default_middle_point(4, 1)
    with pytest.raises(DomainError):
        default_middle_point(3, 3)


def test_intersection_and_diagonal():
    I = intersection_point(4, QQ)
    assert I.span_dim() == 2
    assert verify_all_rank_lt(I, 3)
    d = diagonal_space([0, 1, -1], 2, QQ)
    assert d.span_dim() == 2 and not d.entries[2][2]
    assert verify_all_rank_lt(d, 3)


# -- Borel-fixed patterns ---------------------------------------------------------------------

def test_example_fixed_points():
    left, right = example_fixed_points()
    assert not is_borel_pattern(left)
    assert is_borel_pattern(right)


def test_non_closed_zero_set_rejected():
    z = [Poly.var(t, 3, QQ) for t in range(3)]
    zero = Poly.zero(3, QQ)
    M = LinMatrixSpace(2, 2, [[zero, z[0]], [z[0], z[1]]], SYMMETRIC)
    assert not is_borel_pattern(M)
    M2 = LinMatrixSpace(2, 2, [[z[0] + z[1], z[2]], [z[2], zero]], SYMMETRIC)
    assert not is_borel_pattern(M2)


def test_enumerate_small_planes():
    pats = enumerate_borel_fixed(P(SYMMETRIC, 3, 3, 2))
    assert pats
    assert all(p.size == 3 for p in pats)
    assert {s for p in pats for s in p.fits} == {0, 1}


def test_enumerate_contains_example():
    _, right = example_fixed_points()
    want = {(i, j) for i, j in right.free_positions() if right.entries[i][j]}
    cells = [set(p.cells) for p in enumerate_borel_fixed(P(SYMMETRIC, 4, 4, 4))]
    assert want in cells


def test_enumerate_empty_beyond_max():
    assert enumerate_borel_fixed(P(SYMMETRIC, 6, 6, 15)) == []
    assert enumerate_borel_fixed(P(SYMMETRIC, 6, 6, 14))


def _conjugate(lengths):
    return tuple(sum(1 for a in lengths if a > j) for j in range(lengths[0] if lengths else 0))


SHAPE_CASES = [P(SYMMETRIC, 4, 3), P(SYMMETRIC, 5, 5), P(ALTERNATING, 5, 4), P(RECTANGULAR, 4, 3, m=3)]


def test_staircase_shapes():
    for base in SHAPE_CASES:
        free = set(standard_compression(base, 0).free_positions())
        for k in range(8):
            for pat in enumerate_borel_fixed(base.with_k(k)):
                cells = set(pat.cells)
                for i, j in cells:  # up-left closed among free positions
                    assert all((a, b) in cells for a, b in free if a <= i and b <= j)
                if base.tag != RECTANGULAR:
                    assert pat.row_lengths == _conjugate(pat.row_lengths)
                assert is_borel_pattern(pat.to_space(QQ))
                assert pat.fits and all(cells <= set(standard_cells(base, s)) for s in pat.fits)


def test_all_staircase_counts():
    # self-conjugate diagrams in an n x n box <-> subsets of distinct parts
    assert [len(all_staircases(SYMMETRIC, n)) for n in range(1, 6)] == [2, 4, 8, 16, 32]
    # monotone paths in an m x n box
    assert len(all_staircases(RECTANGULAR, 3, 2)) == comb(5, 2)


def test_flag_spec():
    p = P(SYMMETRIC, 6, 5)
    f = FlagSpec.for_s(p, 1)
    assert (f.dimU, f.dimW) == (3, 5)
    assert f.s_value(6, 5) == 1
    with pytest.raises(DomainError):
        FlagSpec.for_s(p, 3)


# -- serialization ----------------------------------------------------------------------------

def test_json_roundtrip():
    for Q in (default_middle_point(5, 2), kronecker_pencil(1, 3), generic_matrix(RECTANGULAR, 3, m=2),
              standard_compression(P(ALTERNATING, 5, 4), 1)):
        back = LinMatrixSpace.from_json(Q.to_json())
        assert back.entries == Q.entries
        assert back.symmetry == Q.symmetry
        assert back.field == Q.field


def test_json_inferred_names():
    obj = {"rows": 2, "cols": 2, "symmetry": "symmetric", "entries": [["z0", "z1"], ["z1", "0"]], "field": "GF(7)"}
    Q = LinMatrixSpace.from_json_obj(obj)
    assert Q.nvars == 2 and Q.field.p == 7
    with pytest.raises(ValueError):
        LinMatrixSpace.from_json_obj({"rows": 2, "cols": 2})
