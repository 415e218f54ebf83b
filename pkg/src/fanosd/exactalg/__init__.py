"""Exact arithmetic kernel: fields, sparse polynomials, determinants, elimination."""
from .field import DEFAULT_PRIME, QQ, GF, Field, field_from_name, is_prime
from .poly import Poly, parse_poly, monomials_of_degree
from .determinant import MinorCache, det_polymat, all_minors, first_nonzero_minor
from .linalg import rref, rank_nullspace, rank_mod_p, matrix_rank, mat_vec
from .linunknown import LinUnknownPoly, accumulate_linearized, CONST
from .binomial import gen_binomial, jensen_check, jensen_sides

__all__ = [
    "DEFAULT_PRIME", "QQ", "GF", "Field", "field_from_name", "is_prime",
    "Poly", "parse_poly", "monomials_of_degree",
    "MinorCache", "det_polymat", "all_minors", "first_nonzero_minor",
    "rref", "rank_nullspace", "rank_mod_p", "matrix_rank", "mat_vec",
    "LinUnknownPoly", "accumulate_linearized", "CONST",
    "gen_binomial", "jensen_check", "jensen_sides",
]
