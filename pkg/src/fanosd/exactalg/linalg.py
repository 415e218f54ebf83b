"""Exact Gaussian elimination: rank, reduced row echelon form, nullspace.

Pure-Python elimination works over any :class:`Field`.  Large systems over a
prime field below 2**31 are routed through a batched numpy elimination that
keeps only the current echelon basis in memory.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .field import Field, QQ

_NUMPY_PRIME_LIMIT = 1 << 31


def rref(matrix: Sequence[Sequence], field: Field = QQ):
    """Reduced row echelon form by leftmost-pivot elimination.

    Returns ``(rows, pivots)``: the nonzero reduced rows and their pivot columns.
    """
    rows = [[field(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [field.reduce(x * inv) for x in rows[r]]
        pr = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [field.reduce(x - f * y) for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_nullspace(matrix: Sequence[Sequence], field: Field = QQ, ncols: int | None = None):
    """Rank and a nullspace basis of ``matrix`` acting on column vectors.

    The basis has one vector per free column (unit entry there), so
    ``rank + len(basis) == ncols``.
    """
    if ncols is None:
        ncols = len(matrix[0]) if len(matrix) else 0
    reduced, pivots = rref(matrix, field) if len(matrix) else ([], [])
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [field(0)] * ncols
        v[f] = field(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = field.reduce(-row[f])
        basis.append(v)
    return len(pivots), basis


def _rref_numpy(a: np.ndarray, p: int) -> np.ndarray:
    a = a % p
    m, n = a.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        r += 1
    return a[:r]


def rank_mod_p(rows: Iterable[Sequence[int]], ncols: int, p: int, batch: int = 2048) -> int:
    """Rank over GF(p) of a (possibly long) stream of dense integer rows."""
    if p >= _NUMPY_PRIME_LIMIT:
        return len(rref(list(rows), Field(p))[1])
    basis = np.zeros((0, ncols), dtype=np.int64)
    chunk: list = []

    def flush():
        nonlocal basis, chunk
        if chunk:
            stacked = np.vstack([basis, np.asarray(chunk, dtype=np.int64).reshape(-1, ncols)])
            basis = _rref_numpy(stacked, p)
            chunk = []

    for row in rows:
        chunk.append(row)
        if len(chunk) >= batch:
            flush()
            if basis.shape[0] == ncols:
                return ncols
    flush()
    return int(basis.shape[0])


def matrix_rank(rows: Sequence[Sequence], field: Field = QQ, ncols: int | None = None) -> int:
    """Exact rank; uses the numpy path for prime fields."""
    if ncols is None:
        ncols = len(rows[0]) if len(rows) else 0
    if ncols == 0 or not len(rows):
        return 0
    if field.p is not None and field.p < _NUMPY_PRIME_LIMIT:
        return rank_mod_p(([x % field.p for x in row] for row in rows), ncols, field.p)
    return len(rref(rows, field)[1])


def mat_vec(matrix: Sequence[Sequence], v: Sequence, field: Field = QQ) -> list:
    return [field.reduce(sum(a * b for a, b in zip(row, v))) for row in matrix]
