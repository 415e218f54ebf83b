"""Determinants and minors of matrices with polynomial entries."""
from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .poly import Poly

MAX_DET_SIZE = 12


def _bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


class MinorCache:
    """Memoized minors of one matrix, keyed by (row bitmask, column bitmask).

    Each minor is expanded along its first row; sub-minors are shared across
    all requests made on the same cache.  A cache belongs to one caller, so no
    locking is needed.
    """

    def __init__(self, matrix: Sequence[Sequence[Poly]]):
        self.matrix = [list(row) for row in matrix]
        self.nrows = len(self.matrix)
        self.ncols = len(self.matrix[0]) if self.matrix else 0
        first = next((e for row in self.matrix for e in row), None)
        if first is None:
            raise ValueError("empty matrix")
        self.nvars, self.field = first.nvars, first.field
        for row in self.matrix:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")
            for e in row:
                if e.nvars != self.nvars:
                    raise ValueError("entries must share one polynomial ring")
        self._one = Poly.const(1, self.nvars, self.field)
        self._memo: dict[tuple[int, int], Poly] = {}

    def minor_masks(self, rmask: int, cmask: int) -> Poly:
        if rmask == 0:
            return self._one
        key = (rmask, cmask)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        i = (rmask & -rmask).bit_length() - 1
        rest = rmask & ~(1 << i)
        total = Poly.zero(self.nvars, self.field)
        row = self.matrix[i]
        sign = 1
        for j in _bits(cmask):
            entry = row[j]
            if entry.terms:
                sub = self.minor_masks(rest, cmask & ~(1 << j))
                if sub.terms:
                    prod = entry * sub
                    total = total + prod if sign > 0 else total - prod
            sign = -sign
        self._memo[key] = total
        return total

    def minor(self, rows: Sequence[int], cols: Sequence[int]) -> Poly:
        if len(rows) != len(cols):
            raise ValueError("minor needs as many rows as columns")
        if len(rows) > MAX_DET_SIZE:
            raise ValueError(f"minors larger than {MAX_DET_SIZE}x{MAX_DET_SIZE} are not supported")
        rmask = sum(1 << r for r in rows)
        cmask = sum(1 << c for c in cols)
        return self.minor_masks(rmask, cmask)

    def cofactor(self, rows: Sequence[int], cols: Sequence[int], a: int, b: int) -> Poly:
        """Signed cofactor of entry (rows[a], cols[b]) inside the minor (rows, cols)."""
        sub = self.minor(rows[:a] + rows[a + 1:], cols[:b] + cols[b + 1:])
        return sub if (a + b) % 2 == 0 else -sub


def det_polymat(matrix: Sequence[Sequence[Poly]]) -> Poly:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        raise ValueError("determinant of a non-square matrix")
    if n > MAX_DET_SIZE:
        raise ValueError(f"determinants larger than {MAX_DET_SIZE}x{MAX_DET_SIZE} are not supported")
    return MinorCache(matrix).minor(list(range(n)), list(range(n)))


def all_minors(matrix: Sequence[Sequence[Poly]], size: int):
    """Yield (rows, cols, minor) for every size x size minor, rows/cols ascending."""
    cache = MinorCache(matrix)
    for rows in combinations(range(cache.nrows), size):
        for cols in combinations(range(cache.ncols), size):
            yield rows, cols, cache.minor(rows, cols)


def first_nonzero_minor(matrix: Sequence[Sequence[Poly]], size: int):
    """(rows, cols, minor) of the first nonvanishing minor, or None."""
    for rows, cols, m in all_minors(matrix, size):
        if m.terms:
            return rows, cols, m
    return None
