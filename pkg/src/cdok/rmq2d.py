"""Static two-dimensional range-minimum queries over a small dense matrix.

A sparse table in both axes answers any closed rectangle in O(1) with four
overlapping power-of-two rectangles.  Space is O(r c log r log c), fine for
the block matrices this package builds (r = c = ceil(n / tau)).

Entries carry an optional payload that survives the minimum, so witness
point pairs can ride along.  Rectangle corners are closed and 1-based; ties
break to the lexicographically smallest (row, col).
"""

from __future__ import annotations

from typing import Any, Optional, Sequence

import numpy as np

from .errors import InvalidInput, InvalidRange


def _ilog2(x: int) -> int:
    return x.bit_length() - 1


class Rmq2dIndex:
    __slots__ = ("matrix", "payload", "rows", "cols", "table")

    def __init__(self, matrix: np.ndarray, payload: Optional[Sequence] = None):
        self.matrix = matrix
        self.payload = payload
        self.rows, self.cols = matrix.shape
        self.table = self._build(matrix)

    @staticmethod
    def build(matrix, payload: Optional[Sequence] = None) -> "Rmq2dIndex":
        m = np.asarray(matrix, dtype=np.int64)
        if m.ndim != 2 or m.size == 0:
            raise InvalidInput("matrix must be 2-D and nonempty")
        return Rmq2dIndex(m, payload)

    @staticmethod
    def _combine(values: np.ndarray, ia: np.ndarray, ib: np.ndarray) -> np.ndarray:
        va = values[ia]
        vb = values[ib]
        take_b = (vb < va) | ((vb == va) & (ib < ia))
        return np.where(take_b, ib, ia)

    def _build(self, m: np.ndarray) -> list[list[np.ndarray]]:
        r, c = m.shape
        flat = m.reshape(-1)
        kr = _ilog2(r) + 1
        kc = _ilog2(c) + 1
        base = np.arange(r * c, dtype=np.int32).reshape(r, c)
        table: list[list[np.ndarray]] = [[base]]
        for pj in range(1, kc):
            prev = table[0][pj - 1]
            half = 1 << (pj - 1)
            w = c - (1 << pj) + 1
            table[0].append(self._combine(flat, prev[:, :w], prev[:, half:half + w]).astype(np.int32))
        for pi in range(1, kr):
            half = 1 << (pi - 1)
            h = r - (1 << pi) + 1
            row: list[np.ndarray] = []
            for pj in range(kc):
                prev = table[pi - 1][pj]
                row.append(self._combine(flat, prev[:h], prev[half:half + h]).astype(np.int32))
            table.append(row)
        return table

    def rect_min(self, r1: int, c1: int, r2: int, c2: int) -> tuple[int, int, int, Any]:
        """Minimum over the closed rectangle (r1,c1)-(r2,c2), 1-based.

        Returns (value, row, col, payload); payload is None when the index
        was built without one.
        """
        if not (1 <= r1 <= r2 <= self.rows and 1 <= c1 <= c2 <= self.cols):
            raise InvalidRange(f"rectangle ({r1},{c1})-({r2},{c2}) invalid for "
                               f"{self.rows}x{self.cols} matrix")
        i1, j1, i2, j2 = r1 - 1, c1 - 1, r2 - 1, c2 - 1
        pi = _ilog2(i2 - i1 + 1)
        pj = _ilog2(j2 - j1 + 1)
        t = self.table[pi][pj]
        oi = i2 - (1 << pi) + 1
        oj = j2 - (1 << pj) + 1
        flat = self.matrix.reshape(-1)
        best = int(t[i1, j1])
        for cand in (int(t[i1, oj]), int(t[oi, j1]), int(t[oi, oj])):
            if flat[cand] < flat[best] or (flat[cand] == flat[best] and cand < best):
                best = cand
        row, col = divmod(best, self.cols)
        pay = self.payload[best] if self.payload is not None else None
        return int(flat[best]), row + 1, col + 1, pay
