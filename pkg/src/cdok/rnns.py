"""Range nearest-neighbor search: nearest value to q among A[i..j].

The index is a merge tree (a balanced decomposition where every node keeps
the sorted values of its rank range), giving O(log^2 n) queries with plain
binary searches per level.  Rank ranges are closed and 1-based.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import InvalidInput, InvalidRange

INF = _kernels.INF


class RnnsIndex:
    __slots__ = ("base_array", "levels", "size", "leaf_depth")

    def __init__(self, base_array, levels, size, leaf_depth):
        self.base_array = base_array
        self.levels = levels
        self.size = size
        self.leaf_depth = leaf_depth

    def __len__(self) -> int:
        return int(self.base_array.shape[0])

    @staticmethod
    def build(a) -> "RnnsIndex":
        base = np.asarray(a, dtype=np.int64)
        if base.size == 0:
            raise InvalidInput("cannot build an RNNS index over an empty array")
        size = 1
        leaf_depth = 0
        while size < base.size:
            size *= 2
            leaf_depth += 1
        levels = np.full((leaf_depth + 1, size), INF, dtype=np.int64)
        levels[leaf_depth, :base.size] = base
        for d in range(leaf_depth - 1, -1, -1):
            seg = size >> d
            merged = levels[d + 1].reshape(-1, seg).copy()
            merged.sort(axis=1)
            levels[d] = merged.reshape(-1)
        return RnnsIndex(base, levels, size, leaf_depth)

    def range_nearest(self, i: int, j: int, q: int) -> tuple[int, int]:
        """Value among A[i..j] nearest to q and its distance; ties break to
        the smaller value."""
        n = self.base_array.shape[0]
        if not (1 <= i <= j <= n):
            raise InvalidRange(f"rank range ({i}, {j}) invalid for n={n}")
        best, bestd = _kernels.merge_tree_query(
            self.levels, self.leaf_depth, self.size, i - 1, j - 1, int(q))
        return int(best), int(bestd)
