"""Static nearest-neighbor search over a set of integer positions.

A sorted array with binary search stands in for a van Emde Boas tree: the
O(log m) query stays within the oracle's polylog budget and the interface
is small enough to swap implementations later.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import InvalidInput


class NnsIndex:
    """Immutable index answering nearest(q) with ties to the smaller point."""

    __slots__ = ("sorted_positions",)

    def __init__(self, sorted_positions: np.ndarray):
        self.sorted_positions = sorted_positions

    def __len__(self) -> int:
        return int(self.sorted_positions.shape[0])

    @staticmethod
    def build(positions: Iterable[int] | np.ndarray) -> "NnsIndex":
        arr = np.unique(np.asarray(list(positions) if not isinstance(positions, np.ndarray) else positions,
                                   dtype=np.int64))
        if arr.size == 0:
            raise InvalidInput("cannot build an NNS index over an empty set")
        return NnsIndex(arr)

    @staticmethod
    def from_sorted(sorted_positions: np.ndarray) -> "NnsIndex":
        """Wrap an already sorted, de-duplicated array without copying."""
        if sorted_positions.size == 0:
            raise InvalidInput("cannot build an NNS index over an empty set")
        return NnsIndex(sorted_positions)

    def nearest(self, q: int) -> tuple[int, int]:
        """Point minimizing |q - p| and that distance; ties break low."""
        arr = self.sorted_positions
        k = int(np.searchsorted(arr, q))
        best = -1
        bestd = None
        if k > 0:
            best = int(arr[k - 1])
            bestd = q - best
        if k < arr.shape[0]:
            d = int(arr[k]) - q
            if bestd is None or d < bestd:
                best = int(arr[k])
                bestd = d
        return best, int(bestd)

    def nearest_many(self, qs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorized nearest over a batch of queries."""
        arr = self.sorted_positions
        ks = np.searchsorted(arr, qs)
        lo = np.clip(ks - 1, 0, arr.shape[0] - 1)
        hi = np.clip(ks, 0, arr.shape[0] - 1)
        dlo = np.where(ks > 0, qs - arr[lo], np.iinfo(np.int64).max)
        dhi = np.where(ks < arr.shape[0], arr[hi] - qs, np.iinfo(np.int64).max)
        take_hi = dhi < dlo
        pts = np.where(take_hi, arr[hi], arr[lo])
        return pts, np.minimum(dlo, dhi)
