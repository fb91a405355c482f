"""Multi-color distance oracle over a color hierarchy.

The pre-order array is cut into blocks of tau ranks.  Recoloring the points
by block id makes every block a heavy color of the inner array oracle, so
the block-pair distance matrix is filled straight from that oracle's heavy
table, then indexed by a 2-D range-minimum structure.  A query resolves
nested colors in O(1), short intervals exactly with range-NNS scans, and
long disjoint intervals as the minimum of two exact prefix/suffix terms
and one approximate block-rectangle term.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .acdo import APPROXIMATE, EXACT, CdoOracle
from .core import INF, ColorHierarchy, DistanceAnswer, normalize, validate_hierarchy
from .errors import InvalidInput, InvalidParameter, UnknownColor
from .rmq2d import Rmq2dIndex
from .rnns import RnnsIndex


class HierarchyOracle:
    __slots__ = ("hierarchy", "rnns", "tau", "num_blocks", "bhat",
                 "bhat_wa", "bhat_wb", "rmq", "epsilon", "mode", "build_info")

    def __init__(self, hierarchy, rnns, tau, num_blocks, bhat, bhat_wa,
                 bhat_wb, rmq, epsilon, mode, build_info=None):
        self.hierarchy = hierarchy
        self.rnns = rnns
        self.tau = tau
        self.num_blocks = num_blocks
        self.bhat = bhat
        self.bhat_wa = bhat_wa
        self.bhat_wb = bhat_wb
        self.rmq = rmq
        self.epsilon = epsilon
        self.mode = mode
        self.build_info = build_info or {}

    @staticmethod
    def build(h: ColorHierarchy, epsilon: Optional[float] = None,
              tau: Optional[int] = None, mode: str = APPROXIMATE) -> "HierarchyOracle":
        violation = validate_hierarchy(h)
        if violation is not None:
            raise InvalidInput(f"invalid hierarchy: {violation.kind} for colors "
                               f"({violation.color_a}, {violation.color_b}): {violation.detail}")
        n = len(h)
        if tau is None:
            tau = max(1, math.ceil(math.sqrt(n)))
        if not (1 <= tau <= n):
            raise InvalidParameter(f"tau must be in [1, n], got {tau}")

        num_blocks = (n + tau - 1) // tau
        a = h.preorder_positions
        block_of = np.arange(n, dtype=np.int64) // tau + 1
        points = list(zip(a.tolist(), block_of.tolist()))

        # Pad the last block with dummy points far above every real
        # position so all block colors reach exactly tau points without
        # disturbing any real distance.
        pad = num_blocks * tau - n
        dummy_base = 2 * max(n, int(a.max()))
        for t in range(1, pad + 1):
            points.append((dummy_base + t, num_blocks))

        inner = normalize(points)
        shift = int(a.min()) - 1
        inner_tau = int(np.diff(inner.color_ptr).min())
        inner_oracle = CdoOracle.build(inner, epsilon=epsilon, tau=inner_tau, mode=mode)
        assert len(inner_oracle.heavy_set) == inner.num_colors, \
            "every block color must be heavy in the inner oracle"
        assert np.array_equal(inner_oracle.estar.heavy_ids,
                              np.arange(1, num_blocks + 1))

        # The heavy table of the inner oracle is exactly the block matrix;
        # reading it row by row is the per-pair O(1) heavy query.
        bhat = inner_oracle.estar.values.copy()
        bhat_wa = inner_oracle.estar.wa.copy()
        bhat_wb = inner_oracle.estar.wb.copy()
        real = bhat_wa >= 0
        bhat_wa[real] += shift
        real = bhat_wb >= 0
        bhat_wb[real] += shift

        payload = list(zip(bhat_wa.reshape(-1).tolist(), bhat_wb.reshape(-1).tolist()))
        rmq = Rmq2dIndex.build(bhat, payload)
        rnns = RnnsIndex.build(a)
        info = dict(inner_oracle.estar.build_info)
        info["w"] = inner_oracle.params.w
        info["num_heavy"] = len(inner_oracle.heavy_set)
        return HierarchyOracle(h, rnns, tau, num_blocks, bhat, bhat_wa,
                               bhat_wb, rmq, epsilon, mode, info)

    def _check_color(self, c: int):
        if not (1 <= c <= self.hierarchy.num_colors):
            raise UnknownColor(f"color {c} not in [1, {self.hierarchy.num_colors}]")

    def _scan_against(self, ranks, other_lo, other_hi):
        """Exact minimum of d(A[r], A[other_lo..other_hi]) over given ranks."""
        a = self.hierarchy.preorder_positions
        best = INF
        bp = bq = -1
        for r in ranks:
            q = int(a[r - 1])
            pt, d = self.rnns.range_nearest(other_lo, other_hi, q)
            if d < best:
                best, bp, bq = d, q, pt
        return best, bp, bq

    def query(self, c: int, c2: int) -> DistanceAnswer:
        self._check_color(c)
        self._check_color(c2)
        x1, y1 = self.hierarchy.interval(c)
        x2, y2 = self.hierarchy.interval(c2)

        # Nested (or equal) colors share a point.
        if x1 <= x2 and y2 <= y1:
            p = int(self.hierarchy.preorder_positions[x2 - 1])
            return DistanceAnswer(0, p, p, exact=True)
        if x2 <= x1 and y1 <= y2:
            p = int(self.hierarchy.preorder_positions[x1 - 1])
            return DistanceAnswer(0, p, p, exact=True)

        tau = self.tau
        if y1 - x1 < 2 * tau:
            d, p, q = self._scan_against(range(x1, y1 + 1), x2, y2)
            return DistanceAnswer(d, p, q, exact=True)
        if y2 - x2 < 2 * tau:
            d, p, q = self._scan_against(range(x2, y2 + 1), x1, y1)
            return DistanceAnswer(d, q, p, exact=True)

        swapped = x2 < x1
        if swapped:
            (x1, y1), (x2, y2) = (x2, y2), (x1, y1)

        # Prefix/suffix ranks of each interval under the block grid.
        j1_hi = ((x1 - 1 + tau - 1) // tau) * tau
        k1_lo = (y1 // tau) * tau + 1
        ranks1 = list(range(x1, min(j1_hi, y1) + 1)) + list(range(max(k1_lo, x1), y1 + 1))
        j2_hi = ((x2 - 1 + tau - 1) // tau) * tau
        k2_lo = (y2 // tau) * tau + 1
        ranks2 = list(range(x2, min(j2_hi, y2) + 1)) + list(range(max(k2_lo, x2), y2 + 1))

        best, bp, bq = self._scan_against(ranks1, x2, y2)
        d2, p2, q2 = self._scan_against(ranks2, x1, y1)
        if d2 < best:
            best, bp, bq = d2, q2, p2

        r_lo = (x1 - 1 + tau - 1) // tau + 1
        r_hi = y1 // tau
        c_lo = (x2 - 1 + tau - 1) // tau + 1
        c_hi = y2 // tau
        if r_lo <= r_hi and c_lo <= c_hi:
            value, _, _, payload = self.rmq.rect_min(r_lo, c_lo, r_hi, c_hi)
            if value < best:
                best, (bp, bq) = value, payload

        answer = DistanceAnswer(int(best), int(bp), int(bq),
                                exact=(self.mode == EXACT))
        return answer.swapped() if swapped else answer
