"""Text layer: a suffix-array-shaped color hierarchy plus pattern queries.

The distinct intervals of the LCP-interval tree (plus one leaf interval per
suffix) become the colors of a hierarchy whose pre-order array is the
suffix array itself, so two-pattern proximity queries reduce to one
hierarchy-oracle query between the patterns' locus colors.  The implicit
terminator sorts below every byte and is never exposed; occurrence
positions are 1-based text offsets and may overlap.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from . import _kernels
from .acdo import APPROXIMATE
from .amcdoch import HierarchyOracle
from .core import ColorHierarchy, DistanceAnswer
from .errors import InvalidInput, PatternNotFound


def build_suffix_array(codes: np.ndarray) -> np.ndarray:
    """Suffix array by prefix doubling; out-of-range ranks compare lowest."""
    n = int(codes.shape[0])
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    _, rank = np.unique(codes, return_inverse=True)
    rank = rank.astype(np.int64)
    order = np.argsort(rank, kind="stable").astype(np.int64)
    k = 1
    while int(rank.max()) != n - 1:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[:n - k] = rank[k:]
        order = np.lexsort((key2, rank)).astype(np.int64)
        r_sorted = rank[order]
        k_sorted = key2[order]
        change = np.empty(n, dtype=np.int64)
        change[0] = 0
        change[1:] = (r_sorted[1:] != r_sorted[:-1]) | (k_sorted[1:] != k_sorted[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[order] = np.cumsum(change)
        rank = new_rank
        k *= 2
    return order


def lcp_intervals(lcp: np.ndarray, n: int) -> list[tuple[int, int, int]]:
    """All maximal lcp-intervals as (depth, lo, hi) with 1-based ranks."""
    out: list[tuple[int, int, int]] = []
    stack: list[tuple[int, int]] = [(0, 1)]
    for i in range(2, n + 2):
        cur = int(lcp[i - 1]) if i <= n else 0
        lb = i - 1
        while stack and stack[-1][0] > cur:
            d, lo = stack.pop()
            out.append((d, lo, i - 1))
            lb = lo
        if not stack or stack[-1][0] < cur:
            stack.append((cur, lb))
    out.append((0, 1, n))
    return out


class TextIndex:
    __slots__ = ("text", "sa", "node_lo", "node_hi", "node_depth",
                 "interval_color", "oracle")

    def __init__(self, text, sa, node_lo, node_hi, node_depth,
                 interval_color, oracle):
        self.text = text
        self.sa = sa
        self.node_lo = node_lo
        self.node_hi = node_hi
        self.node_depth = node_depth
        self.interval_color = interval_color
        self.oracle = oracle

    def __len__(self) -> int:
        return len(self.text)


def build_index(text: bytes | str, epsilon: Optional[float] = None,
                tau: Optional[int] = None, mode: str = APPROXIMATE) -> TextIndex:
    if isinstance(text, str):
        text = text.encode("utf-8")
    if len(text) == 0:
        raise InvalidInput("text is empty")
    codes = np.frombuffer(text, dtype=np.uint8).astype(np.int64) + 1
    n = codes.shape[0]
    sa = build_suffix_array(codes)
    lcp = _kernels.kasai_lcp(codes, sa)

    # One color per distinct interval: every leaf [r, r] at depth = suffix
    # length, plus the internal lcp-intervals (deepest depth wins on ties).
    depth_of: dict[tuple[int, int], int] = {}
    for r in range(1, n + 1):
        depth_of[(r, r)] = n - int(sa[r - 1])
    for d, lo, hi in lcp_intervals(lcp, n):
        key = (lo, hi)
        if depth_of.get(key, -1) < d:
            depth_of[key] = d

    ordered = sorted(depth_of, key=lambda iv: (iv[0], -iv[1]))
    interval_color = {iv: k + 1 for k, iv in enumerate(ordered)}
    node_lo = np.asarray([iv[0] for iv in ordered], dtype=np.int64)
    node_hi = np.asarray([iv[1] for iv in ordered], dtype=np.int64)
    node_depth = np.asarray([depth_of[iv] for iv in ordered], dtype=np.int64)

    parent = np.zeros(len(ordered), dtype=np.int64)
    stack: list[int] = []
    for k in range(len(ordered)):
        while stack and node_hi[stack[-1]] < node_lo[k]:
            stack.pop()
        parent[k] = stack[-1] + 1 if stack else 0
        stack.append(k)

    leaf_points = [(int(sa[r - 1]) + 1, interval_color[(r, r)]) for r in range(1, n + 1)]
    hierarchy = ColorHierarchy.from_leaf_data(leaf_points, parent)
    oracle = HierarchyOracle.build(hierarchy, epsilon=epsilon, tau=tau, mode=mode)
    return TextIndex(text, sa, node_lo, node_hi, node_depth, interval_color, oracle)


def _sa_range(idx: TextIndex, pattern: bytes) -> tuple[int, int]:
    """1-based rank interval of suffixes starting with pattern; empty as
    (lo, lo - 1)."""
    text, sa = idx.text, idx.sa
    n = sa.shape[0]
    m = len(pattern)

    a, b = 0, n
    while a < b:
        mid = (a + b) // 2
        if text[sa[mid]:sa[mid] + m] < pattern:
            a = mid + 1
        else:
            b = mid
    lo = a
    a, b = lo, n
    while a < b:
        mid = (a + b) // 2
        if text[sa[mid]:sa[mid] + m] <= pattern:
            a = mid + 1
        else:
            b = mid
    return lo + 1, a


def locate(idx: TextIndex, pattern: bytes | str) -> int:
    """Color of the pattern's locus node; raises on absent patterns."""
    if isinstance(pattern, str):
        pattern = pattern.encode("utf-8")
    if len(pattern) == 0:
        raise InvalidInput("pattern is empty")
    lo, hi = _sa_range(idx, pattern)
    if lo > hi:
        raise KeyError(pattern)
    color = idx.interval_color.get((lo, hi))
    assert color is not None, "occurrence interval must be a tree node"
    return color


def occurrence_positions(idx: TextIndex, pattern: bytes | str) -> np.ndarray:
    """Sorted 1-based start positions of all occurrences."""
    try:
        color = locate(idx, pattern)
    except KeyError:
        return np.empty(0, dtype=np.int64)
    pts = idx.oracle.hierarchy.points_of(color)
    return np.sort(pts)


def query(idx: TextIndex, p1: bytes | str, p2: bytes | str) -> DistanceAnswer:
    """Approximate distance between the closest occurrence starts of two
    patterns, with the pair of 1-based positions behind it."""
    try:
        c1 = locate(idx, p1)
    except KeyError:
        raise PatternNotFound(1) from None
    try:
        c2 = locate(idx, p2)
    except KeyError:
        raise PatternNotFound(2) from None
    return idx.oracle.query(c1, c2)
