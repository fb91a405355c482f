"""Domain types shared by every oracle: colored point sets, color
hierarchies over a laminar family, and distance answers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import InvalidInput

INF = np.iinfo(np.int64).max


@dataclass(frozen=True)
class DistanceAnswer:
    """A distance value plus the point pair attaining or certifying it.

    ``exact`` means the reported distance equals ``|witness_a - witness_b|``
    and is the true minimum for the queried pair.  Infinite distances carry
    no witnesses.
    """

    distance: int
    witness_a: Optional[int] = None
    witness_b: Optional[int] = None
    exact: bool = False

    @property
    def is_infinite(self) -> bool:
        return self.distance == INF

    def swapped(self) -> "DistanceAnswer":
        return DistanceAnswer(self.distance, self.witness_b, self.witness_a, self.exact)


class ColoredPointSet:
    """n colored points on an integer line, normalized so min position is 1.

    Construct through :func:`normalize`.  Points are stored sorted by
    (position, color); within one color duplicate positions are collapsed,
    across colors they may repeat.  Color ids are dense in ``1..num_colors``
    and every color owns at least one point.
    """

    __slots__ = ("positions", "colors", "num_colors", "universe_size",
                 "color_ptr", "color_pos", "original_ids")

    def __init__(self, positions: np.ndarray, colors: np.ndarray,
                 num_colors: int, universe_size: int,
                 original_ids: np.ndarray):
        self.positions = positions
        self.colors = colors
        self.num_colors = num_colors
        self.universe_size = universe_size
        self.original_ids = original_ids
        # CSR layout: per-color sorted position lists.
        order = np.lexsort((positions, colors))
        self.color_pos = positions[order]
        counts = np.bincount(colors - 1, minlength=num_colors)
        self.color_ptr = np.zeros(num_colors + 1, dtype=np.int64)
        np.cumsum(counts, out=self.color_ptr[1:])

    def __len__(self) -> int:
        return int(self.positions.shape[0])

    def points_of(self, color: int) -> np.ndarray:
        """Sorted positions of one color (1-based color id)."""
        return self.color_pos[self.color_ptr[color - 1]:self.color_ptr[color]]

    def color_size(self, color: int) -> int:
        return int(self.color_ptr[color] - self.color_ptr[color - 1])

    def as_pairs(self) -> list[tuple[int, int]]:
        return [(int(p), int(c)) for p, c in zip(self.positions, self.colors)]


def normalize(points: Iterable[tuple[int, int]]) -> ColoredPointSet:
    """Shift positions so the minimum is 1, collapse duplicates within a
    color, and re-index colors densely starting at 1.

    The mapping from original color ids is kept in ``original_ids`` where
    ``original_ids[k]`` is the original id of dense color ``k + 1``.
    """
    pts = list(points)
    if not pts:
        raise InvalidInput("point set is empty")
    raw_pos = np.asarray([p for p, _ in pts], dtype=np.int64)
    raw_col = np.asarray([c for _, c in pts], dtype=np.int64)
    if np.any(raw_col <= 0):
        raise InvalidInput("color ids must be positive")
    if np.any(raw_pos < 0):
        raise InvalidInput("positions must be non-negative")

    shift = raw_pos.min() - 1
    pos = raw_pos - shift

    uniq_ids = np.unique(raw_col)
    dense = np.searchsorted(uniq_ids, raw_col) + 1

    stacked = np.stack([pos, dense], axis=1)
    stacked = np.unique(stacked, axis=0)
    order = np.lexsort((stacked[:, 1], stacked[:, 0]))
    stacked = stacked[order]

    return ColoredPointSet(
        positions=stacked[:, 0].copy(),
        colors=stacked[:, 1].copy(),
        num_colors=int(uniq_ids.shape[0]),
        universe_size=int(pos.max()),
        original_ids=uniq_ids,
    )


@dataclass(frozen=True)
class HierarchyViolation:
    kind: str
    color_a: int
    color_b: int
    detail: str


class ColorHierarchy:
    """A laminar color family as a rooted tree plus the pre-order point array.

    ``parent[c - 1]`` is the parent color of c (0 for the artificial root).
    ``preorder_positions[r - 1]`` is the position of the point at pre-order
    rank r, and color c occupies the closed rank interval
    ``intervals[c - 1] = (x_c, y_c)``: the multi-color point set of c is
    exactly the positions at ranks x_c..y_c.
    """

    __slots__ = ("parent", "leaf_color", "preorder_positions",
                 "interval_lo", "interval_hi", "num_colors")

    def __init__(self, parent, leaf_color, preorder_positions,
                 interval_lo, interval_hi):
        self.parent = np.asarray(parent, dtype=np.int64)
        self.leaf_color = np.asarray(leaf_color, dtype=np.int64)
        self.preorder_positions = np.asarray(preorder_positions, dtype=np.int64)
        self.interval_lo = np.asarray(interval_lo, dtype=np.int64)
        self.interval_hi = np.asarray(interval_hi, dtype=np.int64)
        self.num_colors = int(self.parent.shape[0])

    def __len__(self) -> int:
        return int(self.preorder_positions.shape[0])

    def interval(self, color: int) -> tuple[int, int]:
        return int(self.interval_lo[color - 1]), int(self.interval_hi[color - 1])

    def points_of(self, color: int) -> np.ndarray:
        """Positions belonging to a color (all points in its subtree)."""
        lo, hi = self.interval(color)
        return self.preorder_positions[lo - 1:hi]

    @staticmethod
    def from_leaf_data(points: Sequence[tuple[int, int]],
                       parent: Sequence[int]) -> "ColorHierarchy":
        """Build the pre-order array and intervals from per-point lowest
        colors and per-color parent links.

        The traversal emits a color's own points (sorted by position) before
        descending into its children in ascending color id; a point owned by
        an internal color thereby occupies its own rank slot inside the
        color's interval but outside every child interval, which realizes
        the point-to-leaf embedding without altering any interval.
        """
        if not points:
            raise InvalidInput("hierarchy has no points")
        parent = np.asarray(parent, dtype=np.int64)
        num_colors = int(parent.shape[0])
        if num_colors == 0:
            raise InvalidInput("hierarchy has no colors")
        if np.any(parent < 0) or np.any(parent > num_colors):
            raise InvalidInput("parent ids must be in [0, num_colors]")

        leaf_color = np.asarray([c for _, c in points], dtype=np.int64)
        positions = np.asarray([p for p, _ in points], dtype=np.int64)
        if np.any(leaf_color < 1) or np.any(leaf_color > num_colors):
            raise InvalidInput("leaf colors must be in [1, num_colors]")

        children: list[list[int]] = [[] for _ in range(num_colors + 1)]
        for c in range(1, num_colors + 1):
            children[int(parent[c - 1])].append(c)

        own: list[list[int]] = [[] for _ in range(num_colors + 1)]
        order = np.lexsort((leaf_color, positions))
        for idx in order:
            own[int(leaf_color[idx])].append(int(positions[idx]))

        lo = np.zeros(num_colors, dtype=np.int64)
        hi = np.zeros(num_colors, dtype=np.int64)
        preorder: list[int] = []
        rank_leaf: list[int] = []
        # Iterative pre-order; "enter"/"exit" markers record interval ends.
        stack = [(c, False) for c in reversed(children[0])]
        visited = np.zeros(num_colors + 1, dtype=bool)
        while stack:
            color, done = stack.pop()
            if done:
                hi[color - 1] = len(preorder)
                continue
            if visited[color]:
                raise InvalidInput("parent links contain a cycle")
            visited[color] = True
            lo[color - 1] = len(preorder) + 1
            preorder.extend(own[color])
            rank_leaf.extend([color] * len(own[color]))
            stack.append((color, True))
            for ch in reversed(children[color]):
                stack.append((ch, False))
        if not visited[1:].all():
            raise InvalidInput("parent links contain a cycle")
        if len(preorder) != len(points):
            raise InvalidInput("pre-order traversal lost points")

        return ColorHierarchy(parent, np.asarray(rank_leaf, dtype=np.int64),
                              np.asarray(preorder, dtype=np.int64), lo, hi)


def validate_hierarchy(h: ColorHierarchy) -> Optional[HierarchyViolation]:
    """Check laminarity, interval nesting, contiguity and point-set
    uniqueness; returns the first violation found, or None."""
    n = len(h)
    c = h.num_colors
    lo, hi = h.interval_lo, h.interval_hi

    for color in range(1, c + 1):
        x, y = lo[color - 1], hi[color - 1]
        if not (1 <= x <= y <= n):
            return HierarchyViolation("bad_interval", color, color,
                                      f"interval ({x}, {y}) out of bounds for n={n}")

    # Laminarity + duplicate point sets: sweep intervals by (lo asc, hi desc).
    order = sorted(range(1, c + 1), key=lambda k: (lo[k - 1], -hi[k - 1]))
    stack: list[int] = []
    prev: Optional[int] = None
    for color in order:
        x, y = lo[color - 1], hi[color - 1]
        if prev is not None:
            px, py = lo[prev - 1], hi[prev - 1]
            if px == x and py == y:
                return HierarchyViolation("duplicate_point_set", prev, color,
                                          f"colors share the interval ({x}, {y})")
        while stack and hi[stack[-1] - 1] < x:
            stack.pop()
        if stack:
            ex, ey = lo[stack[-1] - 1], hi[stack[-1] - 1]
            if not (ex <= x and y <= ey):
                return HierarchyViolation("laminarity", stack[-1], color,
                                          f"intervals ({ex}, {ey}) and ({x}, {y}) overlap")
        stack.append(color)
        prev = color

    for color in range(1, c + 1):
        p = int(h.parent[color - 1])
        if p != 0:
            if not (lo[p - 1] <= lo[color - 1] and hi[color - 1] <= hi[p - 1]):
                return HierarchyViolation("child_not_nested", p, color,
                                          "child interval not inside parent interval")

    # Contiguity: per color, subtree leaf ranks must fill the interval.
    sub_min = np.full(c + 1, np.iinfo(np.int64).max, dtype=np.int64)
    sub_max = np.zeros(c + 1, dtype=np.int64)
    sub_cnt = np.zeros(c + 1, dtype=np.int64)
    for rank0 in range(n):
        lc = int(h.leaf_color[rank0])
        r = rank0 + 1
        sub_min[lc] = min(sub_min[lc], r)
        sub_max[lc] = max(sub_max[lc], r)
        sub_cnt[lc] += 1
    # Children sorted deepest-interval first so parents aggregate after.
    for color in sorted(range(1, c + 1), key=lambda k: hi[k - 1] - lo[k - 1]):
        p = int(h.parent[color - 1])
        sub_min[p] = min(sub_min[p], sub_min[color])
        sub_max[p] = max(sub_max[p], sub_max[color])
        sub_cnt[p] += sub_cnt[color]
        x, y = lo[color - 1], hi[color - 1]
        if sub_cnt[color] != y - x + 1 or sub_min[color] != x or sub_max[color] != y:
            return HierarchyViolation("not_contiguous", color, color,
                                      f"subtree points do not fill interval ({x}, {y})")
    return None
