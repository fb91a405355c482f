"""Brute-force reference implementations used as ground truth in tests and
by the CLI `verify` subcommand.  These are O(n^2)-class checkers by design;
none of the production oracles call into this module."""

from __future__ import annotations

import numpy as np

from . import _kernels
from .core import INF, ColoredPointSet, DistanceAnswer
from .errors import UnknownColor


def exact_set_distance(a: np.ndarray, b: np.ndarray) -> tuple[int, int, int]:
    """Minimum |p - q| over sorted position arrays a, b, with the leftmost
    attaining pair.  Returns (distance, p_in_a, q_in_b)."""
    i = j = 0
    best = INF
    bp = bq = -1
    while i < a.shape[0] and j < b.shape[0]:
        d = int(a[i]) - int(b[j])
        if abs(d) < best:
            best = abs(d)
            bp, bq = int(a[i]), int(b[j])
        if d > 0:
            j += 1
        else:
            i += 1
    return best, bp, bq


def exact_color_distance(s: ColoredPointSet, c: int, c2: int) -> DistanceAnswer:
    """Exact distance between two colors by a sorted-merge sweep."""
    for col in (c, c2):
        if not (1 <= col <= s.num_colors):
            raise UnknownColor(f"color {col} not in [1, {s.num_colors}]")
    if c == c2:
        p = int(s.points_of(c)[0])
        return DistanceAnswer(0, p, p, exact=True)
    d, p, q = exact_set_distance(s.points_of(c), s.points_of(c2))
    return DistanceAnswer(d, p, q, exact=True)


def exact_all_pairs(s: ColoredPointSet) -> np.ndarray:
    """Symmetric |C| x |C| matrix of exact color distances, zero diagonal."""
    values, _, _ = _kernels.color_pair_sweep(s.positions, s.colors - 1, s.num_colors)
    return values


def exact_all_pairs_with_witnesses(s: ColoredPointSet):
    return _kernels.color_pair_sweep(s.positions, s.colors - 1, s.num_colors)


def occurrences(text: bytes, pattern: bytes) -> np.ndarray:
    """All (possibly overlapping) occurrence start offsets, 0-based."""
    out = []
    start = text.find(pattern)
    while start != -1:
        out.append(start)
        start = text.find(pattern, start + 1)
    return np.asarray(out, dtype=np.int64)


def closest_occurrence_pair(text: bytes, p1: bytes, p2: bytes) -> int:
    """Minimum |i - j| over occurrence starts of the two patterns, INF when
    either pattern is absent."""
    a = occurrences(text, p1)
    b = occurrences(text, p2)
    if a.size == 0 or b.size == 0:
        return INF
    d, _, _ = exact_set_distance(a, b)
    return d
