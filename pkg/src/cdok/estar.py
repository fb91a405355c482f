"""Heavy-heavy approximate distance matrix construction.

Two passes fill the matrix.  A brute-force window scan settles every heavy
pair whose distance is at most ((1+2e)/e)*W exactly.  For farther pairs, a
geometric ladder of Boolean matrix products flags, per level, which heavy
pairs have a point of one color within a stretched window of a block
containing the other; the unique level where a pair flips from 0 to 1
pins its distance within one (1+e)^2 factor.  Running the whole build with
an internal parameter of e/3 brings the final guarantee down to (1+e).

Window lengths are floored and stored values ceiled to integers; the e/3
margin absorbs both roundings (distances are integers, so flooring the
window never changes membership, and the ceiling inflates a stored value
by less than one part in W).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .boolmat import BitMatrix, _pack_rows
from .core import INF, ColoredPointSet
from .errors import InvalidParameter

WORD_BITS = 64


def level_bounds(epsilon: float, universe: int) -> tuple[int, int]:
    """First and last window levels: the unique integers with
    (1+e)^(l0-1) <= 1/e < (1+e)^l0 and (1+e)^(lmax-1) < u <= (1+e)^lmax."""
    ell0 = int(math.floor(math.log(1.0 / epsilon) / math.log1p(epsilon))) + 1
    while (1.0 + epsilon) ** ell0 <= 1.0 / epsilon:
        ell0 += 1
    while ell0 > 1 and (1.0 + epsilon) ** (ell0 - 1) > 1.0 / epsilon:
        ell0 -= 1
    if universe <= 1:
        return ell0, 0
    ell_max = int(math.ceil(math.log(universe) / math.log1p(epsilon)))
    while (1.0 + epsilon) ** ell_max < universe:
        ell_max += 1
    while ell_max > 0 and (1.0 + epsilon) ** (ell_max - 1) >= universe:
        ell_max -= 1
    return ell0, ell_max


def brute_radius(epsilon: float, w: int) -> int:
    return int(math.floor((1.0 + 2.0 * epsilon) / epsilon * w))


@dataclass(frozen=True)
class EStarParams:
    """Build parameters; ell0/ell_max are derived from epsilon as given.
    The construction itself reruns the level math at epsilon/3."""

    epsilon: float
    tau: int
    w: int
    universe: int
    ell0: int = field(init=False)
    ell_max: int = field(init=False)

    def __post_init__(self):
        if not (0.0 < self.epsilon <= 1.0):
            raise InvalidParameter(f"epsilon must be in (0, 1], got {self.epsilon}")
        if self.tau < 1:
            raise InvalidParameter("tau must be >= 1")
        if self.w < 1:
            raise InvalidParameter("w must be >= 1")
        l0, lm = level_bounds(self.epsilon, self.universe)
        object.__setattr__(self, "ell0", l0)
        object.__setattr__(self, "ell_max", lm)

    @property
    def eps_internal(self) -> float:
        return self.epsilon / 3.0


class EStarMatrix:
    """Approximate heavy-heavy distances with witness point pairs.

    ``values`` is symmetric; entry (i, j) lies in [delta, (1+e) delta] for
    the heavy pair (h_i, h_j).  ``wa[i, j]`` is a point of h_i, ``wb[i, j]``
    a point of h_j, with |wa - wb| <= values[i, j].
    """

    __slots__ = ("values", "wa", "wb", "heavy_ids", "index_of", "build_info")

    def __init__(self, values, wa, wb, heavy_ids, build_info=None):
        self.values = values
        self.wa = wa
        self.wb = wb
        self.heavy_ids = np.asarray(heavy_ids, dtype=np.int64)
        self.index_of = {int(c): i for i, c in enumerate(self.heavy_ids)}
        self.build_info = build_info or {}

    def lookup(self, c: int, c2: int) -> tuple[int, int, int]:
        i = self.index_of[c]
        j = self.index_of[c2]
        return int(self.values[i, j]), int(self.wa[i, j]), int(self.wb[i, j])


def classify_colors(s: ColoredPointSet, tau: int) -> tuple[np.ndarray, np.ndarray]:
    """Split colors into heavy (>= tau points) and light."""
    if tau < 1:
        raise InvalidParameter("tau must be >= 1")
    sizes = np.diff(s.color_ptr)
    ids = np.arange(1, s.num_colors + 1, dtype=np.int64)
    heavy = sizes >= tau
    return ids[heavy], ids[~heavy]


def _block_tables(s: ColoredPointSet, heavy: np.ndarray, w: int):
    """Per heavy color, the smallest point at or after each block start.

    Returns (first_val, anno): both (|H|, nblocks); ``first_val`` holds INF
    where no point follows the block start, ``anno`` holds -1 there.  A
    block-membership or window-membership bit is a comparison of first_val
    against the block or window end, and ``anno`` is then the witnessing
    point for that bit.
    """
    nblocks = (s.universe_size + w - 1) // w
    los = np.arange(nblocks, dtype=np.int64) * w + 1
    h = heavy.shape[0]
    first_val = np.full((h, nblocks), INF, dtype=np.int64)
    anno = np.full((h, nblocks), -1, dtype=np.int64)
    for i, hc in enumerate(heavy):
        pts = s.points_of(int(hc))
        left = np.searchsorted(pts, los)
        has = left < pts.shape[0]
        vals = pts[np.minimum(left, pts.shape[0] - 1)]
        first_val[i, has] = vals[has]
        anno[i, has] = vals[has]
    return first_val, anno


def build_block_matrix_a(s: ColoredPointSet, heavy: np.ndarray, w: int) -> tuple[BitMatrix, np.ndarray]:
    """|H| x ceil(max(S)/W) block-occupancy matrix plus, per 1-entry, one
    point of the color inside the block."""
    first_val, anno = _block_tables(s, heavy, w)
    nblocks = first_val.shape[1]
    his = (np.arange(nblocks, dtype=np.int64) + 1) * w
    bits = first_val <= his[None, :]
    anno = np.where(bits, anno, -1)
    return BitMatrix.from_bool(bits), anno


def build_block_matrix_b(s: ColoredPointSet, heavy: np.ndarray, w: int,
                         ell: int, epsilon: float) -> tuple[BitMatrix, np.ndarray]:
    """ceil(max(S)/W) x |H| stretched-window occupancy matrix for level ell
    plus per-1-entry witnessing points (same orientation as the matrix)."""
    first_val, anno = _block_tables(s, heavy, w)
    nblocks = first_val.shape[1]
    ext = int(math.floor((1.0 + epsilon) ** ell * w))
    his = (np.arange(nblocks, dtype=np.int64) + 1) * w + ext
    bits = first_val <= his[None, :]
    anno = np.where(bits, anno, -1)
    return BitMatrix.from_bool(bits.T), anno.T


def iter_level_matrices(s: ColoredPointSet, heavy: np.ndarray, w: int, epsilon: float):
    """Yield (ell, E_bool) for every window level at the given epsilon.

    Diagnostic path used to check the level lemmas; shares the bit builders
    with :func:`construct_estar` but is driven against the independent
    brute-force oracle by the test suite.
    """
    ell0, ell_max = level_bounds(epsilon, s.universe_size)
    first_val, _ = _block_tables(s, heavy, w)
    nblocks = first_val.shape[1]
    his = (np.arange(nblocks, dtype=np.int64) + 1) * w
    a_packed = _pack_rows(first_val <= his[None, :])
    for ell in range(ell0, ell_max + 1):
        ext = int(math.floor((1.0 + epsilon) ** ell * w))
        bt_packed = _pack_rows(first_val <= (his + ext)[None, :])
        yield ell, _kernels.bool_product(a_packed, bt_packed).astype(bool)


def construct_estar(s: ColoredPointSet, heavy: np.ndarray, params: EStarParams) -> EStarMatrix:
    """Run the two-pass construction with internal parameter epsilon/3."""
    eps = params.eps_internal
    w = params.w
    h = heavy.shape[0]
    max_s = s.universe_size

    values = np.full((h, h), INF, dtype=np.int64)
    wa = np.full((h, h), -1, dtype=np.int64)
    wb = np.full((h, h), -1, dtype=np.int64)
    for i, hc in enumerate(heavy):
        p = int(s.points_of(int(hc))[0])
        values[i, i] = 0
        wa[i, i] = p
        wb[i, i] = p

    ell0, ell_max = level_bounds(eps, max_s)
    radius = brute_radius(eps, w)
    info = {"ell0": ell0, "ell_max": ell_max, "radius": radius,
            "eps_internal": eps, "levels_built": 0}

    if h >= 2:
        hmap = np.full(s.num_colors + 1, -1, dtype=np.int64)
        for i, hc in enumerate(heavy):
            hmap[int(hc)] = i
        per_point = hmap[s.colors]
        _kernels.close_pair_scan(s.positions, per_point, np.int64(radius), values, wa, wb)

        if ell0 > ell_max:
            # Tiny universe or large epsilon: the brute window spans max(S).
            assert radius >= max_s, "degenerate level range must be brute-covered"
        elif radius < max_s - 1 and ell0 < ell_max:
            _matrix_pass(s, heavy, w, eps, ell0, ell_max, values, wa, wb, info)

    bad = values[np.triu_indices(h, k=1)] if h >= 2 else np.empty(0)
    assert not np.any(bad == INF), "a heavy pair was covered by neither pass"
    return EStarMatrix(values, wa, wb, heavy, info)


def _matrix_pass(s, heavy, w, eps, ell0, ell_max, values, wa, wb, info):
    first_val, anno = _block_tables(s, heavy, w)
    nblocks = first_val.shape[1]
    his = (np.arange(nblocks, dtype=np.int64) + 1) * w
    a_packed = _pack_rows(first_val <= his[None, :])

    prev_e: Optional[np.ndarray] = None
    for ell in range(ell0, ell_max + 1):
        ext = int(math.floor((1.0 + eps) ** ell * w))
        bt_packed = _pack_rows(first_val <= (his + ext)[None, :])
        cur = _kernels.bool_product(a_packed, bt_packed)
        info["levels_built"] += 1
        if prev_e is not None:
            both_zero = (prev_e == 0) & (prev_e.T == 0)
            any_one = (cur == 1) | (cur.T == 1)
            fire = np.triu(both_zero & any_one, k=1)
            if fire.any():
                value = int(math.ceil((1.0 + eps) ** (ell + 1) * w))
                for i, j in zip(*np.nonzero(fire)):
                    if value >= values[i, j]:
                        continue
                    if cur[i, j]:
                        k = _kernels.first_common_bit(a_packed[i], bt_packed[j])
                    else:
                        k = _kernels.first_common_bit(a_packed[j], bt_packed[i])
                    pi, pj = int(anno[i, k]), int(anno[j, k])
                    values[i, j] = value
                    values[j, i] = value
                    wa[i, j] = pi
                    wb[i, j] = pj
                    wa[j, i] = pj
                    wb[j, i] = pi
        prev_e = cur
