"""Min-plus matrix product computed through color distance queries.

The deterministic route encodes each matrix entry as a colored point so
that the distance between row-color i and column-color j is exactly
d[i, j] + 2M: cross-index pairs land at least 5M apart and never win.  The
randomized route adds per-row/per-column offsets, drops every position that
collides (making the point set single-colored), and takes the entrywise
minimum over enough repetitions to recover every cell with high
probability.  Both routes answer queries with a flat exact oracle: one
sorted position array per color, scanning the smaller color of a pair.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import INF
from .errors import InvalidInput
from .nns import NnsIndex

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MinPlusInstance:
    """An unbalanced (min,+) product instance with entries in [0, m_bound]."""

    a: np.ndarray
    b: np.ndarray
    m_bound: int

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if a.ndim != 2 or b.ndim != 2:
            raise InvalidInput("matrices must be 2-D")
        nhat, mhat = a.shape
        if b.shape != (mhat, nhat):
            raise InvalidInput(f"shape mismatch: a is {a.shape}, b is {b.shape}")
        if self.m_bound < 1:
            raise InvalidInput("m_bound must be positive")
        if a.min() < 0 or b.min() < 0:
            raise InvalidInput("entries must be non-negative")
        if a.max() > self.m_bound or b.max() > self.m_bound:
            raise InvalidInput("entries exceed m_bound")

    @property
    def nhat(self) -> int:
        return int(self.a.shape[0])

    @property
    def mhat(self) -> int:
        return int(self.a.shape[1])


def minplus_direct(inst: MinPlusInstance) -> np.ndarray:
    """Exact (min,+) product; the ground truth for both reductions."""
    a, b = inst.a, inst.b
    out = np.empty((inst.nhat, inst.nhat), dtype=np.int64)
    for i in range(inst.nhat):
        out[i] = (a[i][:, None] + b).min(axis=0)
    return out


class FlatExactOracle:
    """Exact color distance oracle for flat (non-hierarchical) colorings:
    one NNS index per color, queries scan the smaller color."""

    def __init__(self, positions_by_color: dict[int, np.ndarray]):
        self.index = {c: NnsIndex.build(p) for c, p in positions_by_color.items()
                      if len(p) > 0}

    def has_color(self, c: int) -> bool:
        return c in self.index

    def query(self, c: int, c2: int) -> int:
        ia = self.index[c]
        ib = self.index[c2]
        if len(ia) > len(ib):
            ia, ib = ib, ia
        _, dists = ib.nearest_many(ia.sorted_positions)
        return int(dists.min())


def _encode_points(a: np.ndarray, b: np.ndarray, m: int):
    """Point/color encoding of both matrices (colors 1..nhat for rows of a,
    nhat+1..2 nhat for columns of b)."""
    nhat, mhat = a.shape
    ks = np.arange(1, mhat + 1, dtype=np.int64)
    pos_a = (m - a) + 9 * m * ks[None, :]
    pos_b = b + 3 * m + 9 * m * ks[:, None]
    return pos_a, pos_b


def _shift_amount(inst: MinPlusInstance) -> int:
    # The encoding assumes strictly positive entries; zero entries are
    # lifted by one on both sides and the result lowered by two.
    return 1 if min(int(inst.a.min()), int(inst.b.min())) == 0 else 0


def reduce_to_mcdo(inst: MinPlusInstance) -> np.ndarray:
    """Deterministic reduction: one multi-color distance query per cell."""
    shift = _shift_amount(inst)
    a = inst.a + shift
    b = inst.b + shift
    m = inst.m_bound + shift
    nhat = inst.nhat
    pos_a, pos_b = _encode_points(a, b, m)

    by_color: dict[int, np.ndarray] = {}
    for i in range(nhat):
        by_color[i + 1] = pos_a[i]
    for j in range(nhat):
        by_color[nhat + 1 + j] = pos_b[:, j]
    oracle = FlatExactOracle(by_color)

    out = np.empty((nhat, nhat), dtype=np.int64)
    for i in range(nhat):
        for j in range(nhat):
            out[i, j] = oracle.query(i + 1, nhat + 1 + j) - 2 * m
    return out - 2 * shift


def auto_alpha(nhat: int, mhat: int, c: float = 4.0) -> int:
    return max(1, math.ceil(c * math.log(nhat * mhat)))


def _randomized_rounds(inst: MinPlusInstance, alpha: int, rng: np.random.Generator):
    """Yield (d_tilde, r, s) per repetition: the raw query matrix for the
    offset instance (INF where a color vanished) and the offsets used."""
    shift = _shift_amount(inst)
    a = inst.a + shift
    b = inst.b + shift
    nhat, mhat = inst.nhat, inst.mhat
    m = inst.m_bound + shift + nhat  # offsets add up to nhat

    for _ in range(alpha):
        r = rng.integers(1, nhat + 1, size=nhat, dtype=np.int64)
        s = rng.integers(1, nhat + 1, size=nhat, dtype=np.int64)
        pos_a, pos_b = _encode_points(a + r[:, None], b + s[None, :], m)

        flat = np.concatenate([pos_a.reshape(-1), pos_b.reshape(-1)])
        uniq, counts = np.unique(flat, return_counts=True)
        dup = uniq[counts > 1]

        by_color: dict[int, np.ndarray] = {}
        for i in range(nhat):
            by_color[i + 1] = pos_a[i][~np.isin(pos_a[i], dup)]
        for j in range(nhat):
            by_color[nhat + 1 + j] = pos_b[:, j][~np.isin(pos_b[:, j], dup)]
        oracle = FlatExactOracle(by_color)

        d_tilde = np.full((nhat, nhat), INF, dtype=np.int64)
        for i in range(nhat):
            if not oracle.has_color(i + 1):
                continue
            for j in range(nhat):
                if not oracle.has_color(nhat + 1 + j):
                    continue
                d_tilde[i, j] = oracle.query(i + 1, nhat + 1 + j) - 2 * m
        yield d_tilde, r, s


def reduce_to_cdo_randomized(inst: MinPlusInstance, alpha: Optional[int] = None,
                             rng_seed: int = 0) -> np.ndarray:
    """Randomized reduction through a single-colored point set.

    Entries never resolved in any repetition come back as INF; raising
    alpha (default ceil(4 ln(nhat mhat))) makes that vanishingly rare.
    """
    if alpha is None:
        alpha = auto_alpha(inst.nhat, inst.mhat)
    shift = _shift_amount(inst)
    rng = np.random.default_rng(rng_seed)
    out = np.full((inst.nhat, inst.nhat), INF, dtype=np.int64)
    for d_tilde, r, s in _randomized_rounds(inst, alpha, rng):
        finite = d_tilde != INF
        cand = d_tilde - r[:, None] - s[None, :]
        out[finite] = np.minimum(out[finite], cand[finite])
    unresolved = int((out == INF).sum())
    if unresolved:
        log.warning("randomized reduction left %d entries unresolved after "
                    "%d repetitions; raise alpha", unresolved, alpha)
    out[out != INF] -= 2 * shift
    return out
