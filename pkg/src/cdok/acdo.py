"""The generic heavy-light color distance oracle.

Heavy pairs (both colors with >= tau points) are answered from a
precomputed table: the approximate table from :mod:`cdok.estar`, or an
exact table filled by per-pair nearest-neighbor scans when built in exact
mode (the classic quadratic-tradeoff baseline).  Every other pair iterates
the smaller color's points against the other color's NNS index, which is
exact and costs at most tau queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .core import ColoredPointSet, DistanceAnswer
from .errors import InvalidParameter, UnknownColor
from .estar import EStarMatrix, EStarParams, classify_colors, construct_estar
from .nns import NnsIndex

EXACT = "exact"
APPROXIMATE = "approximate"


@dataclass
class QueryStats:
    nns_calls: int = 0
    table_lookups: int = 0


def default_tau(n: int, b: float = 0.5) -> int:
    return max(1, math.ceil(n ** b))


def default_width(n: int, tau: int, universe: int, omega: float = 3.0) -> int:
    """Block width from the two-regime tradeoff formula, clamped to the
    universe.  omega is the matrix-multiplication exponent the deployment
    assumes; 3 matches the combinatorial multiplier shipped here."""
    logn = max(math.log(n), 1.0)
    threshold = n ** ((omega - 1.0) / (omega + 1.0)) * math.sqrt(logn)
    if tau >= threshold:
        w = (n / tau) ** ((omega - 1.0) / 2.0) * math.sqrt(logn)
    else:
        w = n / (tau ** (2.0 / (omega - 1.0))) * logn ** (1.0 / (omega - 1.0))
    return int(min(max(1, math.ceil(w)), universe))


class CdoOracle:
    __slots__ = ("point_set", "mode", "params", "heavy_ids", "heavy_set",
                 "estar", "nns", "omega")

    def __init__(self, point_set, mode, params, heavy_ids, estar, nns, omega):
        self.point_set = point_set
        self.mode = mode
        self.params = params
        self.heavy_ids = heavy_ids
        self.heavy_set = frozenset(int(c) for c in heavy_ids)
        self.estar = estar
        self.nns = nns
        self.omega = omega

    @staticmethod
    def build(s: ColoredPointSet, epsilon: Optional[float] = None,
              tau: Optional[int] = None, w: Optional[int] = None,
              mode: str = APPROXIMATE, b: float = 0.5,
              omega: float = 3.0) -> "CdoOracle":
        if mode not in (EXACT, APPROXIMATE):
            raise InvalidParameter(f"unknown mode {mode!r}")
        n = len(s)
        if tau is None:
            tau = default_tau(n, b)
        if tau < 1:
            raise InvalidParameter("tau must be >= 1")
        if w is None:
            w = default_width(n, tau, s.universe_size, omega)

        if mode == APPROXIMATE:
            if epsilon is None or not (0.0 < epsilon <= 1.0):
                raise InvalidParameter(
                    f"approximate mode needs epsilon in (0, 1], got {epsilon}")
            params = EStarParams(epsilon=epsilon, tau=tau, w=w, universe=s.universe_size)
        else:
            params = EStarParams(epsilon=1.0, tau=tau, w=w, universe=s.universe_size)

        heavy, _ = classify_colors(s, tau)
        if mode == APPROXIMATE:
            table = construct_estar(s, heavy, params)
        else:
            values, wa, wb = _kernels.heavy_table_scan(
                s.color_ptr, s.color_pos, heavy - 1)
            table = EStarMatrix(values, wa, wb, heavy)

        nns = [NnsIndex.from_sorted(s.points_of(c))
               for c in range(1, s.num_colors + 1)]
        return CdoOracle(s, mode, params, heavy, table, nns, omega)

    def _check_color(self, c: int):
        if not (1 <= c <= self.point_set.num_colors):
            raise UnknownColor(f"color {c} not in [1, {self.point_set.num_colors}]")

    def query(self, c: int, c2: int) -> DistanceAnswer:
        answer, _ = self.query_instrumented(c, c2)
        return answer

    def query_instrumented(self, c: int, c2: int) -> tuple[DistanceAnswer, QueryStats]:
        self._check_color(c)
        self._check_color(c2)
        stats = QueryStats()
        if c == c2:
            p = int(self.point_set.points_of(c)[0])
            return DistanceAnswer(0, p, p, exact=True), stats

        if c in self.heavy_set and c2 in self.heavy_set:
            lo, hi = min(c, c2), max(c, c2)
            value, pa, pb = self.estar.lookup(lo, hi)
            stats.table_lookups = 1
            answer = DistanceAnswer(value, pa, pb, exact=(self.mode == EXACT))
            return (answer if c == lo else answer.swapped()), stats

        # Light path: scan the smaller color against the other's index.
        if self.point_set.color_size(c) <= self.point_set.color_size(c2):
            small, large, swapped = c, c2, False
        else:
            small, large, swapped = c2, c, True
        qs = self.point_set.points_of(small)
        pts, dists = self.nns[large - 1].nearest_many(qs)
        stats.nns_calls = int(qs.shape[0])
        k = int(np.argmin(dists))
        answer = DistanceAnswer(int(dists[k]), int(qs[k]), int(pts[k]), exact=True)
        return (answer.swapped() if swapped else answer), stats
