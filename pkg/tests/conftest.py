"""Shared random-instance generators for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from cdok.core import ColorHierarchy, normalize


def random_point_set(rng, n=None, num_colors=None, universe=None, clustered=False):
    n = n if n is not None else int(rng.integers(10, 600))
    num_colors = num_colors if num_colors is not None else int(rng.integers(2, min(40, n) + 1))
    num_colors = max(1, min(num_colors, n))
    universe = universe if universe is not None else int(rng.integers(n, 6 * n + 2))
    if clustered:
        k = max(2, int(np.sqrt(num_colors)))
        centers = rng.integers(1, universe + 1, size=k)
        pos = centers[rng.integers(0, k, size=n)] + rng.integers(-20, 21, size=n)
        pos = np.clip(pos, 1, universe)
    else:
        pos = rng.integers(1, universe + 1, size=n)
    col = rng.integers(1, num_colors + 1, size=n)
    col[:num_colors] = np.arange(1, num_colors + 1)
    return normalize(zip(pos.tolist(), col.tolist()))


def far_cluster_set(rng, num_colors=None, universe=None):
    """Colors in tight clusters spread over a wide universe; forces the
    level-ladder path of the heavy table when W is small."""
    num_colors = num_colors if num_colors is not None else int(rng.integers(2, 8))
    universe = universe if universe is not None else int(rng.integers(10_000, 300_000))
    pts = []
    for c in range(1, num_colors + 1):
        for _ in range(int(rng.integers(1, 4))):
            center = int(rng.integers(1, universe))
            for _ in range(int(rng.integers(1, 10))):
                pts.append((max(1, center + int(rng.integers(-25, 26))), c))
    return normalize(pts)


def random_hierarchy(rng, n=None, num_colors=None) -> ColorHierarchy:
    """Random laminar hierarchy; every color owns at least one point, so no
    two colors share a point set."""
    n = n if n is not None else int(rng.integers(8, 400))
    num_colors = num_colors if num_colors is not None else int(rng.integers(1, max(2, min(30, n // 2)) + 1))
    num_colors = min(num_colors, n)
    parent = [0] * num_colors
    for c in range(2, num_colors + 1):
        parent[c - 1] = int(rng.integers(0, c))
    owners = list(range(1, num_colors + 1))
    owners += rng.integers(1, num_colors + 1, size=n - num_colors).tolist()
    universe = int(rng.integers(n, 4 * n + 2))
    positions = rng.permutation(universe)[:n] + 1
    points = list(zip(positions.tolist(), owners))
    return ColorHierarchy.from_leaf_data(points, parent)


def hierarchy_truth(h: ColorHierarchy, c: int, c2: int) -> int:
    """Exact color distance in a hierarchy by pairwise scan over intervals."""
    lo1, hi1 = h.interval(c)
    lo2, hi2 = h.interval(c2)
    if (lo1 <= lo2 and hi2 <= hi1) or (lo2 <= lo1 and hi1 <= hi2):
        return 0
    a = np.sort(h.points_of(c))
    b = np.sort(h.points_of(c2))
    if len(a) > len(b):
        a, b = b, a
    ks = np.searchsorted(b, a)
    lo = np.clip(ks - 1, 0, len(b) - 1)
    hi = np.clip(ks, 0, len(b) - 1)
    d = np.minimum(np.where(ks > 0, a - b[lo], np.iinfo(np.int64).max),
                   np.where(ks < len(b), b[hi] - a, np.iinfo(np.int64).max))
    return int(d.min())


def check_level_lemmas(s, heavy, w, eps, exact_all_pairs):
    """Assert the level-matrix lemmas against exact brute-force distances.
    Returns the number of far pairs exercised."""
    from cdok.estar import iter_level_matrices

    h = heavy.shape[0]
    if h < 2:
        return 0
    idx = heavy - 1
    delta = exact_all_pairs(s)[np.ix_(idx, idx)].astype(np.float64)
    off = ~np.eye(h, dtype=bool)
    upper = np.triu(np.ones((h, h), dtype=bool), k=1)

    levels = list(iter_level_matrices(s, heavy, w, eps))
    assert levels, "no levels built"
    transitions = np.zeros((h, h), dtype=np.int64)
    prev = None
    for ell, e in levels:
        if prev is not None:
            assert not np.any(prev & ~e), "monotonicity violated"
            fire = (~prev & ~prev.T) & (e | e.T)
            transitions += np.triu(fire, k=1)
        both_zero = ~e & ~e.T & off
        assert np.all(delta[both_zero] > (1.0 + eps) ** ell * w), "lower bound violated"
        assert np.all(delta[e & off] < (1.0 + eps) ** (ell + 1) * w), "upper bound violated"
        prev = e

    last = levels[-1][1]
    assert np.all((last | last.T)[off]), "coverage at ell_max violated"

    far = (delta > (1.0 + 2.0 * eps) / eps * w) & upper
    first = levels[0][1]
    assert not np.any((first | first.T) & far), "base case violated"
    assert np.all(transitions[far] == 1), "transition level not unique"
    return int(far.sum())


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)
