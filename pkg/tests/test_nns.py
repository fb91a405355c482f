import numpy as np
import pytest
from hypothesis import given, strategies as st

from cdok.errors import InvalidInput
from cdok.nns import NnsIndex


def linear_scan(points, q):
    best = min(points, key=lambda p: (abs(q - p), p))
    return best, abs(q - best)


class TestBuild:
    def test_sorts(self):
        assert NnsIndex.build({5, 1, 9}).sorted_positions.tolist() == [1, 5, 9]

    def test_singleton(self):
        assert NnsIndex.build({3}).sorted_positions.tolist() == [3]

    def test_dedup(self):
        assert NnsIndex.build([2, 2, 7]).sorted_positions.tolist() == [2, 7]

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            NnsIndex.build([])


class TestNearest:
    def test_tie_breaks_low(self):
        assert NnsIndex.build([1, 5, 9]).nearest(7) == (5, 2)

    def test_exact_hit(self):
        assert NnsIndex.build([1, 5, 9]).nearest(5) == (5, 0)

    def test_far_query(self):
        idx = NnsIndex.build([1, 5, 9])
        assert idx.nearest(100) == linear_scan([1, 5, 9], 100) == (9, 91)

    @given(st.sets(st.integers(0, 10_000), min_size=1, max_size=300),
           st.integers(-50, 10_100))
    def test_matches_linear_scan(self, points, q):
        idx = NnsIndex.build(points)
        got_p, got_d = idx.nearest(q)
        want_p, want_d = linear_scan(sorted(points), q)
        assert got_d == want_d
        assert got_p == want_p  # tie rule: smaller point

    def test_nearest_many_agrees(self, rng):
        for _ in range(20):
            pts = np.unique(rng.integers(0, 5000, size=rng.integers(1, 200)))
            idx = NnsIndex.from_sorted(pts)
            qs = rng.integers(0, 5200, size=64)
            got_p, got_d = idx.nearest_many(qs)
            for k, q in enumerate(qs):
                p1, d1 = idx.nearest(int(q))
                assert got_d[k] == d1
                assert got_p[k] == p1
