import numpy as np
import pytest

from cdok.errors import InvalidInput, InvalidRange
from cdok.rmq2d import Rmq2dIndex


def scan_min(m, r1, c1, r2, c2):
    sub = m[r1 - 1:r2, c1 - 1:c2]
    k = int(np.argmin(sub))  # argmin is first occurrence = lex smallest
    dr, dc = divmod(k, sub.shape[1])
    return int(sub[dr, dc]), r1 + dr, c1 + dc


class TestBuild:
    def test_singleton(self):
        idx = Rmq2dIndex.build([[7]])
        assert idx.rect_min(1, 1, 1, 1)[:3] == (7, 1, 1)

    def test_duplicate_minima(self):
        idx = Rmq2dIndex.build([[3, 1], [4, 1]])
        assert idx.rect_min(1, 1, 2, 2)[:3] == (1, 1, 2)

    def test_column_matrix(self):
        idx = Rmq2dIndex.build([[5], [2], [9]])
        assert idx.rect_min(1, 1, 3, 1)[:3] == (2, 2, 1)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            Rmq2dIndex.build(np.empty((0, 3)))


class TestRectMin:
    def test_full_rect(self):
        idx = Rmq2dIndex.build([[3, 1], [4, 2]])
        assert idx.rect_min(1, 1, 2, 2)[:3] == (1, 1, 2)

    def test_single_cell(self):
        idx = Rmq2dIndex.build([[3, 1], [4, 2]])
        assert idx.rect_min(2, 1, 2, 1)[:3] == (4, 2, 1)

    def test_tie_lexicographic(self):
        idx = Rmq2dIndex.build([[5, 5], [5, 5]])
        assert idx.rect_min(1, 1, 2, 2)[:3] == (5, 1, 1)

    def test_inverted_rejected(self):
        idx = Rmq2dIndex.build([[3, 1], [4, 2]])
        for rect in [(2, 1, 1, 1), (1, 2, 1, 1), (0, 1, 1, 1), (1, 1, 3, 1)]:
            with pytest.raises(InvalidRange):
                idx.rect_min(*rect)

    def test_payload_carried(self):
        m = [[9, 2], [5, 7]]
        payload = ["a", "b", "c", "d"]
        idx = Rmq2dIndex.build(m, payload)
        assert idx.rect_min(1, 1, 2, 2) == (2, 1, 2, "b")

    @pytest.mark.parametrize("shape", [(1, 1), (1, 8), (5, 1), (4, 6), (13, 9), (32, 32)])
    def test_exhaustive_against_scan(self, shape, rng):
        r, c = shape
        m = rng.integers(0, 50, size=(r, c)).astype(np.int64)
        idx = Rmq2dIndex.build(m)
        for r1 in range(1, r + 1):
            for r2 in range(r1, r + 1):
                for c1 in range(1, c + 1):
                    for c2 in range(c1, c + 1):
                        assert idx.rect_min(r1, c1, r2, c2)[:3] == scan_min(m, r1, c1, r2, c2)
