import numpy as np
import pytest

from cdok.acdo import APPROXIMATE, EXACT
from cdok.amcdoch import HierarchyOracle
from cdok.core import ColorHierarchy, normalize
from cdok.errors import InvalidInput, InvalidParameter, UnknownColor
from cdok.oracle import exact_set_distance

from conftest import hierarchy_truth, random_hierarchy


def flat_hierarchy(positions):
    """One root color per point set plus one leaf per point."""
    n = len(positions)
    points = [(p, 2 + i) for i, p in enumerate(positions)]
    parent = [0] + [1] * n
    return ColorHierarchy.from_leaf_data(points, parent)


class TestBuild:
    def test_block_partition_shapes(self, rng):
        h = random_hierarchy(rng, n=9)
        o = HierarchyOracle.build(h, epsilon=1.0, tau=3)
        assert o.num_blocks == 3
        assert o.bhat.shape == (3, 3)

    def test_last_block_padded(self, rng):
        h = random_hierarchy(rng, n=10)
        o = HierarchyOracle.build(h, epsilon=1.0, tau=3)
        assert o.num_blocks == 4
        assert o.bhat.shape == (4, 4)
        assert np.all(np.diag(o.bhat) == 0)

    def test_tau_bounds(self, rng):
        h = random_hierarchy(rng, n=10)
        with pytest.raises(InvalidParameter):
            HierarchyOracle.build(h, epsilon=1.0, tau=0)
        with pytest.raises(InvalidParameter):
            HierarchyOracle.build(h, epsilon=1.0, tau=11)

    def test_invalid_hierarchy_rejected(self):
        bad = ColorHierarchy([0, 0], [1, 2, 1, 2, 2], [1, 2, 3, 4, 5], [1, 2], [3, 5])
        with pytest.raises(InvalidInput):
            HierarchyOracle.build(bad, epsilon=1.0)

    @pytest.mark.parametrize("mode,eps", [(APPROXIMATE, 1.0), (APPROXIMATE, 0.25), (EXACT, None)])
    def test_block_matrix_contract(self, rng, mode, eps):
        for _ in range(8):
            h = random_hierarchy(rng, n=int(rng.integers(12, 300)))
            tau = int(rng.integers(2, max(3, int(np.sqrt(len(h))) + 2)))
            o = HierarchyOracle.build(h, epsilon=eps, tau=tau, mode=mode)
            a = h.preorder_positions
            n = len(h)
            for bi in range(o.num_blocks):
                for bj in range(o.num_blocks):
                    lo_i, hi_i = bi * tau, min((bi + 1) * tau, n)
                    lo_j, hi_j = bj * tau, min((bj + 1) * tau, n)
                    d = exact_set_distance(np.sort(a[lo_i:hi_i]), np.sort(a[lo_j:hi_j]))[0]
                    got = int(o.bhat[bi, bj])
                    if mode == EXACT:
                        assert got == d
                    else:
                        assert d <= got <= (1 + eps) * d if d else got == 0

    def test_partition_identity(self, rng):
        # J, I, K split: prefix/suffix shorter than tau, parts cover the interval
        for _ in range(10):
            h = random_hierarchy(rng, n=int(rng.integers(30, 400)))
            tau = int(rng.integers(2, 12))
            for c in range(1, h.num_colors + 1):
                x, y = h.interval(c)
                if y - x < 2 * tau:
                    continue
                j_hi = ((x - 1 + tau - 1) // tau) * tau
                k_lo = (y // tau) * tau + 1
                j_ranks = list(range(x, j_hi + 1))
                k_ranks = list(range(k_lo, y + 1))
                mid_lo, mid_hi = j_hi + 1, k_lo - 1
                assert len(j_ranks) < tau and len(k_ranks) < tau
                assert j_ranks + list(range(mid_lo, mid_hi + 1)) + k_ranks == list(range(x, y + 1))
                assert (mid_hi - mid_lo + 1) % tau == 0


class TestQuery:
    def test_nested_zero(self, rng):
        h = random_hierarchy(rng, n=60)
        o = HierarchyOracle.build(h, epsilon=1.0)
        for c in range(1, h.num_colors + 1):
            p = int(h.parent[c - 1])
            if p != 0:
                a = o.query(c, p)
                assert a.distance == 0 and a.exact
                assert a.witness_a == a.witness_b

    def test_unknown_color(self, rng):
        h = random_hierarchy(rng, n=20)
        o = HierarchyOracle.build(h, epsilon=1.0)
        with pytest.raises(UnknownColor):
            o.query(1, h.num_colors + 1)

    def test_short_intervals_exact(self, rng):
        for _ in range(15):
            h = random_hierarchy(rng, n=int(rng.integers(10, 200)))
            tau = int(rng.integers(2, 14))
            o = HierarchyOracle.build(h, epsilon=1.0, tau=tau)
            for c in range(1, h.num_colors + 1):
                for c2 in range(1, h.num_colors + 1):
                    x, y = h.interval(c)
                    x2, y2 = h.interval(c2)
                    if y - x < 2 * tau or y2 - x2 < 2 * tau:
                        a = o.query(c, c2)
                        want = hierarchy_truth(h, c, c2)
                        assert a.distance == want
                        if not (a.witness_a == a.witness_b and want == 0):
                            assert abs(a.witness_a - a.witness_b) == want

    @pytest.mark.parametrize("eps", [1.0, 0.5, 0.1])
    def test_contract_on_random_hierarchies(self, rng, eps):
        for _ in range(10):
            h = random_hierarchy(rng, n=int(rng.integers(40, 1200)),
                                 num_colors=int(rng.integers(2, 12)))
            o = HierarchyOracle.build(h, epsilon=eps)
            for c in range(1, h.num_colors + 1):
                for c2 in range(c, h.num_colors + 1):
                    a = o.query(c, c2)
                    d = hierarchy_truth(h, c, c2)
                    assert d <= a.distance
                    if d == 0:
                        assert a.distance == 0
                    else:
                        assert a.distance <= (1 + eps) * d
                    assert abs(a.witness_a - a.witness_b) <= a.distance

    def test_exact_mode_equals_brute(self, rng):
        for _ in range(10):
            h = random_hierarchy(rng, n=int(rng.integers(30, 500)))
            o = HierarchyOracle.build(h, mode=EXACT, tau=int(rng.integers(2, 16)))
            for c in range(1, h.num_colors + 1):
                for c2 in range(1, h.num_colors + 1):
                    assert o.query(c, c2).distance == hierarchy_truth(h, c, c2)

    def test_dummy_points_never_surface(self, rng):
        # dummies sit beyond twice the universe; no witness may exceed it
        for _ in range(10):
            h = random_hierarchy(rng, n=int(rng.integers(9, 80)))
            max_real = int(h.preorder_positions.max())
            for tau in (3, 5, 7):
                if tau > len(h):
                    continue
                o = HierarchyOracle.build(h, epsilon=1.0, tau=tau)
                assert o.bhat_wa.max() <= max_real
                assert o.bhat_wb.max() <= max_real
                for c in range(1, h.num_colors + 1):
                    for c2 in range(1, h.num_colors + 1):
                        a = o.query(c, c2)
                        assert a.witness_a <= max_real and a.witness_b <= max_real

    def test_witnesses_have_queried_colors(self, rng):
        for _ in range(8):
            h = random_hierarchy(rng, n=int(rng.integers(30, 400)))
            o = HierarchyOracle.build(h, epsilon=0.5)
            for c in range(1, h.num_colors + 1):
                for c2 in range(1, h.num_colors + 1):
                    a = o.query(c, c2)
                    if a.witness_a == a.witness_b:
                        continue  # shared point of nested colors
                    assert a.witness_a in set(h.points_of(c).tolist())
                    assert a.witness_b in set(h.points_of(c2).tolist())
