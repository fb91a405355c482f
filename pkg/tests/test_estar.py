import math

import numpy as np
import pytest

from cdok.core import INF, normalize
from cdok.errors import InvalidParameter
from cdok.estar import (EStarParams, build_block_matrix_a, build_block_matrix_b,
                        classify_colors, construct_estar, level_bounds)
from cdok.oracle import exact_all_pairs
from conftest import check_level_lemmas as _check_lemmas
from conftest import far_cluster_set, random_point_set


def heavy_truth(s, heavy):
    full = exact_all_pairs(s)
    idx = heavy - 1
    return full[np.ix_(idx, idx)]


def check_level_lemmas(s, heavy, w, eps):
    return _check_lemmas(s, heavy, w, eps, exact_all_pairs)


class TestClassify:
    def test_threshold(self):
        s = normalize([(i, 1) for i in range(1, 6)] + [(10, 2)]
                      + [(i, 3) for i in range(20, 25)])
        heavy, light = classify_colors(s, 5)
        assert heavy.tolist() == [1, 3]
        assert light.tolist() == [2]

    def test_tau_one_all_heavy(self):
        s = normalize([(1, 1), (5, 2)])
        heavy, light = classify_colors(s, 1)
        assert heavy.tolist() == [1, 2]
        assert light.size == 0

    def test_tau_above_n_none_heavy(self):
        s = normalize([(1, 1), (5, 2)])
        heavy, _ = classify_colors(s, 3)
        assert heavy.size == 0


class TestBlockMatrices:
    def test_a_membership(self):
        s = normalize([(1, 1), (5, 2)])
        a, anno = build_block_matrix_a(s, np.array([1, 2]), 4)
        bits = a.to_bool()
        assert bits.shape == (2, 2)
        assert bits[0].tolist() == [True, False]
        assert bits[1].tolist() == [False, True]
        assert anno[0, 0] == 1 and anno[1, 1] == 5

    def test_block_boundary_closed(self):
        s = normalize([(4, 1), (8, 1)])  # positions at exact multiples of W
        a, _ = build_block_matrix_a(s, np.array([1]), 4)
        assert a.to_bool()[0].tolist() == [True, True]

    def test_every_heavy_row_nonempty(self, rng):
        for _ in range(10):
            s = random_point_set(rng)
            heavy, _ = classify_colors(s, 2)
            if heavy.size == 0:
                continue
            a, _ = build_block_matrix_a(s, heavy, int(rng.integers(1, 50)))
            assert np.all(a.to_bool().any(axis=1))

    def test_b_contains_a(self, rng):
        s = random_point_set(rng)
        heavy, _ = classify_colors(s, 2)
        if heavy.size == 0:
            pytest.skip("no heavy colors drawn")
        w = 7
        eps = 0.5
        ell0, _ = level_bounds(eps, s.universe_size)
        a, _ = build_block_matrix_a(s, heavy, w)
        b, _ = build_block_matrix_b(s, heavy, w, ell0, eps)
        assert not np.any(a.to_bool() & ~b.to_bool().T)

    def test_b_monotone_in_level(self, rng):
        s = random_point_set(rng)
        heavy, _ = classify_colors(s, 2)
        if heavy.size == 0:
            pytest.skip("no heavy colors drawn")
        eps = 1.0 / 3.0
        ell0, ell_max = level_bounds(eps, s.universe_size)
        prev = None
        for ell in range(ell0, min(ell0 + 6, ell_max) + 1):
            b, _ = build_block_matrix_b(s, heavy, 3, ell, eps)
            cur = b.to_bool()
            if prev is not None:
                assert not np.any(prev & ~cur)
            prev = cur

    def test_b_window_reach(self):
        s = normalize([(1, 1), (9, 1)])
        eps = 1.0
        # window [1, 4 + floor((1+eps)^ell * 4)] must reach position 9 once
        # (1+eps)^ell >= 2
        b, anno = build_block_matrix_b(s, np.array([1]), 4, 1, eps)
        assert b.to_bool()[0, 0]
        assert anno[0, 0] == 1


class TestLevelLemmas:
    def test_far_clusters_exercise_matrix_path(self, rng):
        far_pairs = 0
        for _ in range(12):
            s = far_cluster_set(rng)
            heavy, _ = classify_colors(s, 1)
            for eps in (1.0 / 3.0, 1.0 / 6.0):
                for w in (1, 2, 5):
                    far_pairs += check_level_lemmas(s, heavy, w, eps)
        assert far_pairs > 50, "corpus failed to exercise far pairs"

    def test_generic_instances(self, rng):
        for _ in range(8):
            s = random_point_set(rng, n=int(rng.integers(20, 300)))
            heavy, _ = classify_colors(s, 3)
            if heavy.size >= 2:
                check_level_lemmas(s, heavy, 2, 1.0 / 3.0)


class TestConstruct:
    def test_tiny_exact_pair(self):
        s = normalize([(1, 1), (3, 2)])
        params = EStarParams(epsilon=1.0, tau=1, w=10, universe=s.universe_size)
        est = construct_estar(s, np.array([1, 2]), params)
        assert est.lookup(1, 2) == (2, 1, 3)

    def test_shared_position_zero(self):
        s = normalize([(7, 1), (7, 2), (1, 1), (20, 2)])
        params = EStarParams(epsilon=0.5, tau=1, w=3, universe=s.universe_size)
        est = construct_estar(s, np.array([1, 2]), params)
        assert est.lookup(1, 2)[0] == 0

    def test_params_validation(self):
        with pytest.raises(InvalidParameter):
            EStarParams(epsilon=0.0, tau=1, w=1, universe=10)
        with pytest.raises(InvalidParameter):
            EStarParams(epsilon=2.0, tau=1, w=1, universe=10)

    def test_level_bound_formulas(self):
        for eps in (1.0, 0.5, 0.1, 1.0 / 3.0):
            for universe in (1, 2, 10, 1000, 10**6):
                ell0, ell_max = level_bounds(eps, universe)
                assert ell0 == math.floor(math.log(1 / eps) / math.log(1 + eps)) + 1
                if universe > 1:
                    assert ell_max == math.ceil(math.log(universe) / math.log(1 + eps))
                assert (1 + eps) ** ell0 > 1 / eps
                assert (1 + eps) ** ell_max >= universe or universe == 1

    def test_degenerate_levels_brute_covers(self):
        # universe 2 with eps=1 puts ell0 above ell_max
        s = normalize([(1, 1), (2, 2)])
        params = EStarParams(epsilon=1.0, tau=1, w=1, universe=s.universe_size)
        eps_i = params.eps_internal
        ell0, ell_max = level_bounds(eps_i, s.universe_size)
        assert ell0 > ell_max
        est = construct_estar(s, np.array([1, 2]), params)
        assert est.lookup(1, 2)[0] == 1

    @pytest.mark.parametrize("eps", [1.0, 0.5, 0.1])
    def test_ratio_contract_random(self, rng, eps):
        for _ in range(20):
            s = random_point_set(rng, n=int(rng.integers(20, 2000)))
            tau = max(1, int(math.isqrt(len(s))) // 2)
            heavy, _ = classify_colors(s, tau)
            if heavy.size < 2:
                continue
            w = int(rng.integers(1, 30))
            params = EStarParams(epsilon=eps, tau=tau, w=w, universe=s.universe_size)
            est = construct_estar(s, heavy, params)
            truth = heavy_truth(s, heavy)
            h = heavy.shape[0]
            for i in range(h):
                for j in range(i + 1, h):
                    d = int(truth[i, j])
                    v = int(est.values[i, j])
                    if d == 0:
                        assert v == 0
                    else:
                        assert d <= v <= (1 + eps) * d
                    assert est.values[j, i] == v

    def test_far_cluster_witness_soundness(self, rng):
        for _ in range(10):
            s = far_cluster_set(rng)
            heavy, _ = classify_colors(s, 1)
            params = EStarParams(epsilon=1.0, tau=1, w=2, universe=s.universe_size)
            est = construct_estar(s, heavy, params)
            h = heavy.shape[0]
            for i in range(h):
                for j in range(h):
                    if i == j:
                        continue
                    v = int(est.values[i, j])
                    pa, pb = int(est.wa[i, j]), int(est.wb[i, j])
                    assert pa in s.points_of(int(heavy[i]))
                    assert pb in s.points_of(int(heavy[j]))
                    assert abs(pa - pb) <= v
