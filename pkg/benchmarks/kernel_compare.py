#!/usr/bin/env python3
"""Time every hot kernel on both backends (numba JIT vs pure numpy).

Run from the repo root:

    python3 benchmarks/kernel_compare.py

The same functions run in production depending on CDOK_DISABLE_NUMBA; this
script imports both variants directly so one process can compare them.
"""

from __future__ import annotations

import time

import numpy as np

from cdok import _kernels
from cdok.boolmat import BitMatrix
from cdok.rnns import RnnsIndex


def timeit(fn, *args, repeat=5, warmup=1):
    for _ in range(warmup):
        fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def fmt(seconds: float) -> str:
    if seconds < 1e-3:
        return f"{seconds * 1e6:8.1f} us"
    if seconds < 1.0:
        return f"{seconds * 1e3:8.2f} ms"
    return f"{seconds:8.3f} s "


def compare(name, numba_fn, numpy_fn, *args, repeat=5):
    t_np = timeit(numpy_fn, *args, repeat=repeat)
    if numba_fn is None:
        print(f"{name:28s} numpy {fmt(t_np)}   (numba unavailable)")
        return
    t_nb = timeit(numba_fn, *args, repeat=repeat)
    print(f"{name:28s} numba {fmt(t_nb)}   numpy {fmt(t_np)}   speedup {t_np / t_nb:6.1f}x")


def main():
    rng = np.random.default_rng(7)
    print(f"active backend: {_kernels.ACTIVE_BACKEND}\n")

    # packed Boolean product: 512 x 4096 by 4096 x 512
    a = BitMatrix.from_bool(rng.random((512, 4096)) < 0.05)
    bt = BitMatrix.from_bool(rng.random((512, 4096)) < 0.05)
    compare("bool_product", _kernels.bool_product_numba,
            _kernels.bool_product_numpy, a.data, bt.data)
    compare("bool_product_witness", _kernels.bool_product_witness_numba,
            _kernels.bool_product_witness_numpy, a.data, bt.data)

    # brute-force close-pair scan: 200k points, window ~1000
    n = 200_000
    pos = np.sort(rng.integers(1, 2 * n, size=n)).astype(np.int64)
    hmap = rng.integers(-1, 40, size=n).astype(np.int64)
    h = 41

    def run_scan(fn):
        values = np.full((h, h), _kernels.INF, dtype=np.int64)
        wa = np.full((h, h), -1, dtype=np.int64)
        wb = np.full((h, h), -1, dtype=np.int64)
        fn(pos, hmap, np.int64(1000), values, wa, wb)

    compare("close_pair_scan",
            (lambda *_: run_scan(_kernels.close_pair_scan_numba)) if _kernels.HAVE_NUMBA else None,
            lambda *_: run_scan(_kernels.close_pair_scan_numpy), repeat=3)

    # exact all-pairs sweep: 200k points, 64 colors
    col = rng.integers(0, 64, size=n).astype(np.int64)
    compare("color_pair_sweep", _kernels.color_pair_sweep_numba,
            _kernels.color_pair_sweep_numpy, pos, col, 64, repeat=3)

    # heavy table: 48 colors x 4k points each
    cp = np.arange(49, dtype=np.int64) * 4000
    cpos = np.sort(rng.integers(1, 10**7, size=(48, 4000)), axis=1).reshape(-1).astype(np.int64)
    heavy = np.arange(48, dtype=np.int64)
    compare("heavy_table_scan", _kernels.heavy_table_scan_numba,
            _kernels.heavy_table_scan_numpy, cp, cpos, heavy, repeat=3)

    # merge-tree range queries: 1M queries on a 100k array
    idx = RnnsIndex.build(rng.integers(1, 10**6, size=100_000))
    qs = rng.integers(1, 10**6, size=2000)

    def run_queries(fn):
        for q in qs:
            fn(idx.levels, idx.leaf_depth, idx.size, 100, 90_000, int(q))

    compare("merge_tree_query x2000",
            (lambda *_: run_queries(_kernels.merge_tree_query_numba)) if _kernels.HAVE_NUMBA else None,
            lambda *_: run_queries(_kernels.merge_tree_query_numpy), repeat=3)

    # Kasai LCP on a 500k repetitive text
    from cdok.snippets import build_suffix_array
    text = rng.integers(1, 5, size=500_000).astype(np.int64)
    sa = build_suffix_array(text)
    compare("kasai_lcp", _kernels.kasai_lcp_numba, _kernels.kasai_lcp_numpy,
            text, sa, repeat=3)


if __name__ == "__main__":
    main()
