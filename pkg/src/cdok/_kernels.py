"""Hot inner-loop kernels with two interchangeable backends.

Every kernel here exists twice: a numba ``@njit`` build and a pure
numpy/python build with identical semantics.  The active backend is chosen
at import time; set ``CDOK_DISABLE_NUMBA=1`` to force the fallback path.
``CDOK_THREADS`` caps the numba thread pool when the JIT backend is active.

All kernels are deterministic and single-threaded so results never depend
on the backend or on parallelism.
"""

from __future__ import annotations

import os

import numpy as np

INF = np.iinfo(np.int64).max

_DISABLE = os.environ.get("CDOK_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if _DISABLE:
        raise ImportError("numba disabled by CDOK_DISABLE_NUMBA")
    import numba
    from numba import njit

    _threads = os.environ.get("CDOK_THREADS", "").strip()
    if _threads.isdigit() and int(_threads) > 0:
        numba.set_num_threads(min(int(_threads), numba.config.NUMBA_NUM_THREADS))
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# packed Boolean matrix product


def bool_product_numpy(a_words: np.ndarray, bt_words: np.ndarray) -> np.ndarray:
    """Boolean product of packed rows: out[i, j] = any(a[i] & bt[j])."""
    ra = a_words.shape[0]
    cb = bt_words.shape[0]
    out = np.zeros((ra, cb), dtype=np.uint8)
    for i in range(ra):
        out[i] = np.bitwise_and(a_words[i], bt_words).any(axis=1)
    return out


def bool_product_witness_numpy(a_words: np.ndarray, bt_words: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Packed product plus the smallest inner index k proving each 1-entry."""
    ra = a_words.shape[0]
    cb = bt_words.shape[0]
    out = np.zeros((ra, cb), dtype=np.uint8)
    wit = np.full((ra, cb), -1, dtype=np.int64)
    for i in range(ra):
        common = np.bitwise_and(a_words[i], bt_words)
        nz = common != 0
        hit = nz.any(axis=1)
        out[i] = hit
        for j in np.flatnonzero(hit):
            w = int(np.argmax(nz[j]))
            x = int(common[j, w])
            wit[i, j] = w * 64 + ((x & -x).bit_length() - 1)
    return out, wit


def first_common_bit_numpy(row_a: np.ndarray, row_b: np.ndarray) -> int:
    """Index of the lowest set bit of ``row_a & row_b``, or -1."""
    common = row_a & row_b
    nz = np.flatnonzero(common)
    if nz.size == 0:
        return -1
    w = int(nz[0])
    x = int(common[w])
    return w * 64 + ((x & -x).bit_length() - 1)


# ---------------------------------------------------------------------------
# brute-force close-pair window scan (heavy-pair exact distances)


def close_pair_scan_numpy(pos, hmap, radius, values, wa, wb):
    n = pos.shape[0]
    ends = np.searchsorted(pos, pos + radius, side="right")
    for u in range(n):
        cu = hmap[u]
        if cu < 0:
            continue
        for v in range(u + 1, ends[u]):
            cv = hmap[v]
            if cv < 0 or cv == cu:
                continue
            d = pos[v] - pos[u]
            if d < values[cu, cv]:
                values[cu, cv] = d
                values[cv, cu] = d
                wa[cu, cv] = pos[u]
                wb[cu, cv] = pos[v]
                wa[cv, cu] = pos[v]
                wb[cv, cu] = pos[u]


# ---------------------------------------------------------------------------
# exact all-pairs color sweep (last occurrence per color)


def color_pair_sweep_numpy(pos, col, num_colors):
    values = np.full((num_colors, num_colors), INF, dtype=np.int64)
    wa = np.full((num_colors, num_colors), -1, dtype=np.int64)
    wb = np.full((num_colors, num_colors), -1, dtype=np.int64)
    np.fill_diagonal(values, 0)
    last = np.full(num_colors, -1, dtype=np.int64)
    n = pos.shape[0]
    for u in range(n):
        c = col[u]
        p = pos[u]
        seen = np.flatnonzero(last >= 0)
        for c2 in seen:
            if c2 == c:
                continue
            d = p - last[c2]
            if d < values[c, c2]:
                values[c, c2] = d
                values[c2, c] = d
                wa[c, c2] = p
                wb[c, c2] = last[c2]
                wa[c2, c] = last[c2]
                wb[c2, c] = p
        last[c] = p
    return values, wa, wb


# ---------------------------------------------------------------------------
# exact heavy table via per-pair nearest-neighbor scans


def _nearest_idx(arr, lo, hi, q):
    """Nearest value to q in sorted arr[lo:hi]; ties to the smaller value."""
    k = int(np.searchsorted(arr[lo:hi], q)) + lo
    best = -1
    bestd = INF
    if k > lo:
        best = arr[k - 1]
        bestd = q - best
    if k < hi and arr[k] - q < bestd:
        best = arr[k]
        bestd = arr[k] - q
    return best, bestd


def heavy_table_scan_numpy(color_ptr, color_pos, heavy):
    h = heavy.shape[0]
    values = np.full((h, h), INF, dtype=np.int64)
    wa = np.full((h, h), -1, dtype=np.int64)
    wb = np.full((h, h), -1, dtype=np.int64)
    np.fill_diagonal(values, 0)
    for ii in range(h):
        ci = heavy[ii]
        for jj in range(ii + 1, h):
            cj = heavy[jj]
            ni = color_ptr[ci + 1] - color_ptr[ci]
            nj = color_ptr[cj + 1] - color_ptr[cj]
            small, large = (ci, cj) if ni <= nj else (cj, ci)
            lo, hi = color_ptr[large], color_ptr[large + 1]
            bestd = INF
            bp = bq = -1
            for p in color_pos[color_ptr[small]:color_ptr[small + 1]]:
                q, d = _nearest_idx(color_pos, lo, hi, p)
                if d < bestd:
                    bestd, bp, bq = d, p, q
            if small == ci:
                pi, pj = bp, bq
            else:
                pi, pj = bq, bp
            values[ii, jj] = bestd
            values[jj, ii] = bestd
            wa[ii, jj] = pi
            wb[ii, jj] = pj
            wa[jj, ii] = pj
            wb[jj, ii] = pi
    return values, wa, wb


# ---------------------------------------------------------------------------
# merge-tree range nearest neighbor query


def merge_tree_query_numpy(levels, leaf_depth, size, i0, j0, q):
    """Nearest value to q among base[i0..j0] via the per-depth sorted tree."""
    best = INF
    bestd = INF
    l = size + i0
    r = size + j0 + 1
    d = leaf_depth
    while l < r:
        if l & 1:
            best, bestd = _visit_numpy(levels, d, l, size, q, best, bestd)
            l += 1
        if r & 1:
            r -= 1
            best, bestd = _visit_numpy(levels, d, r, size, q, best, bestd)
        l >>= 1
        r >>= 1
        d -= 1
    return best, bestd


def _visit_numpy(levels, d, v, size, q, best, bestd):
    seg = size >> d
    start = (v - (1 << d)) * seg
    row = levels[d]
    k = int(np.searchsorted(row[start:start + seg], q)) + start
    if k > start:
        cand = row[k - 1]
        dd = q - cand
        if dd < bestd or (dd == bestd and cand < best):
            best, bestd = cand, dd
    if k < start + seg:
        cand = row[k]
        if cand != INF:
            dd = cand - q
            if dd < bestd or (dd == bestd and cand < best):
                best, bestd = cand, dd
    return best, bestd


# ---------------------------------------------------------------------------
# Kasai LCP construction


def kasai_lcp_numpy(text, sa):
    n = sa.shape[0]
    rank = np.empty(n, dtype=np.int64)
    rank[sa] = np.arange(n, dtype=np.int64)
    lcp = np.zeros(n, dtype=np.int64)
    k = 0
    for i in range(n):
        r = rank[i]
        if r == 0:
            k = 0
            continue
        j = sa[r - 1]
        while i + k < n and j + k < n and text[i + k] == text[j + k]:
            k += 1
        lcp[r] = k
        if k > 0:
            k -= 1
    return lcp


# ---------------------------------------------------------------------------
# numba builds

if HAVE_NUMBA:

    @njit(cache=True)
    def bool_product_numba(a_words, bt_words):
        ra, nw = a_words.shape
        cb = bt_words.shape[0]
        out = np.zeros((ra, cb), dtype=np.uint8)
        for i in range(ra):
            for j in range(cb):
                for w in range(nw):
                    if a_words[i, w] & bt_words[j, w]:
                        out[i, j] = 1
                        break
        return out

    @njit(cache=True)
    def bool_product_witness_numba(a_words, bt_words):
        ra, nw = a_words.shape
        cb = bt_words.shape[0]
        out = np.zeros((ra, cb), dtype=np.uint8)
        wit = np.full((ra, cb), -1, dtype=np.int64)
        for i in range(ra):
            for j in range(cb):
                for w in range(nw):
                    x = a_words[i, w] & bt_words[j, w]
                    if x:
                        out[i, j] = 1
                        k = 0
                        while (x & np.uint64(1)) == np.uint64(0):
                            x >>= np.uint64(1)
                            k += 1
                        wit[i, j] = w * 64 + k
                        break
        return out, wit

    @njit(cache=True)
    def first_common_bit_numba(row_a, row_b):
        nw = row_a.shape[0]
        for w in range(nw):
            x = row_a[w] & row_b[w]
            if x:
                k = 0
                while (x & np.uint64(1)) == np.uint64(0):
                    x >>= np.uint64(1)
                    k += 1
                return w * 64 + k
        return -1

    @njit(cache=True)
    def close_pair_scan_numba(pos, hmap, radius, values, wa, wb):
        n = pos.shape[0]
        for u in range(n):
            cu = hmap[u]
            if cu < 0:
                continue
            limit = pos[u] + radius
            for v in range(u + 1, n):
                if pos[v] > limit:
                    break
                cv = hmap[v]
                if cv < 0 or cv == cu:
                    continue
                d = pos[v] - pos[u]
                if d < values[cu, cv]:
                    values[cu, cv] = d
                    values[cv, cu] = d
                    wa[cu, cv] = pos[u]
                    wb[cu, cv] = pos[v]
                    wa[cv, cu] = pos[v]
                    wb[cv, cu] = pos[u]

    @njit(cache=True)
    def color_pair_sweep_numba(pos, col, num_colors):
        values = np.full((num_colors, num_colors), INF, dtype=np.int64)
        wa = np.full((num_colors, num_colors), -1, dtype=np.int64)
        wb = np.full((num_colors, num_colors), -1, dtype=np.int64)
        for c in range(num_colors):
            values[c, c] = 0
        last = np.full(num_colors, -1, dtype=np.int64)
        n = pos.shape[0]
        for u in range(n):
            c = col[u]
            p = pos[u]
            for c2 in range(num_colors):
                if c2 == c or last[c2] < 0:
                    continue
                d = p - last[c2]
                if d < values[c, c2]:
                    values[c, c2] = d
                    values[c2, c] = d
                    wa[c, c2] = p
                    wb[c, c2] = last[c2]
                    wa[c2, c] = last[c2]
                    wb[c2, c] = p
            last[c] = p
        return values, wa, wb

    @njit(cache=True)
    def _nearest_idx_numba(arr, lo, hi, q):
        a = lo
        b = hi
        while a < b:
            m = (a + b) // 2
            if arr[m] < q:
                a = m + 1
            else:
                b = m
        best = np.int64(-1)
        bestd = INF
        if a > lo:
            best = arr[a - 1]
            bestd = q - best
        if a < hi and arr[a] - q < bestd:
            best = arr[a]
            bestd = arr[a] - q
        return best, bestd

    @njit(cache=True)
    def heavy_table_scan_numba(color_ptr, color_pos, heavy):
        h = heavy.shape[0]
        values = np.full((h, h), INF, dtype=np.int64)
        wa = np.full((h, h), -1, dtype=np.int64)
        wb = np.full((h, h), -1, dtype=np.int64)
        for i in range(h):
            values[i, i] = 0
        for ii in range(h):
            ci = heavy[ii]
            for jj in range(ii + 1, h):
                cj = heavy[jj]
                ni = color_ptr[ci + 1] - color_ptr[ci]
                nj = color_ptr[cj + 1] - color_ptr[cj]
                if ni <= nj:
                    small, large = ci, cj
                else:
                    small, large = cj, ci
                lo = color_ptr[large]
                hi = color_ptr[large + 1]
                bestd = INF
                bp = np.int64(-1)
                bq = np.int64(-1)
                for t in range(color_ptr[small], color_ptr[small + 1]):
                    p = color_pos[t]
                    q, d = _nearest_idx_numba(color_pos, lo, hi, p)
                    if d < bestd:
                        bestd = d
                        bp = p
                        bq = q
                if small == ci:
                    pi, pj = bp, bq
                else:
                    pi, pj = bq, bp
                values[ii, jj] = bestd
                values[jj, ii] = bestd
                wa[ii, jj] = pi
                wb[ii, jj] = pj
                wa[jj, ii] = pj
                wb[jj, ii] = pi
        return values, wa, wb

    @njit(cache=True)
    def _visit_numba(levels, d, v, size, q, best, bestd):
        seg = size >> d
        start = (v - (1 << d)) * seg
        a = start
        b = start + seg
        while a < b:
            m = (a + b) // 2
            if levels[d, m] < q:
                a = m + 1
            else:
                b = m
        if a > start:
            cand = levels[d, a - 1]
            dd = q - cand
            if dd < bestd or (dd == bestd and cand < best):
                best = cand
                bestd = dd
        if a < start + seg:
            cand = levels[d, a]
            if cand != INF:
                dd = cand - q
                if dd < bestd or (dd == bestd and cand < best):
                    best = cand
                    bestd = dd
        return best, bestd

    @njit(cache=True)
    def merge_tree_query_numba(levels, leaf_depth, size, i0, j0, q):
        best = INF
        bestd = INF
        l = size + i0
        r = size + j0 + 1
        d = leaf_depth
        while l < r:
            if l & 1:
                best, bestd = _visit_numba(levels, d, l, size, q, best, bestd)
                l += 1
            if r & 1:
                r -= 1
                best, bestd = _visit_numba(levels, d, r, size, q, best, bestd)
            l >>= 1
            r >>= 1
            d -= 1
        return best, bestd

    @njit(cache=True)
    def kasai_lcp_numba(text, sa):
        n = sa.shape[0]
        rank = np.empty(n, dtype=np.int64)
        for i in range(n):
            rank[sa[i]] = i
        lcp = np.zeros(n, dtype=np.int64)
        k = 0
        for i in range(n):
            r = rank[i]
            if r == 0:
                k = 0
                continue
            j = sa[r - 1]
            while i + k < n and j + k < n and text[i + k] == text[j + k]:
                k += 1
            lcp[r] = k
            if k > 0:
                k -= 1
        return lcp

else:
    bool_product_numba = None
    bool_product_witness_numba = None
    first_common_bit_numba = None
    close_pair_scan_numba = None
    color_pair_sweep_numba = None
    heavy_table_scan_numba = None
    merge_tree_query_numba = None
    kasai_lcp_numba = None


if HAVE_NUMBA:
    ACTIVE_BACKEND = "numba"
    bool_product = bool_product_numba
    bool_product_witness = bool_product_witness_numba
    first_common_bit = first_common_bit_numba
    close_pair_scan = close_pair_scan_numba
    color_pair_sweep = color_pair_sweep_numba
    heavy_table_scan = heavy_table_scan_numba
    merge_tree_query = merge_tree_query_numba
    kasai_lcp = kasai_lcp_numba
else:
    ACTIVE_BACKEND = "numpy"
    bool_product = bool_product_numpy
    bool_product_witness = bool_product_witness_numpy
    first_common_bit = first_common_bit_numpy
    close_pair_scan = close_pair_scan_numpy
    color_pair_sweep = color_pair_sweep_numpy
    heavy_table_scan = heavy_table_scan_numpy
    merge_tree_query = merge_tree_query_numpy
    kasai_lcp = kasai_lcp_numpy
