"""Deterministic instance generators and the build/query timing sweep
behind the `bench` subcommand.  Timings are wall-clock nanoseconds; the
generated instances are reproducible from the seed, the timings of course
are not."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .acdo import APPROXIMATE, CdoOracle
from .core import ColoredPointSet, normalize
from .errors import InvalidParameter


def _positions(rng, n: int, universe: int) -> np.ndarray:
    # distinct positions when the universe allows, so n survives the
    # per-color duplicate collapse
    if universe >= n:
        return rng.permutation(universe)[:n] + 1
    return rng.integers(1, universe + 1, size=n)


def gen_uniform(n: int, num_colors: int, universe: int, seed: int) -> ColoredPointSet:
    rng = np.random.default_rng(seed)
    pos = _positions(rng, n, universe)
    col = rng.integers(1, num_colors + 1, size=n)
    col[:num_colors] = np.arange(1, num_colors + 1)
    return normalize(zip(pos.tolist(), col.tolist()))


def gen_clustered(n: int, num_colors: int, universe: int, seed: int) -> ColoredPointSet:
    rng = np.random.default_rng(seed)
    k = max(2, int(math.isqrt(n)))
    centers = rng.integers(1, universe + 1, size=k)
    width = max(1, universe // (4 * k))
    pos = centers[rng.integers(0, k, size=n)] + rng.integers(-width, width + 1, size=n)
    pos = np.clip(pos, 1, universe)
    col = rng.integers(1, num_colors + 1, size=n)
    col[:num_colors] = np.arange(1, num_colors + 1)
    return normalize(zip(pos.tolist(), col.tolist()))


def gen_adversarial_heavy(n: int, num_colors: int, universe: int, seed: int) -> ColoredPointSet:
    """Color sizes on a doubling ladder so the heavy/light cutoff keeps
    moving as tau sweeps; the tail is filled with singleton colors."""
    rng = np.random.default_rng(seed)
    sizes = []
    size = 1
    cap = max(2, int(n ** 0.85))
    while sum(sizes) + size <= n - 1 and len(sizes) < num_colors - 1:
        sizes.append(size)
        size = min(size * 2, cap)
    sizes.append(n - sum(sizes))
    col = np.repeat(np.arange(1, len(sizes) + 1), sizes)
    pos = _positions(rng, n, universe)
    return normalize(zip(pos.tolist(), col.tolist()))


GENERATORS = {
    "uniform": gen_uniform,
    "clustered": gen_clustered,
    "adversarial-heavy": gen_adversarial_heavy,
}


def generate(kind: str, n: int, num_colors: int, universe: int, seed: int) -> ColoredPointSet:
    if kind not in GENERATORS:
        raise InvalidParameter(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    return GENERATORS[kind](n, num_colors, universe, seed)


def parse_tau_spec(spec: str, n: int) -> list[int]:
    """Comma list of tau values; "n^0.6" style powers are resolved at n."""
    out = []
    for token in spec.split(","):
        token = token.strip()
        if token.startswith("n^"):
            out.append(max(1, min(n, round(n ** float(token[2:])))))
        else:
            out.append(int(token))
    return out


@dataclass
class BenchRow:
    n: int
    tau: int
    w: int
    build_ns: int
    query_ns_p50: int
    query_ns_p99: int
    mode: str

    def csv(self) -> str:
        return (f"{self.n},{self.tau},{self.w},{self.build_ns},"
                f"{self.query_ns_p50},{self.query_ns_p99},{self.mode}")


CSV_HEADER = "n,tau,w,build_ns,query_ns_p50,query_ns_p99,mode"


def _query_workload(s: ColoredPointSet, count: int, seed: int) -> list[tuple[int, int]]:
    """Point-weighted color pairs: frequent colors are queried often, which
    is what keeps the light path honest as tau grows."""
    rng = np.random.default_rng(seed)
    pairs = []
    n = len(s)
    while len(pairs) < count:
        c = int(s.colors[rng.integers(0, n)])
        c2 = int(s.colors[rng.integers(0, n)])
        if c != c2:
            pairs.append((c, c2))
    return pairs


def measure(s: ColoredPointSet, tau: int, epsilon: float, mode: str,
            repetitions: int, queries: int, seed: int) -> BenchRow:
    build_times = []
    query_times: list[int] = []
    w = 0
    for rep in range(repetitions):
        t0 = time.perf_counter_ns()
        oracle = CdoOracle.build(s, epsilon=epsilon if mode == APPROXIMATE else None,
                                 tau=tau, mode=mode)
        build_times.append(time.perf_counter_ns() - t0)
        w = oracle.params.w
        workload = _query_workload(s, queries, seed + rep)
        for c, c2 in workload[:16]:
            oracle.query(c, c2)  # warm
        for c, c2 in workload:
            q0 = time.perf_counter_ns()
            oracle.query(c, c2)
            query_times.append(time.perf_counter_ns() - q0)
    qt = np.asarray(query_times)
    return BenchRow(
        n=len(s), tau=tau, w=w,
        build_ns=int(np.median(build_times)),
        query_ns_p50=int(np.percentile(qt, 50)),
        query_ns_p99=int(np.percentile(qt, 99)),
        mode=mode,
    )


def run_sweep(s: ColoredPointSet, taus: list[int], epsilon: float,
              modes: list[str], repetitions: int, queries: int,
              seed: int) -> list[BenchRow]:
    rows = []
    for tau in taus:
        for mode in modes:
            rows.append(measure(s, tau, epsilon, mode, repetitions, queries, seed))
    return rows
