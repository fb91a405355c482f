"""Command-line front end: build/persist oracles, serve queries, run
brute-force verification, benchmark sweeps, and min-plus reduction checks.

Input formats (diff-able, hand-authorable):
  points     one "position color" pair per line
  hierarchy  header "n num_colors", n lines "position leaf_color",
             then num_colors lines "color parent" (parent 0 = root)
  text       raw bytes
  matrices   header "nhat mhat M", nhat rows of A, a ";" line, mhat rows of B

Exit codes: 0 ok, 1 validation or fatal not-found, 2 corrupt oracle file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import bench as bench_mod
from . import oracle as brute
from . import serialize, snippets
from .acdo import APPROXIMATE, EXACT, CdoOracle
from .amcdoch import HierarchyOracle
from .core import INF, ColorHierarchy, normalize, validate_hierarchy
from .errors import CdokError, OracleFormatError, PatternNotFound, UnknownColor
from .reductions import (MinPlusInstance, minplus_direct, reduce_to_cdo_randomized,
                         reduce_to_mcdo)


class ParseError(CdokError):
    pass


def _read_lines(path: str) -> list[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read().splitlines()


def _ints(line: str, lineno: int, count: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"line {lineno}: expected {count} {what}, got {len(parts)}")
    try:
        return [int(p) for p in parts]
    except ValueError as e:
        raise ParseError(f"line {lineno}: {e}") from None


def parse_points_file(path: str):
    pairs = []
    for lineno, line in enumerate(_read_lines(path), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        pos, color = _ints(line, lineno, 2, "integers (position color)")
        pairs.append((pos, color))
    if not pairs:
        raise ParseError("no points in input")
    return normalize(pairs)


def parse_hierarchy_file(path: str) -> ColorHierarchy:
    lines = [l for l in _read_lines(path) if l.strip() and not l.lstrip().startswith("#")]
    if not lines:
        raise ParseError("empty hierarchy file")
    n, num_colors = _ints(lines[0], 1, 2, "integers (n num_colors)")
    if len(lines) != 1 + n + num_colors:
        raise ParseError(f"expected {1 + n + num_colors} lines, got {len(lines)}")
    points = []
    for k in range(n):
        pos, leaf = _ints(lines[1 + k], 2 + k, 2, "integers (position leaf_color)")
        points.append((pos, leaf))
    parent = [0] * num_colors
    seen = [False] * num_colors
    for k in range(num_colors):
        color, par = _ints(lines[1 + n + k], 2 + n + k, 2, "integers (color parent)")
        if not (1 <= color <= num_colors):
            raise ParseError(f"line {2 + n + k}: color {color} out of range")
        if seen[color - 1]:
            raise ParseError(f"line {2 + n + k}: color {color} repeated")
        seen[color - 1] = True
        parent[color - 1] = par
    return ColorHierarchy.from_leaf_data(points, parent)


def parse_matrix_file(path: str) -> MinPlusInstance:
    lines = [l for l in _read_lines(path) if l.strip()]
    if not lines:
        raise ParseError("empty matrix file")
    nhat, mhat, m_bound = _ints(lines[0], 1, 3, "integers (nhat mhat M)")
    a_rows, b_rows = [], []
    target = a_rows
    for lineno, line in enumerate(lines[1:], 2):
        if line.strip() == ";":
            target = b_rows
            continue
        target.append(_ints(line, lineno, mhat if target is a_rows else nhat, "entries"))
    if len(a_rows) != nhat or len(b_rows) != mhat:
        raise ParseError(f"expected {nhat} A-rows and {mhat} B-rows, "
                         f"got {len(a_rows)} and {len(b_rows)}")
    return MinPlusInstance(np.asarray(a_rows), np.asarray(b_rows), m_bound)


def _jsonline(obj) -> None:
    print(json.dumps(obj, separators=(",", ":")))


def _build_object(args):
    if args.kind == "points":
        s = parse_points_file(args.input)
        if args.tau is not None and args.tau > len(s):
            raise ParseError(f"tau {args.tau} exceeds n={len(s)}")
        return CdoOracle.build(s, epsilon=args.epsilon, tau=args.tau, mode=args.mode)
    if args.kind == "hierarchy":
        h = parse_hierarchy_file(args.input)
        if args.tau is not None and args.tau > len(h):
            raise ParseError(f"tau {args.tau} exceeds n={len(h)}")
        return HierarchyOracle.build(h, epsilon=args.epsilon, tau=args.tau, mode=args.mode)
    with open(args.input, "rb") as fh:
        text = fh.read()
    if args.tau is not None and args.tau > len(text):
        raise ParseError(f"tau {args.tau} exceeds text length {len(text)}")
    return snippets.build_index(text, epsilon=args.epsilon, tau=args.tau, mode=args.mode)


def cmd_build(args) -> int:
    t0 = time.perf_counter()
    obj = _build_object(args)
    elapsed = time.perf_counter() - t0
    serialize.save_file(args.out, obj)
    stats = {"kind": args.kind, "mode": args.mode, "build_seconds": round(elapsed, 6)}
    if isinstance(obj, CdoOracle):
        info = obj.estar.build_info
        stats.update(n=len(obj.point_set), num_colors=obj.point_set.num_colors,
                     num_heavy=len(obj.heavy_set), tau=obj.params.tau, w=obj.params.w,
                     ell0=info.get("ell0"), ell_max=info.get("ell_max"))
    else:
        oracle = obj.oracle if isinstance(obj, snippets.TextIndex) else obj
        info = oracle.build_info
        stats.update(n=len(oracle.hierarchy), num_colors=oracle.hierarchy.num_colors,
                     num_heavy=info.get("num_heavy"), tau=oracle.tau,
                     w=info.get("w"), ell0=info.get("ell0"), ell_max=info.get("ell_max"))
    _jsonline(stats)
    return 0


def _answer_json(ans) -> dict:
    if ans.distance == INF:
        return {"distance": None, "witness_a": None, "witness_b": None, "exact": ans.exact}
    return {"distance": int(ans.distance), "witness_a": ans.witness_a,
            "witness_b": ans.witness_b, "exact": ans.exact}


def cmd_query(args) -> int:
    obj = serialize.load_file(args.oracle)
    for raw in sys.stdin:
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        try:
            if isinstance(obj, snippets.TextIndex):
                if "\t" not in line:
                    _jsonline({"error": "bad_query", "detail": "expected pat1<TAB>pat2"})
                    continue
                p1, p2 = line.split("\t", 1)
                ans = snippets.query(obj, p1, p2)
            else:
                c, c2 = line.split()
                ans = obj.query(int(c), int(c2))
            _jsonline(_answer_json(ans))
        except PatternNotFound as e:
            _jsonline({"error": "not_found", "which": e.which})
        except UnknownColor:
            _jsonline({"error": "unknown_color"})
        except ValueError:
            _jsonline({"error": "bad_query", "detail": "expected two integers"})
    return 0


def _verify_points(args) -> int:
    s = parse_points_file(args.input)
    truth = brute.exact_all_pairs(s)
    failed = False
    for eps in args.epsilons:
        o = CdoOracle.build(s, epsilon=eps, tau=args.tau, mode=APPROXIMATE)
        worst = 1.0
        for c in range(1, s.num_colors + 1):
            for c2 in range(c + 1, s.num_colors + 1):
                got = o.query(c, c2).distance
                want = int(truth[c - 1, c2 - 1])
                if got < want or (want > 0 and got > (1 + eps) * want) or (want == 0 and got != 0):
                    print(f"FAIL eps={eps}: colors ({c},{c2}) answer {got} vs exact {want}")
                    return 1
                if want > 0:
                    worst = max(worst, got / want)
        print(f"eps={eps}: max_ratio={worst:.6f} pass")
    o = CdoOracle.build(s, tau=args.tau, mode=EXACT)
    for c in range(1, s.num_colors + 1):
        for c2 in range(c + 1, s.num_colors + 1):
            if o.query(c, c2).distance != truth[c - 1, c2 - 1]:
                print(f"FAIL exact: colors ({c},{c2})")
                return 1
    print("exact: max_ratio=1.000000 pass")
    return 1 if failed else 0


def _verify_hierarchy(args) -> int:
    h = parse_hierarchy_file(args.input)
    violation = validate_hierarchy(h)
    if violation is not None:
        print(f"FAIL hierarchy: {violation.kind} colors "
              f"({violation.color_a},{violation.color_b}): {violation.detail}")
        return 1
    sets = [np.sort(h.points_of(c)) for c in range(1, h.num_colors + 1)]

    def truth(c, c2):
        lo1, hi1 = h.interval(c)
        lo2, hi2 = h.interval(c2)
        if lo1 <= lo2 and hi2 <= hi1 or lo2 <= lo1 and hi1 <= hi2:
            return 0
        return brute.exact_set_distance(sets[c - 1], sets[c2 - 1])[0]

    for eps in args.epsilons:
        o = HierarchyOracle.build(h, epsilon=eps, tau=args.tau)
        worst = 1.0
        for c in range(1, h.num_colors + 1):
            for c2 in range(c + 1, h.num_colors + 1):
                got = o.query(c, c2).distance
                want = truth(c, c2)
                if got < want or (want > 0 and got > (1 + eps) * want) or (want == 0 and got != 0):
                    print(f"FAIL eps={eps}: colors ({c},{c2}) answer {got} vs exact {want}")
                    return 1
                if want > 0:
                    worst = max(worst, got / want)
        print(f"eps={eps}: max_ratio={worst:.6f} pass")
    return 0


def _verify_text(args) -> int:
    with open(args.input, "rb") as fh:
        text = fh.read()
    rng = np.random.default_rng(args.seed)
    n = len(text)
    for eps in args.epsilons:
        idx = snippets.build_index(text, epsilon=eps, tau=args.tau)
        worst = 1.0
        for _ in range(args.samples):
            i1 = int(rng.integers(0, n)); j1 = int(rng.integers(i1 + 1, min(n, i1 + 16) + 1))
            i2 = int(rng.integers(0, n)); j2 = int(rng.integers(i2 + 1, min(n, i2 + 16) + 1))
            p1, p2 = text[i1:j1], text[i2:j2]
            want = brute.closest_occurrence_pair(text, p1, p2)
            got = snippets.query(idx, p1, p2).distance
            if got < want or (want > 0 and got > (1 + eps) * want) or (want == 0 and got != 0):
                print(f"FAIL eps={eps}: patterns ({p1!r},{p2!r}) answer {got} vs exact {want}")
                return 1
            if want > 0:
                worst = max(worst, got / want)
        print(f"eps={eps}: max_ratio={worst:.6f} pass ({args.samples} sampled pairs)")
    return 0


def cmd_verify(args) -> int:
    if args.kind == "points":
        return _verify_points(args)
    if args.kind == "hierarchy":
        return _verify_hierarchy(args)
    return _verify_text(args)


def cmd_bench(args) -> int:
    n = args.n
    num_colors = args.num_colors or max(2, int(math.isqrt(n)))
    universe = args.universe or n
    s = bench_mod.generate(args.gen, n, num_colors, universe, args.seed)
    taus = bench_mod.parse_tau_spec(args.taus, len(s))
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    rows = bench_mod.run_sweep(s, taus, args.epsilon, modes,
                               args.repetitions, args.queries, args.seed)
    print(bench_mod.CSV_HEADER)
    for row in rows:
        print(row.csv())
    return 0


def cmd_reduce(args) -> int:
    inst = parse_matrix_file(args.input)
    if args.mode == "mcdo":
        got = reduce_to_mcdo(inst)
    else:
        got = reduce_to_cdo_randomized(inst, alpha=args.alpha, rng_seed=args.seed)
    want = minplus_direct(inst)
    for row in got:
        print(",".join("inf" if v == INF else str(int(v)) for v in row))
    mismatches = int((got != want).sum())
    print("MATCH" if mismatches == 0 else f"MISMATCH({mismatches})")
    return 0


def _add_epsilon(p, default=None, required=False):
    p.add_argument("--epsilon", type=float, default=default, required=required,
                   help="approximation parameter in (0, 1]")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cdok",
                                 description="color distance oracles on integer arrays")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build an oracle from an input file")
    p.add_argument("input")
    p.add_argument("--kind", choices=["points", "hierarchy", "text"], required=True)
    _add_epsilon(p)
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--mode", choices=[EXACT, APPROXIMATE], default=APPROXIMATE)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="answer queries from stdin against a saved oracle")
    p.add_argument("oracle")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("verify", help="brute-force equivalence check on an input")
    p.add_argument("input")
    p.add_argument("--kind", choices=["points", "hierarchy", "text"], required=True)
    p.add_argument("--epsilons", type=lambda s: [float(x) for x in s.split(",")],
                   default=[1.0, 0.5, 0.1])
    p.add_argument("--tau", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="tau sweep timing table (CSV on stdout)")
    p.add_argument("--gen", choices=sorted(bench_mod.GENERATORS), default="uniform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--num-colors", type=int, default=None)
    p.add_argument("--universe", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--taus", default="n^0.5,n^0.6,n^0.75")
    _add_epsilon(p, default=1.0)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--queries", type=int, default=200)
    p.add_argument("--modes", default="approximate,exact")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("reduce", help="min-plus product through the oracle reductions")
    p.add_argument("input")
    p.add_argument("--mode", choices=["mcdo", "cdo"], default="mcdo")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=int, default=None)
    p.set_defaults(func=cmd_reduce)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OracleFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CdokError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
