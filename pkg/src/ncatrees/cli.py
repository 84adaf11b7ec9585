"""Command-line interface.

Subcommands
-----------
sizes              size table (CSV) and bound check for n = 1..N
encode             labels of a tree's vertices
nca                decode the NCA label of two labels
verify             universality check over enumerated or random trees
bench              probe counts and timing of random queries
materialize        explicit universal tree in the parenthesis grammar
check-consistency  consistency check of a dense decoder table file
solve              beta and c for a (family, lambda)
optimize           lambda minimising beta for a family

Scheme selection is ``--profile {binary-basic,binary-opt,general-opt}`` or
``--family {binary,general} --lambda R``.  Exit codes: 0 success, 1
verification or bound failures, 2 invalid input or overflow.

Usage examples
--------------
  ncatrees sizes --profile binary-basic --n 5
  ncatrees encode --profile binary-basic --n 3 '((()))'
  ncatrees nca --profile binary-basic --n 3 3 4 --stats
  ncatrees verify --profile binary-basic exhaustive --max-n 10
  ncatrees verify --profile binary-opt random --count 1000 --size 1000
"""
from __future__ import annotations

import argparse
import random
import statistics
import sys
import time
from pathlib import Path

from .consistency import check_consistent, labels_to_tree, read_table
from .construction import MARKED, PLAIN, PROFILES, SchemeParams, label_bits, materialize, profile, size_cache
from .decoder import QueryContext, nca_query
from .encoder import EmbeddingError, embed, format_labels
from .exponent import optimize_lambda, solve_beta
from .tree_model import FamilyKind, MarkedTree, TreeParseError, parse_tree, serialize_tree
from .verify import verify_exhaustive, verify_random

DEFAULT_SEED = 42


class UsageError(Exception):
    pass


def _params(args) -> SchemeParams:
    if args.profile:
        if args.family or args.lam is not None:
            raise UsageError("--profile cannot be combined with --family/--lambda")
        return profile(args.profile)
    if not args.family or args.lam is None:
        raise UsageError("give --profile, or both --family and --lambda")
    params = SchemeParams(FamilyKind(args.family), args.lam)
    beta, c = solve_beta(params.family, params.lam)
    print(f"# custom {params.family.value} lambda={params.lam!r}: beta={beta:.6f} c={c:.6f}", file=sys.stderr)
    return params


def _exponent(params: SchemeParams) -> float:
    if params.profile in PROFILES:
        return PROFILES[params.profile].exponent
    return solve_beta(params.family, params.lam)[0]


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_sizes(args) -> int:
    params = _params(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    beta = _exponent(params)
    cache = size_cache(params)
    rows = ["n,size_plain,size_marked,bits,bound"]
    failures = []
    for n in range(1, args.n + 1):
        sp, sm = cache.plain(n), cache.marked(n)
        bound = float(n) ** beta
        if sp > bound:
            failures.append(n)
        rows.append(f"{n},{sp},{sm},{label_bits(sp)},{bound:.6f}")
    _emit("\n".join(rows) + "\n", args.out)
    if failures:
        print(f"# bound n^{beta} violated at {len(failures)} rows, first n={failures[0]}")
        return 1
    print(f"# bound n^{beta} holds for all {args.n} rows")
    return 0


def _read_tree_arg(arg: str):
    text = arg if arg.lstrip().startswith("(") else Path(arg).read_text(encoding="utf-8")
    return parse_tree(text)


def cmd_encode(args) -> int:
    params = _params(args)
    tree = _read_tree_arg(args.tree)
    if isinstance(tree, MarkedTree):
        raise UsageError("encode takes an unmarked tree")
    n = args.n if args.n is not None else tree.n
    assignment = embed(params, tree, n)
    _emit(format_labels(assignment), args.out)
    return 0


def cmd_nca(args) -> int:
    params = _params(args)
    ctx = QueryContext(params, args.n)
    result = nca_query(ctx, args.x, args.y)
    print(result)
    if args.stats:
        print(f"probes {ctx.probe_counter}")
        print(f"depth {ctx.last_depth}")
    return 0


def cmd_verify(args) -> int:
    params = _params(args)
    if args.mode == "exhaustive":
        tally = verify_exhaustive(params, args.max_n)
    else:
        pairs = args.pairs
        if pairs is None and args.size > 200:
            pairs = 10_000
        tally = verify_random(params, args.count, args.size, args.seed, pairs)
    print("\n".join(tally.lines()))
    return 0 if tally.ok else 1


def cmd_bench(args) -> int:
    params = _params(args)
    ctx = QueryContext(params, args.n)
    rng = random.Random(args.seed)
    probes, depths, times = [], [], []
    for _ in range(args.queries):
        x, y = rng.randrange(ctx.size), rng.randrange(ctx.size)
        before = ctx.probe_counter
        t0 = time.perf_counter()
        nca_query(ctx, x, y)
        times.append(time.perf_counter() - t0)
        probes.append(ctx.probe_counter - before)
        depths.append(ctx.last_depth)
    depth_bound, probe_bound = ctx.depth_bound(), ctx.probe_bound()
    max_probes = max(probes, default=0)
    max_depth = max(depths, default=0)
    ok = max_depth <= depth_bound and max_probes <= probe_bound
    print(f"size {ctx.size}")
    print(f"queries {args.queries}")
    print(f"mean_probes {statistics.fmean(probes) if probes else 0.0:.3f}")
    print(f"median_probes {statistics.median(probes) if probes else 0}")
    print(f"max_probes {max_probes}")
    print(f"probe_bound {probe_bound:.3f}")
    print(f"max_depth {max_depth}")
    print(f"depth_bound {depth_bound:.3f}")
    print(f"bounds {'pass' if ok else 'FAIL'}")
    if times:
        print(f"# mean_time_us {1e6 * statistics.fmean(times):.2f} median_time_us {1e6 * statistics.median(times):.2f}",
              file=sys.stderr)
    return 0 if ok else 1


def cmd_materialize(args) -> int:
    params = _params(args)
    kind = MARKED if args.kind == "marked" else PLAIN
    tree = materialize(params, kind, args.n)
    if kind is MARKED:
        tree = MarkedTree(tree, size_cache(params).marked_leaf(args.n))
    _emit(serialize_tree(tree) + "\n", args.out)
    return 0


def cmd_check_consistency(args) -> int:
    table = read_table(args.table)
    report = check_consistent(table, args.max_universe)
    counts = report.counts()
    print(f"m {table.m}")
    print("consistent" if report.consistent else "inconsistent")
    print(" ".join(f"{k}={v}" for k, v in counts.items()))
    for prop, triple in report.violations[: args.show]:
        print(f"{prop} {triple[0]} {triple[1]} {triple[2]}")
    if report.consistent and args.tree:
        print(serialize_tree(labels_to_tree(table, args.max_universe)))
    return 0 if report.consistent else 1


def cmd_solve(args) -> int:
    if args.profile:
        params = profile(args.profile)
        family, lam = params.family, params.lam
    else:
        if not args.family or args.lam is None:
            raise UsageError("give --profile, or both --family and --lambda")
        family, lam = FamilyKind(args.family), args.lam
    beta, c = solve_beta(family, lam, args.tol)
    print(f"beta {beta:.6f}")
    print(f"c {c:.6f}")
    return 0


def cmd_optimize(args) -> int:
    if args.profile:
        family = profile(args.profile).family
    elif args.family:
        family = FamilyKind(args.family)
    else:
        raise UsageError("give --family or --profile")
    lam, beta = optimize_lambda(family, args.tol)
    print(f"lambda {lam:.6f}")
    print(f"beta {beta:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    scheme = argparse.ArgumentParser(add_help=False)
    scheme.add_argument("--profile", choices=sorted(PROFILES))
    scheme.add_argument("--family", choices=[f.value for f in FamilyKind])
    scheme.add_argument("--lambda", dest="lam", type=float)

    parser = argparse.ArgumentParser(prog="ncatrees", description="NCA-universal trees and labeling schemes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sizes", parents=[scheme], help="size table and bound check")
    p.add_argument("--n", type=int, required=True, help="largest n")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("encode", parents=[scheme], help="label a tree")
    p.add_argument("tree", help="tree file, or the tree text itself")
    p.add_argument("--n", type=int, help="capacity (default: tree size)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("nca", parents=[scheme], help="decode nca of two labels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_nca)

    p = sub.add_parser("verify", parents=[scheme], help="universality check")
    p.add_argument("mode", choices=["exhaustive", "random"])
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--pairs", type=int, help="sampled pairs per tree (default: all, or 10000 above size 200)")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", parents=[scheme], help="query probes and timing")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--queries", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("materialize", parents=[scheme], help="write S_n or S'_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["plain", "marked"], default="plain")
    p.add_argument("--out")
    p.set_defaults(func=cmd_materialize)

    p = sub.add_parser("check-consistency", help="check a dense decoder table file")
    p.add_argument("table")
    p.add_argument("--max-universe", type=int, default=512)
    p.add_argument("--show", type=int, default=10, help="violations to print")
    p.add_argument("--tree", action="store_true", help="print the reconstructed tree")
    p.set_defaults(func=cmd_check_consistency)

    p = sub.add_parser("solve", parents=[scheme], help="beta and c for a lambda")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("optimize", parents=[scheme], help="optimal lambda for a family")
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OverflowError as exc:
        print(f"error: overflow: {exc}", file=sys.stderr)
        return 2
    except (UsageError, TreeParseError, EmbeddingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
