"""Command-line entry points: run, verify, gen, trace, bench.

Exit codes: 0 success, 1 usage or I/O failure, 2 approximation-guarantee
violation, 3 invariant violation (or invalid matching), 4 pass-count
mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Optional

from . import bench, driver, oracle
from .invariants import InvariantViolationError
from .matching import validate_matching
from .stream import (EdgeStream, GraphSpec, StreamFormatError, open_stream,
                     parse_graph_spec, write_edgelist)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARANTEE = 2
EXIT_INVARIANT = 3
EXIT_PASSES = 4


def _resolve_spec(args) -> GraphSpec:
    if bool(args.input) == bool(args.gen):
        raise SystemExit("exactly one of --input and --gen is required")
    if args.input:
        return GraphSpec("edgelist-file", path=args.input)
    spec = parse_graph_spec(args.gen)
    if args.seed is not None and "seed=" not in args.gen:
        spec = replace(spec, seed=args.seed)
    return spec


def _parse_epsilon(text: str) -> Fraction:
    return Fraction(text)


def _open(args) -> EdgeStream:
    return open_stream(_resolve_spec(args))


def _write_matching(report: driver.RunReport, path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for u, v in report.matching.pairs():
            fh.write(f"{u} {v}\n")


def _trace_writer(path: Optional[str]):
    if path is None:
        return None, None
    events: list[dict] = []
    return events.append, events


def _dump_trace(events: list[dict], path: str) -> None:
    with open(path, "w", encoding="ascii") as fh:
        for event in events:
            fh.write(json.dumps(event) + "\n")


def cmd_run(args) -> int:
    stream = _open(args)
    sink, events = _trace_writer(args.trace)
    report = driver.run(stream, driver.RunConfig(
        epsilon=_parse_epsilon(args.epsilon),
        check_invariants=args.check_invariants,
        trace=sink))
    if events is not None:
        _dump_trace(events, args.trace)
    print(json.dumps(report.as_dict(), indent=2))
    if args.out:
        _write_matching(report, args.out)
    return EXIT_OK


def _oracle_value(mode: str, n: int, edges) -> Optional[int]:
    if mode == "none":
        return None
    if mode == "exhaustive":
        return oracle.exact_matching_exhaustive(n, edges)
    if mode == "tutte":
        return oracle.matching_size_rank(n, edges)
    # auto: pick whatever is applicable
    if n <= 14:
        return oracle.exact_matching_exhaustive(n, edges)
    if n <= oracle.RANK_LIMIT:
        return oracle.matching_size_rank(n, edges)
    return None


def cmd_verify(args) -> int:
    stream = _open(args)
    eps = driver.normalize_epsilon(_parse_epsilon(args.epsilon))
    try:
        report = driver.run(stream, driver.RunConfig(
            epsilon=eps, check_invariants=True))
    except InvariantViolationError as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except driver.PassCountMismatch as exc:
        print(f"pass-count mismatch: {exc}", file=sys.stderr)
        return EXIT_PASSES

    edges = stream.snapshot_edges()
    if not validate_matching(report.matching, edges):
        print("output is not a valid matching", file=sys.stderr)
        return EXIT_INVARIANT
    expected = driver.expected_pass_count(report.epsilon_effective)
    if report.passes != expected:
        print(f"pass-count mismatch: {report.passes} != {expected}", file=sys.stderr)
        return EXIT_PASSES
    nu = _oracle_value(args.oracle, stream.vertex_count, edges)
    if nu is not None:
        if (1 + report.epsilon_effective) * report.matching.size < nu:
            print(f"guarantee violated: (1+eps)*{report.matching.size} < nu={nu}",
                  file=sys.stderr)
            return EXIT_GUARANTEE
        l_max = 3 / report.epsilon_effective
        for row in report.per_scale:
            bound = (1 + 4 * row.h * l_max) * (1 + 1 / l_max) * row.matching_size
            if nu > bound:
                print(f"scale-end bound violated at h={row.h}: nu={nu} > {bound}",
                      file=sys.stderr)
                return EXIT_GUARANTEE
    print(json.dumps({"ok": True, "matching_size": report.matching.size,
                      "nu": nu, "passes": report.passes}, indent=2))
    return EXIT_OK


def cmd_gen(args) -> int:
    if not args.gen:
        raise SystemExit("gen requires --gen")
    spec = parse_graph_spec(args.gen)
    if args.seed is not None and "seed=" not in args.gen:
        spec = replace(spec, seed=args.seed)
    stream = open_stream(spec)
    if args.out:
        write_edgelist(stream, args.out)
    else:
        print(f"{stream.vertex_count} {stream.edge_count}")
        for u, v in sorted((min(u, v), max(u, v))
                           for u, v in stream.snapshot_edges()):
            print(f"{u} {v}")
    return EXIT_OK


def cmd_trace(args) -> int:
    if not args.out:
        raise SystemExit("trace requires --out")
    stream = _open(args)
    events: list[dict] = []
    driver.run(stream, driver.RunConfig(
        epsilon=_parse_epsilon(args.epsilon), trace=events.append))
    _dump_trace(events, args.out)
    print(f"wrote {len(events)} events to {args.out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench.run_corpus(workers=args.workers)
    print(bench.format_table(rows))
    bad = [r for r in rows if not r.get("guarantee_ok", True)]
    return EXIT_OK if not bad else EXIT_GUARANTEE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="streammatch",
        description="Multi-pass streaming approximate maximum matching")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, epsilon=True):
        p.add_argument("--input", help="edge-list file (first line 'n m')")
        p.add_argument("--gen", help="generator spec, e.g. path:4 or gnm:20,50,seed=7")
        p.add_argument("--seed", type=int, default=None,
                       help="seed for random generators without an explicit seed")
        if epsilon:
            p.add_argument("--epsilon", default="0.5",
                           help="approximation parameter in (0, 1]")

    p_run = sub.add_parser("run", help="compute a matching and print a JSON report")
    add_common(p_run)
    p_run.add_argument("--out", help="write the matching as 'u v' lines")
    p_run.add_argument("--trace", help="write JSONL engine events")
    p_run.add_argument("--check-invariants", action="store_true")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run with checks and oracle comparison")
    add_common(p_verify)
    p_verify.add_argument("--oracle", choices=["none", "exhaustive", "tutte", "auto"],
                          default="auto")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="write a generated graph as an edge list")
    add_common(p_gen, epsilon=False)
    p_gen.add_argument("--out", help="output file (stdout if omitted)")
    p_gen.set_defaults(func=cmd_gen)

    p_trace = sub.add_parser("trace", help="run and write the JSONL event trace")
    add_common(p_trace)
    p_trace.add_argument("--out", help="trace output file", required=False)
    p_trace.set_defaults(func=cmd_trace)

    p_bench = sub.add_parser("bench", help="run the built-in corpus and print a table")
    p_bench.add_argument("--workers", type=int, default=None)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StreamFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
