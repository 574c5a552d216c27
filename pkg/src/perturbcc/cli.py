"""Command-line front end: ``perturbcc {gen,cc,verify,bench,detlab}``.

JSON goes to stdout, CSV to stdout or ``-o``, human summaries to stderr.
Exit codes: 0 success, 2 usage error (bad flag, unreadable file, size cap),
3 failed invariant.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import _kernels
from .bench import SuiteSpec, parse_sizes, run_bench, write_csv
from .detlab import ENUM_CAP, identity_checks
from .exact import EXACT_CAP, ExactCapError
from .graph import GraphError, dump_edge_list, gen_chain_union, gen_random_graph, read_edge_list
from .traversal import components_via
from .verify import exact_invariants, verify_strategies

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 2, 3


class UsageError(Exception):
    pass


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _load(path: str):
    try:
        g, report = read_edge_list(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None
    except GraphError as exc:
        raise UsageError(f"{path}: {exc}") from None
    for w in report.warnings:
        _log(f"warning: {path}: {w}")
    return g


def _emit(obj) -> None:
    json.dump(obj, sys.stdout)
    sys.stdout.write("\n")


def cmd_gen(args) -> int:
    if args.random:
        n, m = args.random
        try:
            g = gen_random_graph(n, m, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if args.chains is None or args.len is None:
            raise UsageError("gen needs --chains and --len (or --random N M)")
        try:
            g = gen_chain_union(args.chains, args.len, args.seed, shuffle=not args.no_shuffle)
        except (ValueError, OverflowError) as exc:
            raise UsageError(str(exc)) from None
    text = dump_edge_list(g)
    if args.output:
        Path(args.output).write_text(text)
        _log(f"wrote n={g.n} m={g.m} to {args.output}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_cc(args) -> int:
    g = _load(args.input)
    if args.start is not None and not 1 <= args.start <= g.n:
        raise UsageError(f"--start {args.start} outside 1..{g.n}")
    try:
        res = components_via(
            g, args.algo, backend=args.backend, masking=not args.no_mask,
            keep_traces=args.trace, first_start=args.start, mode=args.mode,
        )
    except ExactCapError as exc:
        raise UsageError(str(exc)) from None
    _emit(res.to_json(with_traces=args.trace))
    _log(f"{res.strategy}: K={res.K} iterations={res.total_iterations}")
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args.input)
    report = verify_strategies(g, backend=args.backend)
    if args.exact:
        if g.n > EXACT_CAP:
            raise UsageError(f"--exact is limited to n <= {EXACT_CAP} vertices (got n={g.n})")
        report["exact"] = exact_invariants(g)
        report["ok"] = report["ok"] and report["exact"]["ok"]
    _emit(report)
    _log("verify: ok" if report["ok"] else "verify: MISMATCH")
    return EXIT_OK if report["ok"] else EXIT_INVARIANT


def cmd_bench(args) -> int:
    try:
        spec = SuiteSpec(
            suite=args.suite,
            sizes=parse_sizes(args.sizes),
            strategies=[s for s in args.strategies.split(",") if s],
            seed=args.seed,
            repeats=args.repeats,
            backend=args.backend,
            workers=args.workers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if "exact-perturb" in spec.strategies:
        raise UsageError("the bench suites exceed the exact-mode cap; use bfs, sis or gss")
    records = run_bench(spec)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    for r in records:
        _log(f"n={r.n} K={r.K} {r.strategy:>13}: iterations={r.total_iterations} passes={r.portrait_passes} {r.wall_ns / 1e6:.2f} ms [{r.backend}]")
    return EXIT_OK


def cmd_detlab(args) -> int:
    g = _load(args.input)
    if g.n > ENUM_CAP:
        raise UsageError(f"detlab enumerates permutations and is limited to n <= {ENUM_CAP} (got n={g.n})")
    report = identity_checks(g)
    _emit(report)
    _log(f"det A(d) = {report['polynomial']}; checks {'ok' if report['ok'] else 'FAILED'}")
    return EXIT_OK if report["ok"] else EXIT_INVARIANT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="perturbcc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def backend_opt(sp):
        sp.add_argument("--backend", choices=_kernels.BACKENDS, default=None,
                        help="kernel backend (default: $PERTURBCC_BACKEND or numba)")

    g = sub.add_parser("gen", help="write a generated graph as an edge list")
    g.add_argument("--chains", type=int)
    g.add_argument("--len", type=int)
    g.add_argument("--random", type=int, nargs=2, metavar=("N", "M"), help="uniform graph with N vertices, M edges")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--no-shuffle", action="store_true", help="keep chain labels consecutive")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("cc", help="connected components as JSON")
    c.add_argument("--algo", choices=["bfs", "sis", "gss", "exact"], default="gss")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--start", type=int)
    c.add_argument("--trace", action="store_true")
    c.add_argument("--mode", choices=["pattern", "float"], default="pattern")
    c.add_argument("--no-mask", action="store_true")
    backend_opt(c)
    c.set_defaults(func=cmd_cc)

    v = sub.add_parser("verify", help="compare all strategies with union-find")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("--exact", action="store_true", help="also run the exact perturbation invariants")
    backend_opt(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="benchmark suite as CSV")
    b.add_argument("--suite", default="chains")
    b.add_argument("--sizes", default="", help="comma list of CHAINSxLENGTH")
    b.add_argument("--strategies", default="bfs,sis,gss")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeats", type=int, default=3)
    b.add_argument("--workers", type=int, default=None, help="pool size (default: $PERTURBCC_THREADS or 1)")
    b.add_argument("-o", "--output")
    backend_opt(b)
    b.set_defaults(func=cmd_bench)

    dl = sub.add_parser("detlab", help="determinant polynomial and identity checks")
    dl.add_argument("-i", "--input", required=True)
    dl.set_defaults(func=cmd_detlab)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        _log(f"perturbcc {args.command}: error: {exc}")
        return EXIT_USAGE
    except (AssertionError, RuntimeError) as exc:
        _log(f"perturbcc {args.command}: invariant violated: {exc}")
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
