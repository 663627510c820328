"""Command line interface: ``kdjm run|gen|exact|report|solve``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .algorithms import parse_config, solve
from .bench import (DEFAULT_KS, ERROR, compare_report, parse_duration, parse_plan,
                    read_csv, read_plan, run_plan)
from .exact import ExactLimits, LimitExceeded, brute_force_kdjm, export_ilp
from .graph import validate_solution
from .instances import IoFailure, load_instance, parse_instance_spec, write_edge_list


def _ks(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _duration(text: str) -> float:
    try:
        return parse_duration(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kdjm", description="k-disjoint matching heuristics")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment plan and write a CSV")
    run.add_argument("--plan", help="plan file with key=value lines")
    run.add_argument("--instance", action="append", help="instance spec (repeatable)")
    run.add_argument("--alg", action="append", help="algorithm config (repeatable)")
    run.add_argument("--k", type=_ks, help=f"k values (default {','.join(map(str, DEFAULT_KS))})")
    run.add_argument("--reps", type=int, help="repetitions per cell, odd (default 3)")
    run.add_argument("--timeout", type=_duration, help="per-repetition limit, e.g. 30s or 4h")
    run.add_argument("--seed", type=int, help="base seed (default 0)")
    run.add_argument("--out", help="CSV output path")
    run.add_argument("--oracle", action="store_true", default=None,
                     help="compare against the exact optimum where it is small enough")
    run.add_argument("--no-pin", dest="pin", action="store_false", default=None,
                     help="do not pin timing runs to one CPU")
    run.add_argument("--quiet", action="store_true")

    gen = sub.add_parser("gen", help="generate or convert an instance to an edge list")
    gen.add_argument("spec", help="instance spec, e.g. kind=rmat,x=10,init=rmat_b,seed=1")
    gen.add_argument("-o", "--out", required=True, help="edge list output path")

    ex = sub.add_parser("exact", help="exact optimum by exhaustive search, or ILP export")
    ex.add_argument("spec")
    ex.add_argument("--k", type=int, required=True)
    ex.add_argument("--lp", help="write the ILP model to this path instead of solving")
    ex.add_argument("--max-edges", type=int, default=ExactLimits.max_edges)
    ex.add_argument("--max-k", type=int, default=ExactLimits.max_k)

    rep = sub.add_parser("report", help="summarize a results CSV")
    rep.add_argument("csv")
    rep.add_argument("--baseline", help="config string to compare against (default greedy_it)")

    sol = sub.add_parser("solve", help="run one algorithm on one instance")
    sol.add_argument("spec")
    sol.add_argument("--alg", default="kec")
    sol.add_argument("--k", type=int, required=True)
    return parser


def _cmd_run(args) -> int:
    overrides = dict(instances=args.instance, configs=args.alg, ks=args.k,
                     repetitions=args.reps, timeout=args.timeout, base_seed=args.seed,
                     out=args.out, oracle=args.oracle, pin_cpu=args.pin)
    plan = read_plan(args.plan, **overrides) if args.plan else parse_plan("", **overrides)

    def progress(r):
        if not args.quiet:
            detail = r.weight if r.status == "ok" else r.message
            print(f"{r.instance} {r.config} k={r.k}: {r.status} {detail}", file=sys.stderr)

    records = run_plan(plan, progress)
    if not args.quiet:
        print(compare_report(records).format())
    return 1 if any(r.status == ERROR for r in records) else 0


def _cmd_gen(args) -> int:
    g = load_instance(parse_instance_spec(args.spec))
    write_edge_list(g, args.out)
    print(f"n={g.n} m={g.m} max_degree={g.max_degree} max_demand={g.max_demand}")
    return 0


def _cmd_exact(args) -> int:
    g = load_instance(parse_instance_spec(args.spec))
    if args.lp:
        export_ilp(g, args.k, args.lp)
        print(f"wrote {g.m * args.k} binaries to {args.lp}")
        return 0
    res = brute_force_kdjm(g, args.k, ExactLimits(args.max_edges, args.max_k))
    print(f"OPT={res.weight} explored={res.explored}")
    for c, members in enumerate(res.solution.classes):
        pairs = " ".join(f"{g.edges[e].u}-{g.edges[e].v}" for e in sorted(members))
        print(f"class {c}: weight={res.solution.class_weights[c]} edges={pairs}")
    return 0


def _cmd_report(args) -> int:
    print(compare_report(read_csv(args.csv), args.baseline).format())
    return 0


def _cmd_solve(args) -> int:
    g = load_instance(parse_instance_spec(args.spec))
    s = solve(g, args.k, parse_config(args.alg))
    report = validate_solution(g, s)
    print(f"weight={s.total_weight} classes={list(s.class_weights)} valid={report.valid}")
    return 0 if report.valid else 1


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "gen": _cmd_gen, "exact": _cmd_exact,
               "report": _cmd_report, "solve": _cmd_solve}[args.command]
    try:
        return handler(args)
    except (IoFailure, LimitExceeded, ValueError) as exc:
        print(f"kdjm {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
