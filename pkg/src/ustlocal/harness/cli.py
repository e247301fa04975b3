"""Command line: ``python -m ustlocal <command> ...``.

Exit status is 0 when every gate passes, 1 when a gate fails and 2 on usage
or input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from ..electric import LaplacianSystem, foster_sum, resistance_pair, resistance_to_set
from ..errors import UstError
from ..graph_core import FAMILIES, format_graph, generate
from ..local_stats import (
    RootedShape,
    census,
    law_table,
    limit_prob_conditioned,
    limit_prob_unconditional,
    stab_order,
    tv_distance,
)
from ..ust_sampler import iter_trees, tree_to_text, trees_to_json
from .config import KINDS, ExperimentConfig, resolve_graph, write_rows
from .experiments import run

GRAPH_PARAMS = ("n", "d", "a", "b", "m", "dim", "side")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _globals(parser, suppress: bool) -> None:
    dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=dflt(0), help="base seed (default 0)")
    parser.add_argument("--threads", type=int, default=dflt(1), help="worker processes")
    parser.add_argument("--out", default=dflt(None), help="output file (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=dflt("json"))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ustlocal", description="Uniform spanning trees, effective resistance and local limits.")
    _globals(p, suppress=False)
    common = _Parser(add_help=False)
    _globals(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", parents=[common], help="write a graph from a named family")
    g.add_argument("--family", required=True, choices=FAMILIES)
    for name in GRAPH_PARAMS:
        g.add_argument(f"--{name}", type=int)

    s = sub.add_parser("sample", parents=[common], help="draw uniform spanning trees")
    s.add_argument("--graph", required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--method", choices=("wilson", "aldous_broder"), default="wilson")

    c = sub.add_parser("census", parents=[common], help="tally UST ball shapes")
    c.add_argument("--graph", required=True)
    c.add_argument("--r", type=int, default=1)
    c.add_argument("--samples", type=int, default=10)
    c.add_argument("--mode", choices=("all", "uniform"), default="all")

    r = sub.add_parser("resistance", parents=[common], help="effective resistances")
    r.add_argument("--graph", required=True)
    r.add_argument("--u", type=int)
    r.add_argument("--v", type=int)
    r.add_argument("--set", type=int, nargs="+", dest="target_set")
    r.add_argument("--foster", action="store_true", help="report the edge sum of c * R_eff")

    t = sub.add_parser("theory", parents=[common], help="limit-law probabilities of a shape")
    t.add_argument("--code", required=True, help='parenthesis code, e.g. "(()())"')
    t.add_argument("--r", type=int)

    v = sub.add_parser("verify", parents=[common], help="exact cross-checks on a small graph")
    v.add_argument("--graph", required=True)
    v.add_argument("--samples", type=int, default=100_000)

    e = sub.add_parser("experiment", parents=[common], help="run an experiment from a config or flags")
    e.add_argument("--config")
    e.add_argument("--kind", choices=KINDS)
    e.add_argument("--graph")
    e.add_argument("--r", type=int, default=1)
    e.add_argument("--samples", type=int, default=50)
    e.add_argument("--csv-out", help="also write the check table as CSV")
    e.add_argument("--data-out", help="plot-ready CSV of tail curves or census histogram")
    return p


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def _report_out(rep, args) -> int:
    text = rep.to_csv() if args.format == "csv" else rep.to_json(timing=False) + "\n"
    _emit(text, args.out)
    print(f"{rep.kind} on {rep.graph}: {'PASS' if rep.passed else 'FAIL'} ({rep.wall_clock:.2f}s)", file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_generate(args) -> int:
    params = {k: getattr(args, k) for k in GRAPH_PARAMS if getattr(args, k) is not None}
    net = generate(args.family, params, seed=args.seed)
    _emit(format_graph(net), args.out)
    return 0


def cmd_sample(args) -> int:
    net, _ = resolve_graph(args.graph, args.seed)
    trees = list(iter_trees(net, args.count, np.random.default_rng([args.seed, 1]), args.method))
    if args.format == "json":
        text = trees_to_json(trees) + "\n"
    else:
        text = _rows_csv([{"tree": i, "u": u, "v": v} for i, t in enumerate(trees) for u, v in t.edges()])
    _emit(text, args.out)
    return 0


def cmd_census(args) -> int:
    net, name = resolve_graph(args.graph, args.seed)
    rng = np.random.default_rng([args.seed, 2])
    cen = census(iter_trees(net, args.samples, rng), args.r, args.mode, rng, graph=name, seed=args.seed)
    if args.format == "json":
        text = cen.to_json() + "\n"
    else:
        law = law_table(args.r, True) if args.r >= 1 else {}
        tot = cen.total
        rows = [
            {"code": c, "count": k, "empirical": k / tot, "predicted": law.get(c, 0.0)}
            for c, k in sorted(cen.counts.items(), key=lambda kv: -kv[1])
        ]
        text = _rows_csv(rows)
    _emit(text, args.out)
    if args.r >= 1:
        print(f"tv to conditioned law: {tv_distance(cen, law_table(args.r, True)):.5f}", file=sys.stderr)
    return 0


def cmd_resistance(args) -> int:
    net, _ = resolve_graph(args.graph, args.seed)
    out: dict = {}
    if args.foster:
        out["foster_sum"] = foster_sum(net, LaplacianSystem(net))
        out["n_minus_1"] = net.n - 1
    if args.u is not None and args.target_set:
        out["resistance_to_set"] = resistance_to_set(net, args.u, args.target_set).value
    elif args.u is not None and args.v is not None:
        out["resistance"] = resistance_pair(net, args.u, args.v).value
    if not out:
        raise UsageError("give --u and --v, --u and --set, or --foster")
    text = json.dumps(out) + "\n" if args.format == "json" else _rows_csv([out])
    _emit(text, args.out)
    return 0


def cmd_theory(args) -> int:
    shape = RootedShape.from_code(args.code)
    r = shape.height if args.r is None else args.r
    out = {
        "code": shape.code,
        "r": r,
        "size": shape.size,
        "height": shape.height,
        "last_level": shape.last_level,
        "stab_order": stab_order(shape),
        "conditioned": limit_prob_conditioned(shape, r) if r >= 1 else math.nan,
        "unconditional": limit_prob_unconditional(shape, r),
    }
    text = json.dumps(out) + "\n" if args.format == "json" else _rows_csv([out])
    _emit(text, args.out)
    return 0


def cmd_verify(args) -> int:
    cfg = ExperimentConfig(args.graph, kind="verify", samples=args.samples, seed=args.seed, threads=args.threads)
    return _report_out(run(cfg), args)


def cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.load(args.config)
        cfg.threads = args.threads
    else:
        if not (args.kind and args.graph):
            raise UsageError("experiment needs --config or both --kind and --graph")
        cfg = ExperimentConfig(
            args.graph, kind=args.kind, radius=args.r, samples=args.samples, seed=args.seed, threads=args.threads
        )
    rep = run(cfg)
    csv_out = args.csv_out or cfg.csv_out
    if csv_out:
        with open(csv_out, "w") as fh:
            fh.write(rep.to_csv())
    if args.data_out:
        rows = rep.data.get("histogram") or rep.data.get("degree_tail") or []
        write_rows(args.data_out, rows)
    if cfg.out and not args.out:
        args.out = cfg.out
    return _report_out(rep, args)


COMMANDS = {
    "generate": cmd_generate,
    "sample": cmd_sample,
    "census": cmd_census,
    "resistance": cmd_resistance,
    "theory": cmd_theory,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
}


def cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (UstError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli())
