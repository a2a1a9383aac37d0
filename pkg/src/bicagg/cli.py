"""Command-line interface.

Subcommands: generate, enumerate, aggregate, outliers, evaluate, sweep.
Exit codes: 0 success, 1 usage error, 2 data error, 3 partial sweep failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .aggregate import single_linkage
from .core import FormatError, remove_non_maximal, read_dataset, read_solution, write_dataset, write_solution
from .enumeration import EnumParams, enumerate_maximal
from .metrics import CSV_FIELDS, evaluate
from .outlier import clean
from .pipeline import (
    LONG_FIELDS, MEAN_FIELDS, AggConfig, SweepConfig, aggregate, average_rows,
    center_rows, run_sweep, select_epsilon, to_csv,
)
from .synthgen import PlacementError, SynthSpec, add_noise, generate

log = logging.getLogger("bicagg")

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PARTIAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _dataset_args(p):
    p.add_argument("--dataset", required=True, help="CSV/TSV matrix, no header by default")
    p.add_argument("--header", action="store_true", help="skip the first line of the dataset")
    p.add_argument("--labels", action="store_true", help="drop the first field of each dataset line")
    p.add_argument("--center", action="store_true", help="subtract each row's mean")


def _enum_args(p, many=False):
    p.add_argument("--min-rows", type=int, default=50)
    p.add_argument("--min-cols", type=int, default=4)
    if many:
        p.add_argument("--epsilon", type=_floats, default=(0.0,), help="comma-separated list")
    else:
        p.add_argument("--epsilon", type=float, default=0.0)


def _agg_args(p, many=False):
    methods = "sl|ov|mc|none"
    if many:
        p.add_argument("--method", default="sl", help=f"comma-separated subset of {methods}")
    else:
        p.add_argument("--method", choices=["sl", "ov", "mc", "none"], default="sl")
    p.add_argument("--k", type=int, default=None, help="dendrogram cut for sl (required with sl)")
    p.add_argument("--th", type=float, default=0.25, help="overlap threshold for ov")
    p.add_argument("--eta", type=float, default=0.15, help="deleting threshold for mc")
    p.add_argument("--gamma", type=float, default=0.15, help="merging threshold for mc")
    p.add_argument("--mc-order", choices=["md", "dm"], default="dm")
    p.add_argument("--remove-outliers", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="bicagg", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write an artificial benchmark")
    g.add_argument("--kind", choices=["art1", "art2", "art3"], default="art1")
    g.add_argument("--rows", type=int, default=1000)
    g.add_argument("--cols", type=int, default=15)
    g.add_argument("--n-biclusters", type=int, default=None)
    g.add_argument("--sigma", type=float, default=0.0, help="noise standard deviation")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True, help="dataset CSV path")
    g.add_argument("--truth", help="truth JSONL path (default: <out stem>.truth.jsonl)")

    e = sub.add_parser("enumerate", help="enumerate maximal coherent-values biclusters")
    _dataset_args(e)
    _enum_args(e)
    e.add_argument("--out", required=True, help="solution JSONL path")

    a = sub.add_parser("aggregate", help="aggregate a solution")
    a.add_argument("--solution", required=True)
    _agg_args(a)
    a.add_argument("--out", required=True)

    o = sub.add_parser("outliers", help="remove outlier rows/columns from aggregated biclusters")
    o.add_argument("--solution", required=True, help="aggregated solution")
    o.add_argument("--fragments", required=True, help="pre-aggregation solution")
    o.add_argument("--out", required=True)

    v = sub.add_parser("evaluate", help="compare a solution with a reference")
    v.add_argument("--solution", required=True)
    v.add_argument("--truth", required=True)
    v.add_argument("--out", help="CSV report path (default: stdout)")

    s = sub.add_parser("sweep", help="noise sweep with repetitions")
    s.add_argument("--kind", choices=["art1", "art2", "art3"], default="art1")
    s.add_argument("--dataset", help="use this matrix instead of generating one")
    s.add_argument("--truth", help="truth for --dataset")
    s.add_argument("--header", action="store_true")
    s.add_argument("--labels", action="store_true")
    s.add_argument("--center", action="store_true")
    _enum_args(s, many=True)
    _agg_args(s, many=True)
    s.add_argument("--sigma-grid", type=_floats, default=(0.0,))
    s.add_argument("--reps", type=int, default=30)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="long-format CSV; also writes .mean.csv and .selection.csv")
    return ap


def _load_matrix(args):
    m = read_dataset(args.dataset, header=args.header, labels=args.labels)
    return center_rows(m) if args.center else m


def _agg_config(args, method=None) -> AggConfig:
    method = method or args.method
    if method == "sl" and args.k is None:
        raise UsageError("--method sl needs an explicit --k (see the printed merge heights)")
    return AggConfig(
        method=method, k=args.k if args.k is not None else 1, th=args.th, eta=args.eta,
        gamma=args.gamma, mc_order=args.mc_order, remove_outliers=args.remove_outliers,
    )


def cmd_generate(args):
    spec = SynthSpec(args.kind, args.rows, args.cols, args.n_biclusters, args.seed)
    inst = generate(spec)
    m = add_noise(inst.matrix, args.sigma, [args.seed, 1])
    out = Path(args.out)
    truth = Path(args.truth) if args.truth else out.with_suffix(".truth.jsonl")
    write_dataset(out, m)
    write_solution(truth, inst.truth)
    meta = spec.as_text() + f"sigma={args.sigma}\n"
    out.with_name(out.name + ".meta").write_text(meta, encoding="utf-8")
    print(f"wrote {out} ({m.n_rows}x{m.n_cols}) and {truth} ({len(inst.truth)} biclusters)")
    return 0


def cmd_enumerate(args):
    m = _load_matrix(args)
    sol = enumerate_maximal(m, EnumParams(args.min_rows, args.min_cols, args.epsilon))
    write_solution(args.out, sol)
    print(f"{len(sol)} biclusters")
    return 0


def cmd_aggregate(args):
    sol = read_solution(args.solution)
    if args.method == "sl" and args.k is None and len(sol):
        heights = single_linkage(remove_non_maximal(sol)).heights
        print("merge heights: " + " ".join(str(h) for h in heights))
    out, _, heights = aggregate(sol, _agg_config(args))
    if args.method == "sl" and heights:
        print("merge heights: " + " ".join(str(h) for h in heights))
    write_solution(args.out, out)
    print(f"{len(sol)} -> {len(out)} biclusters")
    return 0


def cmd_outliers(args):
    agg = read_solution(args.solution)
    frags = read_solution(args.fragments)
    if agg.dims != frags.dims:
        raise FormatError(f"dimension mismatch: {agg.dims} vs {frags.dims}")
    out = []
    for b in agg:
        members = [f for f in frags if set(f.rows) & set(b.rows) and set(f.cols) & set(b.cols)]
        out.append(clean(b, members) if members else b)
    write_solution(args.out, agg.replace(out))
    return 0


def cmd_evaluate(args):
    found = read_solution(args.solution)
    ref = read_solution(args.truth)
    if found.dims != ref.dims:
        raise FormatError(f"dimension mismatch: {found.dims} vs {ref.dims}")
    rep = evaluate(found, ref)
    text = ",".join(CSV_FIELDS) + "\n" + ",".join(rep.csv_row()) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_sweep(args):
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    for m in methods:
        if m not in ("sl", "ov", "mc", "none"):
            raise UsageError(f"unknown method {m!r}")
    aggs = tuple(_agg_config(args, m) for m in methods if m != "none")
    matrix = truth = None
    if args.dataset:
        if not args.truth:
            raise UsageError("--dataset needs --truth")
        matrix = _load_matrix(args)
        truth = read_solution(args.truth)
    cfg = SweepConfig(
        sigma_grid=args.sigma_grid, epsilons=args.epsilon, methods=aggs,
        repetitions=args.reps, min_rows=args.min_rows, min_cols=args.min_cols,
        seed=args.seed, synth=None if matrix is not None else SynthSpec(args.kind),
        matrix=matrix, truth=truth,
    )
    rows = run_sweep(cfg)
    means = average_rows(rows)
    out = Path(args.out)
    out.write_text(to_csv(rows, LONG_FIELDS), encoding="utf-8")
    out.with_suffix(".mean.csv").write_text(to_csv(means, MEAN_FIELDS), encoding="utf-8")
    out.with_suffix(".selection.csv").write_text(
        to_csv(select_epsilon(means), ("sigma", "epsilon", "precision")), encoding="utf-8"
    )
    failed = sum(1 for r in rows if r["error"])
    print(f"{len(rows)} rows, {failed} failed")
    return EXIT_PARTIAL if failed else 0


COMMANDS = {
    "generate": cmd_generate,
    "enumerate": cmd_enumerate,
    "aggregate": cmd_aggregate,
    "outliers": cmd_outliers,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"bicagg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FormatError, PlacementError, OSError, ValueError) as exc:
        print(f"bicagg: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
