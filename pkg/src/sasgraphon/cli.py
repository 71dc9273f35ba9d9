"""Command-line interface.

Subcommands:
  generate   sample a graph from a catalog graphon and write an edge list
  estimate   run the sort-and-smooth estimator on an edge list or a
             generated graph and export the estimate as PGM or CSV
  bench      Monte-Carlo MSE benchmark over catalog graphons (CSV/JSON)
  runtime    wall-time scaling curve per estimator

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import graphio
from .graphons import catalog_graphon, sample_graph
from .pipeline import (
    SasConfig,
    apply_permutation,
    block_histogram,
    empirical_degrees,
    kron_upsample,
    sort_permutation,
)
from .tv import AdmmParams, admm_solve

# above this many dense bytes the estimate path switches to bit-packed storage
PACKED_THRESHOLD_BYTES = 1 << 30


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems must exit 1, not argparse's 2
        raise UsageError(message)


def _graphon_id(text: str) -> int:
    value = int(text)
    if not 1 <= value <= 10:
        raise argparse.ArgumentTypeError(f"graphon id must be in 1..10, got {value}")
    return value


def _graphon_or_all(text: str):
    return "all" if text == "all" else _graphon_id(text)


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part]


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--h", type=int, default=None,
                   help="binwidth (default: round(ln n))")
    p.add_argument("--mu", type=float, default=10.0,
                   help="fidelity weight of the TV solver (default 10)")
    p.add_argument("--rho", type=float, default=None,
                   help="ADMM penalty (default 8*mu)")
    p.add_argument("--tol", type=float, default=1e-6,
                   help="relative-change stopping tolerance (default 1e-6)")
    p.add_argument("--max-iters", type=int, default=500,
                   help="ADMM iteration cap (default 500)")


def _sas_config(args) -> SasConfig:
    return SasConfig(
        h=args.h,
        admm=AdmmParams(mu=args.mu, rho=args.rho, max_iters=args.max_iters, tol=args.tol),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sasgraphon", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a graph and write an edge list")
    g.add_argument("--graphon", type=_graphon_id, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)

    e = sub.add_parser("estimate", help="estimate a graphon and export it")
    e.add_argument("--input", default=None,
                   help="edge-list file; omit to generate from --graphon")
    e.add_argument("--graphon", type=_graphon_id, default=None)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--symmetrize", action="store_true",
                   help="treat the edge list as undirected (degrees are row "
                        "sums either way; directed input is not symmetrized "
                        "unless asked)")
    e.add_argument("--out", required=True, help="output .pgm or .csv")
    e.add_argument("--format", choices=("pgm", "csv"), default=None,
                   help="override the format implied by the --out suffix")
    e.add_argument("--out-tv", default=None,
                   help="also export the k x k smoothed block grid")
    e.add_argument("--packed", action="store_true",
                   help="force bit-packed adjacency storage")
    _add_solver_flags(e)

    b = sub.add_parser("bench", help="MSE benchmark over catalog graphons")
    b.add_argument("--graphon", type=_graphon_or_all, default="all")
    b.add_argument("--n", type=int, default=200)
    b.add_argument("--trials", type=int, default=50)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--estimators", default="sas,usvt",
                   help="comma list from sas,usvt,hist (default sas,usvt)")
    b.add_argument("--out", required=True, help="summary .csv or .json")
    b.add_argument("--format", choices=("csv", "json"), default=None)
    b.add_argument("--mu-sweep", type=_float_list, default=None,
                   help="comma list of mu values; rows are labeled "
                        "sas[mu=..] per value")
    _add_solver_flags(b)

    r = sub.add_parser("runtime", help="wall-time scaling curve")
    r.add_argument("--graphon", type=_graphon_id, default=1)
    r.add_argument("--sizes", type=_int_list, required=True,
                   help="comma list of graph sizes, e.g. 200,500,1000")
    r.add_argument("--trials", type=int, default=3)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--estimators", default="sas,usvt")
    r.add_argument("--out", required=True, help="summary .csv or .json")
    r.add_argument("--format", choices=("csv", "json"), default=None)
    _add_solver_flags(r)
    return parser


def _resolve_format(path: str, override, allowed) -> str:
    fmt = override or Path(path).suffix.lstrip(".").lower()
    if fmt not in allowed:
        raise UsageError(f"cannot infer output format from {path!r}; pass --format")
    return fmt


def _cmd_generate(args) -> int:
    adj, _ = sample_graph(catalog_graphon(args.graphon), args.n, args.seed)
    Path(args.out).write_text(graphio.export_edge_list(adj))
    return 0


def _cmd_estimate(args) -> int:
    config = _sas_config(args)
    fmt = _resolve_format(args.out, args.format, ("pgm", "csv"))
    if args.input is None:
        if args.graphon is None or args.n is None:
            raise UsageError("estimate needs --input or both --graphon and --n")
        adj, _ = sample_graph(catalog_graphon(args.graphon), args.n, args.seed)
        n = args.n
        packed = None
    else:
        with open(args.input, "r") as fh:
            edge_list = graphio.parse_edge_list(fh)
        n = edge_list.n
        if args.packed or n * n > PACKED_THRESHOLD_BYTES:
            packed = graphio.PackedAdjacency.from_edges(edge_list, args.symmetrize)
            adj = None
        else:
            adj = graphio.to_adjacency(edge_list, args.symmetrize)
            packed = None

    h = config.resolve_binwidth(n)
    if packed is None:
        perm = sort_permutation(empirical_degrees(adj))
        hist = block_histogram(apply_permutation(adj, perm), h, compensate_diagonal=True)
    else:
        perm = sort_permutation(packed.degrees())
        hist = packed.sorted_block_histogram(perm, h, compensate_diagonal=True)
    w_tv = np.clip(admm_solve(hist, config.admm, boundary=config.boundary).solution, 0.0, 1.0)

    if args.out_tv is not None:
        tv_fmt = _resolve_format(args.out_tv, None, ("pgm", "csv"))
        Path(args.out_tv).write_bytes(graphio.export_grid(w_tv, tv_fmt))
    if fmt == "pgm":
        graphio.write_upsampled_pgm(args.out, w_tv, h, n)
    else:
        Path(args.out).write_bytes(graphio.export_grid(kron_upsample(w_tv, h, n), fmt))
    return 0


def _parse_estimators(text: str) -> list[str]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    for name in names:
        if name not in bench_mod.ESTIMATORS:
            raise UsageError(f"unknown estimator {name!r}; choose from {bench_mod.ESTIMATORS}")
    if not names:
        raise UsageError("need at least one estimator")
    return names


def _write_summary(path: str, fmt_override, rows) -> None:
    fmt = _resolve_format(path, fmt_override, ("csv", "json"))
    text = graphio.summary_csv(rows) if fmt == "csv" else graphio.summary_json(rows)
    Path(path).write_text(text)


def _cmd_bench(args) -> int:
    ids = list(range(1, 11)) if args.graphon == "all" else [args.graphon]
    estimators = _parse_estimators(args.estimators)
    mus = args.mu_sweep if args.mu_sweep else [args.mu]
    rows = []
    for mu in mus:
        config = SasConfig(
            h=args.h,
            admm=AdmmParams(mu=mu, rho=args.rho, max_iters=args.max_iters, tol=args.tol),
        )
        for gid in ids:
            start = time.perf_counter()
            reports = bench_mod.run_trials(
                gid, args.n, args.trials, estimators=estimators,
                base_seed=args.seed, config=config,
            )
            summary = bench_mod.summarize(reports)
            if len(mus) > 1:
                for row in summary:
                    if row.estimator == "sas":
                        row.estimator = f"sas[mu={mu:g}]"
            rows.extend(summary)
            print(
                f"graphon {gid} n={args.n} mu={mu:g} done in "
                f"{time.perf_counter() - start:.1f}s", file=sys.stderr,
            )
    _write_summary(args.out, args.format, rows)
    return 0


def _cmd_runtime(args) -> int:
    rows = bench_mod.runtime_curve(
        args.graphon, args.sizes, trials=args.trials,
        estimators=_parse_estimators(args.estimators),
        base_seed=args.seed, config=_sas_config(args),
    )
    _write_summary(args.out, args.format, rows)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "estimate": _cmd_estimate,
    "bench": _cmd_bench,
    "runtime": _cmd_runtime,
}


def cli_main(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help lands here with code 0
        return 0 if exc.code in (0, None) else 1
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
