"""Command-line interface: ``nbc {generate,centrality,ipr,sweep,table}``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from contextlib import contextmanager
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import DEFAULT_VERDICT_FACTOR, localization_report
from .centrality import degree_centrality, eigenvector_centrality, nonbacktracking_centrality
from .errors import GraphError, NBCentralityError
from .experiments import (
    DESK_N,
    FULL_N,
    format_table,
    load_manifest,
    run_hub_sweep,
    run_table,
    summarize_sweep,
    table_csv,
    write_records_csv,
    write_rows_csv,
)
from .generators import HubModelParams, PowerLawParams, generate_er_plus_hub, generate_powerlaw_config
from .graph import SYMMETRIZE_MODES, parse_edge_list, write_edge_list
from .spectral import CLI_TOL, DEFAULT_MAX_ITERS

logger = logging.getLogger("nbcentrality")

METHODS = {
    "degree": lambda g, a: degree_centrality(g),
    "eigenvector": lambda g, a: eigenvector_centrality(
        g, tol=a.tol, seed=a.seed, max_iters=a.max_iters, largest_component=a.largest_component),
    "nonbacktracking": lambda g, a: nonbacktracking_centrality(
        g, tol=a.tol, seed=a.seed, max_iters=a.max_iters, largest_component=a.largest_component),
}


@contextmanager
def _output(path: Optional[str]):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _read_graph(path: str, symmetrize: str = "union"):
    if path == "-":
        return parse_edge_list(sys.stdin, symmetrize)
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh, symmetrize)


def _seeds(text: str) -> list[int]:
    if "," in text:
        return [int(s) for s in text.split(",") if s.strip()]
    return list(range(int(text)))


def _json_default(obj):
    # numpy scalars and arrays; anything else falls back to its string form
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


# -- subcommands -------------------------------------------------------------------------


def cmd_generate(args) -> int:
    n = args.nodes or DESK_N
    if args.model == "er-hub":
        graph = generate_er_plus_hub(HubModelParams(n, args.mean_degree, args.hub_degree, args.seed))
    else:
        graph = generate_powerlaw_config(PowerLawParams(n, args.alpha, args.kmin, args.seed))
    with _output(args.out) as fh:
        write_edge_list(graph, fh)
    logger.info("wrote graph with n=%d m=%d", graph.n, graph.m)
    return 0


def _metadata(args, results) -> dict:
    meta = {"tol": args.tol, "seed": args.seed, "max_iters": args.max_iters,
            "largest_component": args.largest_component}
    for name, cv in results.items():
        if name == "degree":
            continue
        meta[f"{name}_eigenvalue"] = cv.eigenvalue
        meta[f"{name}_residual"] = cv.residual
        meta[f"{name}_iterations"] = cv.iterations
        meta[f"{name}_converged"] = cv.converged
    return meta


def cmd_centrality(args) -> int:
    graph = _read_graph(args.graph, args.symmetrize)
    names = list(METHODS) if args.method == "all" else [args.method]
    results = {name: METHODS[name](graph, args) for name in names}
    meta = _metadata(args, results)
    meta.update(n=graph.n, m=graph.m, graph_sha256=graph.digest)
    deg = graph.degrees
    with _output(args.out) as fh:
        if args.format == "json":
            nodes = []
            for i in range(graph.n):
                rec = {"node": graph.label(i), "degree": int(deg[i])}
                for name, cv in results.items():
                    rec["degree_centrality" if name == "degree" else name] = float(cv.scores[i])
                nodes.append(rec)
            json.dump({"metadata": meta, "nodes": nodes}, fh, indent=1)
            fh.write("\n")
        else:
            for key, value in meta.items():
                fh.write(f"# {key}={value}\n")
            writer = csv.writer(fh, lineterminator="\n")
            cols = ["node", "degree"] + ["degree_centrality" if n == "degree" else n for n in names]
            writer.writerow(cols)
            for i in range(graph.n):
                writer.writerow([graph.label(i), int(deg[i])] + [repr(float(results[n].scores[i])) for n in names])
    return 0


def cmd_ipr(args) -> int:
    graph = _read_graph(args.graph, args.symmetrize)
    hub = None
    if args.hub_node is not None:
        labels = [str(graph.label(i)) for i in range(graph.n)]
        if args.hub_node not in labels:
            raise GraphError(f"hub node {args.hub_node!r} not in graph")
        hub = labels.index(args.hub_node)
    cv = METHODS[args.method](graph, args)
    report = localization_report(graph, cv, hub_node=hub, threshold_factor=args.threshold_factor)
    out = report.to_dict()
    out["hub_label"] = str(graph.label(report.hub_node))
    out["converged"] = cv.converged
    out["residual"] = cv.residual
    print(json.dumps(out, indent=1, default=_json_default))
    return 0


def cmd_sweep(args) -> int:
    n = args.nodes or (FULL_N if args.full else DESK_N)
    d_values = np.arange(args.d_from, args.d_to + 0.5 * args.d_step, args.d_step).round(10).tolist()
    records = run_hub_sweep(args.mean_degree, d_values, n=n, seeds=_seeds(args.seeds), tol=args.tol,
                            max_iters=args.max_iters, workers=args.workers, deterministic=args.deterministic)
    with _output(args.out) as fh:
        write_records_csv(records, fh)
    if args.summary:
        write_rows_csv(summarize_sweep(records), args.summary)
    failed = sum(not r.ok for r in records)
    if failed:
        logger.warning("%d of %d sweep points failed; see the error column", failed, len(records))
    return 0


def cmd_table(args) -> int:
    entries = load_manifest(args.manifest)
    if args.only:
        entries = [e for e in entries if e.name in args.only]
    rows = run_table(entries, tol=args.tol, seeds=_seeds(args.seeds), full=args.full,
                     max_iters=args.max_iters, workers=args.workers)
    print(format_table(rows))
    if args.out:
        with _output(args.out) as fh:
            fh.write(table_csv(rows))
    return 0


# -- parser ---------------------------------------------------------------------------------


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=CLI_TOL, help="relative residual tolerance")
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--seed", type=int, default=0, help="start-vector seed")


def _symmetrize_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--symmetrize", choices=SYMMETRIZE_MODES, default="union",
                   help="directed input: keep an edge listed in either direction, or only reciprocated pairs")


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    parser = argparse.ArgumentParser(prog="nbc", description="Eigenvector and nonbacktracking centrality, "
                                     "localization diagnostics and reproduction sweeps.", formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph as an edge list", formatter_class=fmt)
    p.add_argument("model", choices=["er-hub", "powerlaw"])
    p.add_argument("--nodes", type=int, help=f"node count (default {DESK_N})")
    p.add_argument("--mean-degree", type=float, default=10.0)
    p.add_argument("--hub-degree", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=2.9)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("centrality", help="score every node", formatter_class=fmt)
    p.add_argument("method", choices=["eigenvector", "nonbacktracking", "degree", "all"])
    p.add_argument("--graph", required=True, help="edge-list path, or - for stdin")
    _solver_flags(p)
    p.add_argument("--largest-component", action="store_true",
                   help="score only the largest component (others get 0) instead of failing")
    _symmetrize_flag(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("ipr", help="inverse participation ratio and localization verdict", formatter_class=fmt)
    p.add_argument("--graph", required=True)
    p.add_argument("--method", choices=["eigenvector", "nonbacktracking", "degree"], default="eigenvector")
    _solver_flags(p)
    p.add_argument("--largest-component", action="store_true")
    _symmetrize_flag(p)
    p.add_argument("--hub-node", help="label of the hub node as written in the edge list (default: max degree)")
    p.add_argument("--threshold-factor", type=float, default=DEFAULT_VERDICT_FACTOR)
    p.set_defaults(func=cmd_ipr)

    p = sub.add_parser("sweep", help="parameter sweeps", formatter_class=fmt)
    p.add_argument("kind", choices=["hub"])
    p.add_argument("--mean-degree", type=float, default=10.0)
    p.add_argument("--d-from", type=float, default=70.0)
    p.add_argument("--d-to", type=float, default=150.0)
    p.add_argument("--d-step", type=float, default=10.0)
    p.add_argument("--nodes", type=int, help=f"node count (default {DESK_N}, or {FULL_N} with --full)")
    p.add_argument("--full", action="store_true", help="full scale (n = 1000001)")
    p.add_argument("--seeds", default="5", help="seed count N (seeds 0..N-1) or a comma list")
    p.add_argument("--workers", type=int, default=1, help="parallel sweep points (capped by NBC_THREADS)")
    p.add_argument("--tol", type=float, default=CLI_TOL)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--deterministic", action="store_true", help="omit wall-clock timings for byte-stable CSV")
    p.add_argument("--summary", help="also write per-d ensemble summary CSV here")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("table", help="IPR comparison table from a manifest", formatter_class=fmt)
    p.add_argument("--manifest", help="JSON manifest (default: the bundled one)")
    p.add_argument("--full", action="store_true", help="full-scale synthetic networks")
    p.add_argument("--seeds", default="1")
    p.add_argument("--only", action="append", help="restrict to the named network (repeatable)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tol", type=float, default=CLI_TOL)
    p.add_argument("--max-iters", type=int, default=DEFAULT_MAX_ITERS)
    p.add_argument("--out", help="write rows as CSV here")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NBCentralityError as exc:
        print(f"nbc: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"nbc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
