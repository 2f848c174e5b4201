"""Command-line entry point: ``metgraph {params,synth,sample,reconstruct,risk}``.

Exit codes: 0 success, 1 infeasible parameters, 2 I/O, parse or usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import cli_io
from .params import (
    InfeasibleParameters,
    ShapeParams,
    auto_delta,
    check_reconstruction_conditions,
    f_bound,
    max_feasible_delta,
)
from .reconstruct import ReconstructionConfig, reconstruct
from .synth import EmbeddedGraph, TubeModel, grid_sample_dense, named_graph, sample_tube

EXIT_OK, EXIT_INFEASIBLE, EXIT_IO = 0, 1, 2


def _emit(obj) -> None:
    print(json.dumps(cli_io.round_floats(obj), indent=2))


def _add_shape_flags(p: argparse.ArgumentParser, required: bool) -> None:
    for name in ("b", "alpha", "tau", "xi"):
        p.add_argument(f"--{name}", type=float, required=required)
    p.add_argument("--sigma", type=float, default=0.0)


def _shape(args) -> ShapeParams:
    return ShapeParams(args.b, args.alpha, args.tau, args.xi, args.sigma)


def cmd_params(args) -> int:
    p = _shape(args)
    edge_length = p.b if args.edge_budget == "b" else None
    delta = args.delta if args.delta is not None else auto_delta(p)
    rep = check_reconstruction_conditions(delta, p)
    out = {"params": p.to_dict(), "edge_budget": args.edge_budget, **rep.to_dict()}
    if edge_length is not None:
        f = f_bound(p, edge_length=edge_length)
        out["f_value"] = f
        out["cond10_ok"] = 0 < delta < f
        out["max_delta"] = max_feasible_delta(p, edge_length=edge_length)
    _emit(out)
    feasible = out["cond9_ok"] and out["cond10_ok"] and (p.sigma == 0 or out["cond15_ok"])
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_synth(args) -> int:
    kw = {k: v for k, v in vars(args).items()
          if k in ("alpha", "tau", "value", "pendant", "length", "arm", "radius", "stick") and v is not None}
    g = named_graph(args.name, dim=args.dim, **kw)
    g.save(args.output)
    _emit({"name": g.name, "output": args.output, "total_length": g.total_length,
           "params": g.params.to_dict() if g.params else None, "topology": g.topology().to_dict()})
    return EXIT_OK


def cmd_sample(args) -> int:
    g = EmbeddedGraph.load(args.graph)
    model = TubeModel(g, args.sigma)
    if args.grid:
        if args.spacing is None:
            raise argparse.ArgumentTypeError("--grid needs --spacing")
        cloud = grid_sample_dense(model, args.spacing)
    else:
        if args.n is None:
            raise argparse.ArgumentTypeError("random sampling needs --n")
        cloud = sample_tube(model, args.n, args.seed)
    cli_io.write_cloud(cloud, args.output)
    _emit({"points": len(cloud), "dim": cloud.dim, "output": args.output})
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cloud = cli_io.read_cloud(args.cloud, args.format)
    if args.auto:
        p = _shape(args)
        delta = args.delta if args.delta is not None else auto_delta(p)
        cfg = ReconstructionConfig.from_params(delta, p)
    else:
        if None in (args.r, args.p11, args.delta):
            raise argparse.ArgumentTypeError("give --r, --p11 and --delta, or --auto with shape flags")
        cfg = ReconstructionConfig(args.r, args.p11, args.delta)
    rep = reconstruct(cloud, cfg)
    cli_io.write_graph(rep.graph, args.output)
    if args.dot:
        cli_io.write_graph(rep.graph, args.dot, "dot")
    if args.labels:
        cli_io.write_labeled_points(cloud, rep.labels, rep.degrees, args.labels)
    _emit({
        "r": cfg.r, "p11": cfg.p11, "delta": cfg.delta, "points": len(cloud),
        "n_vertices": rep.graph.n_vertices, "n_edges": rep.graph.n_edges,
        "edges": [list(e) for e in rep.graph.edges],
        "diagnostics": [{"kind": d.kind, "vertex_components": list(d.vertex_components), "size": d.size}
                        for d in rep.diagnostics],
        "flagged": rep.flagged,
    })
    return EXIT_OK


def cmd_risk(args) -> int:
    from .experiments import estimate_risk, load_spec, write_results_csv

    spec = load_spec(args.spec)
    results = estimate_risk(spec)
    write_results_csv(results, args.output)
    for r in results:
        print(",".join(cli_io.fmt(v) for v in r.row().values()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metgraph", description="Metric graph reconstruction from point samples.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="evaluate radii, bounds and feasibility conditions")
    _add_shape_flags(p, required=True)
    p.add_argument("--delta", type=float, help="scale to check (default: automatic choice)")
    p.add_argument("--edge-budget", choices=("min", "b"), default="min",
                   help="'min' uses min(b, alpha*tau) in f; 'b' uses b alone")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("synth", help="write a generated ground-truth graph as JSON")
    p.add_argument("name", help="worst-case, g1..g8, segment, star, lollipop")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--dim", type=int, default=2)
    for flag in ("alpha", "tau", "value", "pendant", "length", "arm", "radius", "stick"):
        p.add_argument(f"--{flag}", type=float)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sample", help="sample a graph file into a cloud CSV")
    p.add_argument("graph")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", action="store_true", help="deterministic dense sample instead of random")
    p.add_argument("--spacing", type=float)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reconstruct", help="reconstruct a pseudograph from a cloud file")
    p.add_argument("cloud")
    p.add_argument("-o", "--output", required=True, help="graph output (.json or .dot)")
    p.add_argument("--format", choices=("csv", "swc"))
    p.add_argument("--dot", help="additional DOT output path")
    p.add_argument("--labels", help="labeled-points CSV output path")
    p.add_argument("--r", type=float)
    p.add_argument("--p11", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--auto", action="store_true", help="derive delta, r and p11 from shape flags")
    _add_shape_flags(p, required=False)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("risk", help="run a Monte Carlo experiment spec (JSON)")
    p.add_argument("spec")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_risk)
    return ap


def _infeasible_input(args) -> bool:
    vals = [getattr(args, k, None) for k in ("delta", "r", "p11")]
    return any(v is not None and not (v > 0 and math.isfinite(v)) for v in vals)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_IO if e.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if _infeasible_input(args):
        print("error: delta, r and p11 must be positive and finite", file=sys.stderr)
        return EXIT_INFEASIBLE
    if args.command == "reconstruct" and args.auto and None in (args.b, args.alpha, args.tau, args.xi):
        print("error: --auto needs --b, --alpha, --tau and --xi", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except InfeasibleParameters as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, ValueError, KeyError, argparse.ArgumentTypeError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


cli_main = main

if __name__ == "__main__":
    sys.exit(main())
