"""Command-line entry point: ``misinfonet <subcommand> ...``.

Exit codes: 0 success, 1 usage or config error, 2 runtime error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .classifier import classify
from .epidemic import EpidemicParams, run_ensemble, simulate_sir
from .generators import KINDS, GeneratorParams
from .graph import GraphError, degree_histogram, read_edge_list, to_edge_list
from .harness import (
    DEFAULT_SWEEP,
    ConfigError,
    emit_plot_data,
    histogram_csv,
    load_config,
    run_experiment,
)
from .immunization import compare_immunization
from .percolation import high_clustering_cluster, percolation_sweep, percolation_threshold, sweep_csv

EXIT_USAGE, EXIT_RUNTIME = 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message} (see --help)\n")


def _add_common(p: argparse.ArgumentParser, graph_input: bool = True) -> None:
    p.add_argument("--seed", type=int, default=0 if graph_input else None,
                   help="master seed for every random choice")
    p.add_argument("--output-dir", type=Path, help="write result files here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    if graph_input:
        g = p.add_argument_group("graph input (an edge list or a generator)")
        g.add_argument("--input", type=Path, help="edge-list file")
        g.add_argument("--kind", choices=KINDS)
        g.add_argument("--n", type=int)
        g.add_argument("--p", type=float, help="ER edge probability or WS rewiring probability")
        g.add_argument("--mean-degree", type=float, help="ER mean degree (sets p = <k>/(n-1))")
        g.add_argument("--k", type=int, help="WS ring degree")
        g.add_argument("--m", type=int, help="BA edges per new node")


def _nodes(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"node list must be comma-separated integers: {text!r}") from None


def _floats(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"threshold list must be comma-separated numbers: {text!r}") from None


def _graph(args):
    if args.input is not None:
        if args.kind is not None:
            raise UsageError("give either --input or --kind, not both")
        if not args.input.exists():
            raise FileNotFoundError(f"edge list not found: {args.input}")
        return read_edge_list(args.input)
    if args.kind is None:
        raise UsageError("a graph is required: pass --input FILE or --kind with its parameters")
    if args.n is None:
        raise UsageError("--n is required with --kind")
    p = args.p
    if args.mean_degree is not None:
        if args.kind != "erdos-renyi":
            raise UsageError("--mean-degree only applies to erdos-renyi")
        p = args.mean_degree / (args.n - 1)
    try:
        params = GeneratorParams(args.kind, args.n, p=p, k=args.k, m=args.m, seed=args.seed)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    return params.build()


def _emit(args, name: str, text: str) -> None:
    if args.output_dir is None:
        sys.stdout.write(text)
        return
    args.output_dir.mkdir(parents=True, exist_ok=True)
    path = args.output_dir / name
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_generate(args) -> None:
    g = _graph(args)
    _emit(args, "graph.edges", to_edge_list(g))


def cmd_classify(args) -> None:
    rep = classify(g=_graph(args), seed=args.seed, path_sample_sources=args.sample_sources)
    if args.format == "json":
        _emit(args, "topology_report.json", rep.to_json())
    else:
        _emit(args, "topology_report.txt", rep.to_text())


def cmd_histogram(args) -> None:
    hist = degree_histogram(_graph(args))
    if args.format == "json":
        _emit(args, "degree_histogram.json", _dump({str(k): c for k, c in hist.counts.items()}))
    elif args.output_dir is not None:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        print(f"wrote {emit_plot_data(hist, args.output_dir / 'degree_histogram.csv')}")
    else:
        sys.stdout.write(histogram_csv(hist))


def _epidemic_params(args, g) -> EpidemicParams:
    sources = _nodes(args.sources) or [0]
    try:
        params = EpidemicParams(args.beta, args.gamma, frozenset(sources), frozenset(_nodes(args.immunize)),
                                args.max_steps, args.seed)
        params.check_nodes(g.node_count)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    return params


def cmd_simulate(args) -> None:
    g = _graph(args)
    params = _epidemic_params(args, g)
    if args.runs > 1:
        summ = run_ensemble(g, params, args.runs)
        _emit(args, "ensemble_summary.json", _dump(summ.as_dict()))
        return
    tr = simulate_sir(g, params)
    if args.format == "json":
        _emit(args, "simulation.json", _dump({
            "steps": tr.steps.tolist(),
            "infections": [[t, g.labels[a], g.labels[b]] for t, a, b in tr.infections.tolist()],
            "final_outbreak_size": tr.final_outbreak_size,
            "peak_infected": list(tr.peak_infected),
        }))
    else:
        _emit(args, "sir_trace.csv", tr.trace_csv())
        if args.output_dir is not None:
            _emit(args, "sir_infections.csv", tr.infections_csv(g.labels))


def cmd_percolate(args) -> None:
    g = _graph(args)
    if args.theta is not None:
        res = high_clustering_cluster(g, args.theta)
        _emit(args, "percolation_cluster.txt", "".join(f"{g.labels[v]}\n" for v in res.giant.tolist()))
        return
    thetas = _floats(args.thetas) if args.thetas else list(DEFAULT_SWEEP)
    try:
        pts = percolation_sweep(g, thetas)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit(args, "percolation_sweep.json", _dump({
            "threshold": percolation_threshold(pts, args.giant_cut),
            "points": [{"theta": p.theta, "members": p.members, "giant_fraction": p.giant_fraction} for p in pts],
        }))
    else:
        _emit(args, "percolation_sweep.csv", sweep_csv(pts))


def cmd_compare(args) -> None:
    g = _graph(args)
    res = compare_immunization(
        g, args.beta, args.gamma, cluster_fraction=args.cluster_fraction,
        sources=args.infection_sources, runs=args.runs, seed=args.seed, max_steps=args.max_steps,
    )
    if args.format == "json":
        _emit(args, "immunization_comparison.json", res.to_json())
    else:
        _emit(args, "immunization_comparison.csv", res.to_csv())


def cmd_experiment(args) -> None:
    if not args.config.exists():
        raise FileNotFoundError(f"config not found: {args.config}")
    cfg = load_config(args.config)
    if args.output_dir is not None:
        cfg.output_dir = str(args.output_dir.resolve())
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.format != "csv":
        cfg.format = args.format
    run_experiment(cfg, base_dir=args.config.resolve().parent)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="misinfonet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("classify", help="topology report (degree law + clustering ratio)")
    _add_common(p)
    p.add_argument("--sample-sources", type=int, help="estimate path length from this many BFS sources")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("histogram", help="degree histogram as k,count")
    _add_common(p)
    p.set_defaults(func=cmd_histogram)

    for name, func, helptext in (
        ("simulate", cmd_simulate, "one SIR run (or an ensemble with --runs)"),
        ("compare-immunization", cmd_compare, "none vs percolation cluster vs random immunization"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_common(p)
        p.add_argument("--beta", type=float, default=0.1)
        p.add_argument("--gamma", type=float, default=0.2)
        p.add_argument("--max-steps", type=int, default=1000)
        p.set_defaults(func=func)
        if name == "simulate":
            p.add_argument("--sources", help="comma-separated initially infected node ids (default 0)")
            p.add_argument("--immunize", help="comma-separated node ids in R at t=0")
            p.add_argument("--runs", type=int, default=1)
        else:
            p.add_argument("--runs", type=int, default=30)
            p.add_argument("--infection-sources", type=int, default=10)
            p.add_argument("--cluster-fraction", type=float, default=0.05)

    p = sub.add_parser("percolate", help="threshold sweep or one percolation cluster")
    _add_common(p)
    p.add_argument("--thetas", help="comma-separated ascending thresholds (default 0,0.1,...,1)")
    p.add_argument("--theta", type=float, help="export the percolation cluster at this threshold")
    p.add_argument("--giant-cut", type=float, default=0.01)
    p.set_defaults(func=cmd_percolate)

    p = sub.add_parser("experiment", help="run a YAML experiment config")
    _add_common(p, graph_input=False)
    p.add_argument("config", type=Path)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"misinfonet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, GraphError, ValueError) as exc:
        print(f"misinfonet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return 0


if __name__ == "__main__":
    sys.exit(main())
