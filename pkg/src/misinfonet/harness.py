"""Config-driven experiments and plot-ready data files.

An experiment config is a flat YAML document.  A minimal one::

    graph: barabasi-albert
    n: 5000
    m: 3
    actions: [percolate, immunization-compare]
    runs: 30
    output_dir: results
    master_seed: 7

Every random choice (graph, infection seeds, random immunization sets,
path-length sampling) is derived from ``master_seed``, so two runs of the
same config write byte-identical files.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .classifier import classify
from .epidemic import EpidemicParams, EpidemicTrace, simulate_sir
from .generators import KINDS, GeneratorParams, make_rng
from .graph import DegreeHistogram, Graph, degree_histogram, read_edge_list
from .immunization import compare_immunization
from .percolation import percolation_sweep, percolation_threshold, sweep_csv

ACTIONS = ("classify", "histogram", "simulate", "percolate", "immunization-compare")
FORMATS = ("csv", "json")
EDGE_LIST = "edge-list"
DEFAULT_SWEEP = tuple(round(0.1 * i, 1) for i in range(11))


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"config field {field_name!r}: {message}")


def derive_seed(master_seed: int, stream: int) -> int:
    """64-bit seed for an independent stream of ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed) % 2**64, int(stream)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


_GRAPH_STREAM, _SIM_STREAM, _COMPARE_STREAM, _PATH_STREAM = range(4)


@dataclass
class ExperimentConfig:
    actions: list
    graph: str = EDGE_LIST
    edge_list: Optional[str] = None
    n: Optional[int] = None
    p: Optional[float] = None
    k: Optional[int] = None
    m: Optional[int] = None
    beta: float = 0.1
    gamma: float = 0.2
    initial_infected: list = field(default_factory=list)
    immunized: list = field(default_factory=list)
    max_steps: int = 1000
    sweep: list = field(default_factory=lambda: list(DEFAULT_SWEEP))
    runs: int = 30
    sources: int = 10
    cluster_fraction: float = 0.05
    output_dir: str = "results"
    master_seed: int = 0
    format: str = "csv"

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("<document>", "expected a mapping of keys to values")
        known = {f.name for f in fields(cls)}
        for key in data:
            if key not in known:
                raise ConfigError(str(key), "unknown key")
        if "actions" not in data:
            raise ConfigError("actions", "missing")
        cfg = cls(**{k: v for k, v in data.items() if v is not None})
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if not isinstance(self.actions, list) or not self.actions:
            raise ConfigError("actions", "need a non-empty list")
        for a in self.actions:
            if a not in ACTIONS:
                raise ConfigError("actions", f"unknown action {a!r}; choose from {', '.join(ACTIONS)}")
        if self.graph == EDGE_LIST:
            if not self.edge_list:
                raise ConfigError("edge_list", "required when graph is edge-list")
        elif self.graph in KINDS:
            for name in ("n", "k", "m"):
                val = getattr(self, name)
                if val is not None and (not isinstance(val, int) or isinstance(val, bool)):
                    raise ConfigError(name, "must be an integer")
            if self.n is None:
                raise ConfigError("n", f"required for {self.graph}")
            if self.p is not None and not isinstance(self.p, (int, float)):
                raise ConfigError("p", "must be a number")
            try:
                self.generator_params()
            except (ValueError, TypeError) as exc:
                raise ConfigError("graph", str(exc)) from None
        else:
            raise ConfigError("graph", f"must be {EDGE_LIST} or one of {', '.join(KINDS)}")
        for name in ("beta", "gamma", "cluster_fraction"):
            val = getattr(self, name)
            if not isinstance(val, (int, float)) or not 0.0 <= val <= 1.0:
                raise ConfigError(name, "must be a number in [0, 1]")
        for name in ("max_steps", "runs", "sources"):
            val = getattr(self, name)
            if not isinstance(val, int) or isinstance(val, bool) or val < 1:
                raise ConfigError(name, "must be a positive integer")
        if not isinstance(self.master_seed, int) or isinstance(self.master_seed, bool):
            raise ConfigError("master_seed", "must be an integer")
        for name in ("initial_infected", "immunized"):
            val = getattr(self, name)
            if not isinstance(val, list) or not all(isinstance(v, int) for v in val):
                raise ConfigError(name, "must be a list of node ids")
        if set(self.initial_infected) & set(self.immunized):
            raise ConfigError("immunized", "overlaps initial_infected")
        if not isinstance(self.sweep, list) or not self.sweep:
            raise ConfigError("sweep", "need a non-empty list of thresholds")
        if any(not isinstance(t, (int, float)) or not 0 <= t <= 1 for t in self.sweep):
            raise ConfigError("sweep", "thresholds must lie in [0, 1]")
        if any(b < a for a, b in zip(self.sweep, self.sweep[1:])):
            raise ConfigError("sweep", "thresholds must be ascending")
        if self.format not in FORMATS:
            raise ConfigError("format", f"must be one of {', '.join(FORMATS)}")

    def generator_params(self) -> GeneratorParams:
        return GeneratorParams(
            kind=self.graph,
            n=self.n if self.n is not None else 0,
            p=self.p,
            k=self.k,
            m=self.m,
            seed=derive_seed(self.master_seed, _GRAPH_STREAM),
        )

    def to_mapping(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self) if getattr(self, f.name) is not None}

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_mapping(), sort_keys=False, default_flow_style=None)


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<document>", f"not valid YAML ({exc.__class__.__name__})") from None
    return ExperimentConfig.from_mapping(data)


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def load_graph(cfg: ExperimentConfig, base_dir: Path | None = None) -> Graph:
    if cfg.graph == EDGE_LIST:
        path = Path(cfg.edge_list)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        if not path.exists():
            raise FileNotFoundError(f"edge list not found: {path}")
        return read_edge_list(path)
    return cfg.generator_params().build()


# --------------------------------------------------------------------------
# plot-ready outputs
# --------------------------------------------------------------------------

def histogram_csv(hist: DegreeHistogram) -> str:
    return "k,count\n" + hist.to_csv()


def emit_plot_data(data, path) -> Path:
    """Write a degree histogram (``k,count``) or SIR trace (``t,S,I,R``) as CSV."""
    if isinstance(data, DegreeHistogram):
        if not data.counts:
            raise ValueError("cannot emit an empty histogram")
        text = histogram_csv(data)
    elif isinstance(data, EpidemicTrace):
        if len(data.steps) == 0:
            raise ValueError("cannot emit an empty trace")
        text = data.trace_csv()
    else:
        raise TypeError(f"no plot format for {type(data).__name__}")
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _pick_initial(cfg: ExperimentConfig, g: Graph) -> frozenset:
    if cfg.initial_infected:
        return frozenset(cfg.initial_infected)
    rng = make_rng(derive_seed(cfg.master_seed, _SIM_STREAM))
    candidates = np.setdiff1d(np.arange(g.node_count), np.asarray(cfg.immunized, dtype=np.int64))
    return frozenset([int(rng.choice(candidates))])


def _run_action(action: str, cfg: ExperimentConfig, g: Graph, out: Path) -> tuple[Path, str]:
    as_json = cfg.format == "json"
    if action == "classify":
        rep = classify(g, seed=derive_seed(cfg.master_seed, _PATH_STREAM))
        path = out / ("topology_report.json" if as_json else "topology_report.txt")
        path.write_text(rep.to_json() if as_json else rep.to_text(), encoding="utf-8")
        return path, f"classify: {rep.label} ({rep.evidence})"
    if action == "histogram":
        hist = degree_histogram(g)
        if as_json:
            path = out / "degree_histogram.json"
            path.write_text(_dump_json({str(k): c for k, c in hist.counts.items()}), encoding="utf-8")
        else:
            path = emit_plot_data(hist, out / "degree_histogram.csv")
        return path, f"histogram: {len(hist.counts)} distinct degrees, max {max(hist.counts, default=0)}"
    if action == "simulate":
        params = EpidemicParams(
            cfg.beta, cfg.gamma, _pick_initial(cfg, g), frozenset(cfg.immunized),
            cfg.max_steps, derive_seed(cfg.master_seed, _SIM_STREAM),
        )
        tr = simulate_sir(g, params)
        if as_json:
            path = out / "simulation.json"
            path.write_text(_dump_json({
                "steps": tr.steps.tolist(),
                "infections": tr.infections.tolist(),
                "final_outbreak_size": tr.final_outbreak_size,
                "peak_infected": list(tr.peak_infected),
            }), encoding="utf-8")
        else:
            path = emit_plot_data(tr, out / "sir_trace.csv")
        t, h = tr.peak_infected
        return path, f"simulate: outbreak {tr.final_outbreak_size}, peak {h} at t={t}"
    if action == "percolate":
        pts = percolation_sweep(g, cfg.sweep)
        thr = percolation_threshold(pts)
        if as_json:
            path = out / "percolation_sweep.json"
            path.write_text(_dump_json({
                "threshold": thr,
                "points": [{"theta": p.theta, "members": p.members, "giant_fraction": p.giant_fraction} for p in pts],
            }), encoding="utf-8")
        else:
            path = out / "percolation_sweep.csv"
            path.write_text(sweep_csv(pts), encoding="utf-8")
        return path, f"percolate: {len(pts)} thresholds, giant fraction drops below 1% at theta={thr}"
    if action == "immunization-compare":
        res = compare_immunization(
            g, cfg.beta, cfg.gamma,
            cluster_fraction=cfg.cluster_fraction, sources=cfg.sources, runs=cfg.runs,
            seed=derive_seed(cfg.master_seed, _COMPARE_STREAM), max_steps=cfg.max_steps,
        )
        path = out / ("immunization_comparison.json" if as_json else "immunization_comparison.csv")
        path.write_text(res.to_json() if as_json else res.to_csv(), encoding="utf-8")
        ranking = ", ".join(f"{name}={res.mean(name):.1f}" for name in res.ranking)
        return path, f"immunization-compare: {ranking}"
    raise ConfigError("actions", f"unknown action {action!r}")


def run_experiment(cfg: ExperimentConfig, base_dir: Path | None = None, echo=print) -> list[Path]:
    """Run the configured actions in order; returns the files written."""
    g = load_graph(cfg, base_dir)
    for v in list(cfg.initial_infected) + list(cfg.immunized):
        if not 0 <= v < g.node_count:
            raise ConfigError("initial_infected" if v in cfg.initial_infected else "immunized",
                              f"node {v} outside 0..{g.node_count - 1}")
    out = Path(cfg.output_dir)
    if base_dir is not None and not out.is_absolute():
        out = base_dir / out
    os.makedirs(out, exist_ok=True)
    echo(f"graph: {g.node_count} nodes, {g.edge_count} edges")
    written = []
    for action in cfg.actions:
        path, line = _run_action(action, cfg, g, out)
        written.append(path)
        echo(f"{line} -> {path}")
    return written
