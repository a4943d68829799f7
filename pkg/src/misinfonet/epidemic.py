"""Discrete-time stochastic SIR spread on a graph.

Each step runs in two phases.  First every infected node tries to infect each
susceptible neighbor with probability ``beta``; a node hit by several
spreaders changes state once and the lowest-id successful spreader is logged
as its infector.  Then every node that was infected at the start of the step
recovers with probability ``gamma``.  Nodes infected during a step start
spreading on the next one.  Recovered and immunized nodes are absorbing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .graph import Graph, GraphError

SUSCEPTIBLE, INFECTED, RECOVERED = 0, 1, 2


class EpidemicError(GraphError):
    pass


@dataclass(frozen=True)
class EpidemicParams:
    beta: float
    gamma: float
    initial_infected: frozenset
    immunized: frozenset = frozenset()
    max_steps: int = 1000
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "initial_infected", frozenset(int(v) for v in self.initial_infected))
        object.__setattr__(self, "immunized", frozenset(int(v) for v in self.immunized))
        for name in ("beta", "gamma"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise EpidemicError(f"{name} must lie in [0, 1], got {val}")
        if self.max_steps < 1:
            raise EpidemicError("max_steps must be positive")
        overlap = self.initial_infected & self.immunized
        if overlap:
            raise EpidemicError(f"nodes both infected and immunized: {sorted(overlap)[:5]}")

    def with_immunized(self, nodes: Iterable[int]) -> "EpidemicParams":
        return EpidemicParams(self.beta, self.gamma, self.initial_infected, frozenset(nodes), self.max_steps, self.seed)

    def with_seed(self, seed: int) -> "EpidemicParams":
        return EpidemicParams(self.beta, self.gamma, self.initial_infected, self.immunized, self.max_steps, seed)

    def check_nodes(self, n: int) -> None:
        for name in ("initial_infected", "immunized"):
            bad = [v for v in getattr(self, name) if not 0 <= v < n]
            if bad:
                raise EpidemicError(f"{name} contains node ids outside 0..{n - 1}: {bad[:5]}")


@dataclass
class EpidemicTrace:
    """Compartment counts per step and the infection log of one run.

    ``steps`` rows are ``(t, S, I, R)`` starting at t = 0; ``infections`` rows
    are ``(t, infector, infectee)``.
    """

    steps: np.ndarray
    infections: np.ndarray
    initial_infected: int

    @property
    def final_outbreak_size(self) -> int:
        return self.initial_infected + len(self.infections)

    @property
    def peak_infected(self) -> tuple[int, int]:
        i = int(np.argmax(self.steps[:, 2]))
        return int(self.steps[i, 0]), int(self.steps[i, 2])

    def trace_csv(self) -> str:
        return "t,S,I,R\n" + "".join(f"{t},{s},{i},{r}\n" for t, s, i, r in self.steps.tolist())

    def infections_csv(self, labels: tuple | None = None) -> str:
        rows = self.infections.tolist()
        if labels is not None:
            rows = [(t, labels[a], labels[b]) for t, a, b in rows]
        return "t,infector,infectee\n" + "".join(f"{t},{a},{b}\n" for t, a, b in rows)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed)
    return np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64))


def simulate_sir(g: Graph, params: EpidemicParams, *, rng_seed=None) -> EpidemicTrace:
    """One seeded SIR run; identical inputs give identical traces.

    ``rng_seed`` (an int or ``SeedSequence``) overrides ``params.seed``.
    """
    n = g.node_count
    params.check_nodes(n)
    rng = _rng(params.seed if rng_seed is None else rng_seed)
    indptr, indices = g.indptr, g.indices
    deg = g.degrees

    state = np.zeros(n, dtype=np.int8)
    state[list(params.immunized)] = RECOVERED
    state[list(params.initial_infected)] = INFECTED
    counts = np.bincount(state, minlength=3).astype(np.int64)

    steps = [(0, *counts.tolist())]
    infections = []
    t = 0
    while counts[INFECTED] > 0 and t < params.max_steps:
        t += 1
        spreaders = np.flatnonzero(state == INFECTED)
        k = deg[spreaders]
        total = int(k.sum())
        new = np.zeros(0, dtype=np.int64)
        if total:
            # flattened (spreader, neighbor) pairs in CSR order
            offsets = np.repeat(indptr[spreaders] - np.cumsum(k) + k, k) + np.arange(total)
            src = np.repeat(spreaders, k)
            dst = indices[offsets]
            hit = (rng.random(total) < params.beta) & (state[dst] == SUSCEPTIBLE)
            if hit.any():
                src, dst = src[hit], dst[hit]
                # src ascends, so the first hit on each target is its lowest-id infector
                new, first = np.unique(dst, return_index=True)
                infections.append(np.column_stack([np.full(len(new), t), src[first], new]))
        recover = spreaders[rng.random(len(spreaders)) < params.gamma]
        state[recover] = RECOVERED
        state[new] = INFECTED
        counts[SUSCEPTIBLE] -= len(new)
        counts[INFECTED] += len(new) - len(recover)
        counts[RECOVERED] += len(recover)
        steps.append((t, *counts.tolist()))

    inf = np.concatenate(infections) if infections else np.zeros((0, 3), dtype=np.int64)
    return EpidemicTrace(np.asarray(steps, dtype=np.int64), inf.astype(np.int64), len(params.initial_infected))


def run_seed(master_seed: int, run: int) -> np.random.SeedSequence:
    """Independent stream for run ``run`` of an ensemble seeded by ``master_seed``."""
    return np.random.SeedSequence([int(master_seed) % 2**64, int(run)])


@dataclass
class EnsembleSummary:
    runs: int
    outbreak_sizes: np.ndarray
    peak_times: np.ndarray
    peak_heights: np.ndarray
    traces: list = field(default_factory=list, repr=False)

    @property
    def mean_outbreak(self) -> float:
        return float(self.outbreak_sizes.mean())

    @property
    def std_outbreak(self) -> float:
        return float(self.outbreak_sizes.std(ddof=1)) if self.runs > 1 else 0.0

    @property
    def mean_peak_time(self) -> float:
        return float(self.peak_times.mean())

    @property
    def mean_peak_height(self) -> float:
        return float(self.peak_heights.mean())

    def as_dict(self) -> dict:
        return {
            "runs": self.runs,
            "mean_outbreak": self.mean_outbreak,
            "std_outbreak": self.std_outbreak,
            "mean_peak_time": self.mean_peak_time,
            "mean_peak_height": self.mean_peak_height,
            "outbreak_sizes": self.outbreak_sizes.tolist(),
        }


def run_ensemble(g: Graph, params: EpidemicParams, runs: int, keep_traces: bool = False) -> EnsembleSummary:
    if runs < 1:
        raise EpidemicError("runs must be positive")
    sizes, ptimes, pheights, traces = [], [], [], []
    for i in range(runs):
        tr = simulate_sir(g, params, rng_seed=run_seed(params.seed, i))
        sizes.append(tr.final_outbreak_size)
        pt, ph = tr.peak_infected
        ptimes.append(pt)
        pheights.append(ph)
        if keep_traces:
            traces.append(tr)
    return EnsembleSummary(runs, np.asarray(sizes), np.asarray(ptimes), np.asarray(pheights), traces)


@dataclass
class ImmunizationReport:
    summaries: dict
    ranking: list

    def as_dict(self) -> dict:
        return {
            "ranking": list(self.ranking),
            "strategies": {name: s.as_dict() for name, s in self.summaries.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def evaluate_immunization(
    g: Graph, params: EpidemicParams, strategies: Mapping[str, Iterable[int]], runs: int
) -> ImmunizationReport:
    """Ensemble per immunization set, all sharing the same per-run seeds.

    Ranking is by mean final outbreak, smallest first (ties by name).
    """
    summaries = {}
    for name, nodes in strategies.items():
        nodes = frozenset(int(v) for v in nodes)
        overlap = nodes & params.initial_infected
        if overlap:
            raise EpidemicError(f"strategy {name!r} immunizes infection seeds {sorted(overlap)[:5]}")
        summaries[name] = run_ensemble(g, params.with_immunized(nodes), runs)
    ranking = sorted(summaries, key=lambda name: (summaries[name].mean_outbreak, name))
    return ImmunizationReport(summaries, ranking)
