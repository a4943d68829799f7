"""Seeded generators for the three reference topologies.

Every generator is a pure function of its parameters and ``seed``; the same
seed always yields an identical graph.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .graph import Graph, GraphError

KINDS = ("erdos-renyi", "watts-strogatz", "barabasi-albert")


def make_rng(seed: int) -> np.random.Generator:
    """Generator seeded from an arbitrary (possibly negative) 64-bit integer."""
    return np.random.default_rng(np.random.SeedSequence(int(seed) % 2**64))


@dataclass(frozen=True)
class GeneratorParams:
    kind: str
    n: int
    p: Optional[float] = None
    k: Optional[int] = None
    m: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GraphError(f"kind must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if self.n < 1:
            raise GraphError("n must be positive")
        if self.kind == "erdos-renyi":
            _check_prob(self.p, "p")
        elif self.kind == "watts-strogatz":
            _check_prob(self.p, "p")
            _check_ws_degree(self.n, self.k)
        else:
            _check_ba(self.n, self.m)

    def as_dict(self) -> dict:
        return {key: val for key, val in asdict(self).items() if val is not None}

    def build(self) -> Graph:
        if self.kind == "erdos-renyi":
            return gen_erdos_renyi(self.n, self.p, self.seed)
        if self.kind == "watts-strogatz":
            return gen_watts_strogatz(self.n, self.k, self.p, self.seed)
        return gen_barabasi_albert(self.n, self.m, self.seed)


def _check_prob(p, name):
    if p is None or not 0.0 <= p <= 1.0:
        raise GraphError(f"{name} must be a probability in [0, 1], got {p!r}")


def _check_ws_degree(n, k):
    if k is None or k <= 0 or k % 2:
        raise GraphError(f"k must be a positive even integer, got {k!r}")
    if k >= n:
        raise GraphError(f"k must be smaller than n ({k} >= {n})")


def _check_ba(n, m):
    if m is None or m < 1:
        raise GraphError(f"m must be a positive integer, got {m!r}")
    if m >= n:
        raise GraphError(f"m must be smaller than n ({m} >= {n})")


def gen_erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p): every one of the n(n-1)/2 pairs is an edge with probability p.

    Row ``i`` draws its number of forward edges from Binomial(n-1-i, p) and
    then a uniform subset of that size, which is the same law as independent
    coin flips per pair.
    """
    if n < 1:
        raise GraphError("n must be positive")
    _check_prob(p, "p")
    rng = make_rng(seed)
    srcs, dsts = [], []
    for i in range(n - 1):
        avail = n - 1 - i
        c = rng.binomial(avail, p)
        if c:
            dsts.append(i + 1 + rng.choice(avail, size=c, replace=False))
            srcs.append(np.full(c, i))
    if not srcs:
        return Graph.from_edges(n, np.zeros((0, 2), dtype=np.int64))
    return Graph.from_edges(n, np.column_stack([np.concatenate(srcs), np.concatenate(dsts)]))


def gen_erdos_renyi_mean_degree(n: int, mean_degree: float, seed: int = 0) -> Graph:
    """G(n, p) parameterized by the expected degree, p = <k>/(n-1)."""
    if n < 2:
        raise GraphError("mean-degree form needs n >= 2")
    return gen_erdos_renyi(n, mean_degree / (n - 1), seed)


def gen_watts_strogatz(n: int, k: int, p_rewire: float, seed: int = 0) -> Graph:
    """Ring lattice of degree k with each edge rewired with probability p_rewire.

    A rewired edge keeps its origin and moves its far end to a uniformly
    drawn node that is neither the origin nor already adjacent to it.  If the
    origin is adjacent to everyone the edge stays put, so the edge count is
    always exactly kn/2.
    """
    _check_prob(p_rewire, "p_rewire")
    _check_ws_degree(n, k)
    rng = make_rng(seed)
    adj = [set() for _ in range(n)]
    lattice = []
    for j in range(1, k // 2 + 1):
        for u in range(n):
            v = (u + j) % n
            adj[u].add(v)
            adj[v].add(u)
            lattice.append((u, v))
    for u, v in lattice:
        if rng.random() >= p_rewire:
            continue
        if len(adj[u]) >= n - 1:
            continue
        while True:
            w = int(rng.integers(n))
            if w != u and w not in adj[u]:
                break
        adj[u].discard(v)
        adj[v].discard(u)
        adj[u].add(w)
        adj[w].add(u)
    edges = [(u, v) for u in range(n) for v in adj[u] if u < v]
    return Graph.from_edges(n, edges)


def gen_barabasi_albert(n: int, m: int, seed: int = 0) -> Graph:
    """Preferential attachment grown from a clique on m+1 nodes.

    Each new node links to m distinct existing nodes, each drawn with
    probability proportional to current degree (duplicates are redrawn).
    Edge count is m(m+1)/2 + m(n-m-1).
    """
    _check_ba(n, m)
    rng = make_rng(seed)
    core = m + 1
    edges = [(u, v) for u in range(core) for v in range(u + 1, core)]
    # every edge endpoint appears once, so a uniform pick is degree-proportional
    ends = np.empty(2 * (len(edges) + m * (n - core)), dtype=np.int64)
    fill = 0
    for u, v in edges:
        ends[fill], ends[fill + 1] = u, v
        fill += 2
    for new in range(core, n):
        targets = set()
        while len(targets) < m:
            targets.add(int(ends[rng.integers(fill)]))
        for t in sorted(targets):
            edges.append((t, new))
            ends[fill], ends[fill + 1] = t, new
            fill += 2
    return Graph.from_edges(n, edges)


def ba_edge_count(n: int, m: int) -> int:
    """Exact edge count of :func:`gen_barabasi_albert` for (n, m)."""
    _check_ba(n, m)
    return m * (m + 1) // 2 + m * (n - m - 1)
