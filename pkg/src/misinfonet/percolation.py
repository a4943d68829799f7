"""Percolation cluster of high-clustering nodes and how well it cuts off spreaders.

The cluster for a threshold ``theta`` is built by keeping every node whose
local clustering coefficient is at least ``theta`` and taking the largest
connected component of the subgraph they induce.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csgraph

from .graph import Graph, GraphError, induced_subgraph, local_clustering_all

DEFAULT_GIANT_CUT = 0.01


@dataclass(frozen=True)
class ClusterResult:
    theta: float
    members: np.ndarray
    component_sizes: tuple
    giant_fraction: float
    giant: np.ndarray

    @property
    def members_count(self) -> int:
        return len(self.members)


def _components_of(g: Graph, nodes: np.ndarray) -> list[np.ndarray]:
    """Components of the subgraph induced by ``nodes``, as arrays of ids of ``g``."""
    if len(nodes) == 0:
        return []
    sub = induced_subgraph(g, nodes)
    _, lab = csgraph.connected_components(sub.adjacency_matrix(), directed=False)
    order = np.argsort(lab, kind="stable")
    bounds = np.flatnonzero(np.diff(lab[order])) + 1
    return [nodes[part] for part in np.split(order, bounds)]


def high_clustering_cluster(g: Graph, theta: float, clustering: np.ndarray | None = None) -> ClusterResult:
    """Nodes with C_i >= theta and the components they form.

    ``giant`` is the percolation cluster itself: the largest component, ties
    broken toward the one holding the smallest node id.  ``clustering`` may
    pass precomputed C_i values.
    """
    if theta < 0:
        raise GraphError(f"theta must be non-negative, got {theta}")
    c = local_clustering_all(g) if clustering is None else clustering
    members = np.flatnonzero(c >= theta)
    comps = _components_of(g, members)
    comps.sort(key=lambda a: (-len(a), int(a.min())))
    giant = np.sort(comps[0]) if comps else np.zeros(0, dtype=np.int64)
    n = g.node_count
    return ClusterResult(
        theta=float(theta),
        members=members,
        component_sizes=tuple(sorted((len(a) for a in comps), reverse=True)),
        giant_fraction=len(giant) / n if n else 0.0,
        giant=giant,
    )


@dataclass(frozen=True)
class SweepPoint:
    theta: float
    members: int
    giant_fraction: float


def percolation_sweep(g: Graph, thetas: Sequence[float]) -> list[SweepPoint]:
    thetas = [float(t) for t in thetas]
    if any(b < a for a, b in zip(thetas, thetas[1:])):
        raise GraphError("thetas must be sorted ascending")
    if any(not 0.0 <= t <= 1.0 for t in thetas):
        raise GraphError("thetas must lie in [0, 1]")
    c = local_clustering_all(g)
    out = []
    for t in thetas:
        res = high_clustering_cluster(g, t, clustering=c)
        out.append(SweepPoint(t, res.members_count, res.giant_fraction))
    return out


def sweep_csv(points: Iterable[SweepPoint]) -> str:
    return "theta,members,giant_fraction\n" + "".join(
        f"{p.theta!r},{p.members},{p.giant_fraction!r}\n" for p in points
    )


def percolation_threshold(points: Sequence[SweepPoint], cut: float = DEFAULT_GIANT_CUT) -> float | None:
    """Smallest swept theta whose giant fraction drops below ``cut``."""
    for p in points:
        if p.giant_fraction < cut:
            return p.theta
    return None


def cluster_for_size(g: Graph, target_fraction: float) -> ClusterResult:
    """Percolation cluster whose size is closest to ``target_fraction * N``.

    Candidate thresholds are the distinct C_i values of the graph (the giant
    component only changes there); ties go to the larger threshold.
    """
    if not 0.0 < target_fraction <= 1.0:
        raise GraphError("target_fraction must lie in (0, 1]")
    c = local_clustering_all(g)
    target = target_fraction * g.node_count
    best = None
    for theta in np.unique(c)[::-1]:
        res = high_clustering_cluster(g, float(theta), clustering=c)
        gap = abs(len(res.giant) - target)
        if best is None or gap < best[0]:
            best = (gap, res)
        if len(res.giant) > target:
            # giant size only grows as theta falls
            break
    return best[1]


def reachable_after_removal(g: Graph, removed: Iterable[int], sources: Iterable[int]) -> np.ndarray:
    """Nodes (other than the sources) reachable from ``sources`` once ``removed`` is deleted."""
    n = g.node_count
    blocked = np.zeros(n, dtype=bool)
    blocked[np.fromiter(removed, dtype=np.int64)] = True
    src = np.unique(np.fromiter(sources, dtype=np.int64))
    seen = blocked.copy()
    seen[src] = True
    frontier = src
    found = []
    indptr, indices = g.indptr, g.indices
    while len(frontier):
        k = indptr[frontier + 1] - indptr[frontier]
        total = int(k.sum())
        if total == 0:
            break
        offsets = np.repeat(indptr[frontier] - np.cumsum(k) + k, k) + np.arange(total)
        nxt = np.unique(indices[offsets])
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        found.append(nxt)
        frontier = nxt
    return np.concatenate(found) if found else np.zeros(0, dtype=np.int64)


def isolation_metric(g: Graph, cluster: Iterable[int], sources: Iterable[int]) -> float:
    """Fraction of non-cluster, non-source nodes still reachable from the sources.

    0 means the cluster cuts every source off from the rest of the graph.
    """
    cluster = {int(v) for v in cluster}
    sources = {int(v) for v in sources}
    if cluster & sources:
        raise GraphError("sources and cluster overlap")
    n = g.node_count
    for v in cluster | sources:
        if not 0 <= v < n:
            raise GraphError(f"node {v} out of range")
    remaining = n - len(cluster) - len(sources)
    if remaining == 0:
        return 0.0
    return len(reachable_after_removal(g, cluster, sources)) / remaining
