"""Immutable undirected simple graphs and the structural measures built on them.

Adjacency is stored in CSR form (``indptr``/``indices``) with each neighbor
slice sorted.  Node ids are dense integers ``0..N-1``; original labels from an
edge-list file are kept in ``Graph.labels``.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

__all__ = [
    "Graph",
    "GraphError",
    "EdgeListParseError",
    "LocalClustering",
    "DegreeHistogram",
    "from_edge_list",
    "to_edge_list",
    "read_edge_list",
    "write_edge_list",
    "degree",
    "degree_histogram",
    "local_clustering",
    "local_clustering_all",
    "average_clustering",
    "bfs_distances",
    "average_path_length",
    "connected_components",
    "induced_subgraph",
]

EXACT_PATH_LENGTH_LIMIT = 10_000
_BFS_WORDS = 4


class GraphError(ValueError):
    pass


class EdgeListParseError(GraphError):
    def __init__(self, lineno: int, line: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: expected two node labels, got {line.strip()!r}")


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph in CSR form.

    Build through :meth:`from_edges` (or :func:`from_edge_list`); the
    constructor trusts its arrays.
    """

    indptr: np.ndarray
    indices: np.ndarray
    labels: tuple[str, ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence | None = None) -> "Graph":
        if n < 0:
            raise GraphError("node count must be non-negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError(f"edge endpoint outside 0..{n - 1}")
        arr = arr[arr[:, 0] != arr[:, 1]]
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        und = np.unique(lo * max(n, 1) + hi)
        lo, hi = und // max(n, 1), und % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        indices = dst.astype(np.int64)
        indptr.flags.writeable = False
        indices.flags.writeable = False
        if labels is None:
            labels = range(n)
        elif len(labels) != n:
            raise GraphError("labels must have one entry per node")
        return cls(indptr, indices, tuple(str(lab) for lab in labels))

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        self._check(v)
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def edges(self) -> np.ndarray:
        """(E, 2) array of edges ``u < v``, sorted lexicographically."""
        src = np.repeat(np.arange(self.node_count), self.degrees)
        mask = src < self.indices
        return np.column_stack([src[mask], self.indices[mask]])

    def adjacency_matrix(self) -> sparse.csr_matrix:
        n = self.node_count
        data = np.ones(len(self.indices), dtype=np.int64)
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(n, n))

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def _check(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise GraphError(f"node {v} out of range 0..{self.node_count - 1}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
            and self.labels == other.labels
        )

    def __repr__(self) -> str:
        return f"Graph(node_count={self.node_count}, edge_count={self.edge_count})"


@dataclass(frozen=True)
class LocalClustering:
    node: int
    k: int
    E: int
    C: float


@dataclass(frozen=True)
class DegreeHistogram:
    """Degree counts; ``counts`` maps degree -> number of nodes, sorted by degree."""

    counts: dict
    n: int

    @classmethod
    def from_counts(cls, counts: dict) -> "DegreeHistogram":
        clean = {int(k): int(c) for k, c in sorted(counts.items()) if c}
        if any(k < 0 for k in clean) or any(c < 0 for c in clean.values()):
            raise GraphError("degrees and counts must be non-negative")
        return cls(clean, sum(clean.values()))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ks = np.fromiter(self.counts.keys(), dtype=np.int64, count=len(self.counts))
        cs = np.fromiter(self.counts.values(), dtype=np.int64, count=len(self.counts))
        return ks, cs

    def to_csv(self) -> str:
        return "".join(f"{k},{c}\n" for k, c in self.counts.items())


# --------------------------------------------------------------------------
# edge-list I/O
# --------------------------------------------------------------------------

def _label_key(tok: str):
    try:
        return (0, int(tok), tok)
    except ValueError:
        return (1, 0, tok)


def from_edge_list(text: str) -> Graph:
    """Parse whitespace-separated ``u v`` lines; ``#`` comments and blanks skipped.

    Dense ids follow the sorted label order (numeric labels compare as
    integers), so parsing the output of :func:`to_edge_list` reproduces the
    graph exactly.
    """
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = stripped.split()
        if len(toks) != 2:
            raise EdgeListParseError(lineno, line)
        pairs.append((toks[0], toks[1]))
    labels = sorted({t for p in pairs for t in p}, key=_label_key)
    index = {lab: i for i, lab in enumerate(labels)}
    edges = [(index[a], index[b]) for a, b in pairs]
    return Graph.from_edges(len(labels), edges, labels)


def to_edge_list(g: Graph) -> str:
    return "".join(f"{g.labels[u]} {g.labels[v]}\n" for u, v in g.edges())


def read_edge_list(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return from_edge_list(fh.read())


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_edge_list(g))


# --------------------------------------------------------------------------
# degrees and clustering
# --------------------------------------------------------------------------

def degree(g: Graph, v: int) -> int:
    g._check(v)
    return int(g.indptr[v + 1] - g.indptr[v])


def degree_histogram(g: Graph) -> DegreeHistogram:
    return DegreeHistogram.from_counts(Counter(g.degrees.tolist()))


def _clustering_value(k: int, e: int) -> float:
    # nodes with fewer than two neighbors have C_i = 0 by convention
    if k < 2:
        return 0.0
    return e / (k * (k - 1) / 2)


def local_clustering(g: Graph, v: int) -> LocalClustering:
    nb = g.neighbors(v)
    nbset = set(nb.tolist())
    e = 0
    for u in nb:
        e += sum(1 for w in g.neighbors(u) if w > u and w in nbset)
    return LocalClustering(int(v), len(nb), e, _clustering_value(len(nb), e))


def triangle_counts(g: Graph) -> np.ndarray:
    """E_i for every node: number of edges among each node's neighbors."""
    if g.node_count == 0:
        return np.zeros(0, dtype=np.int64)
    a = g.adjacency_matrix()
    paths2 = a @ a
    closed = np.asarray(a.multiply(paths2).sum(axis=1)).ravel()
    return (closed // 2).astype(np.int64)


def local_clustering_all(g: Graph) -> np.ndarray:
    """C_i for every node as a float array."""
    k = g.degrees.astype(np.float64)
    e = triangle_counts(g).astype(np.float64)
    pairs = k * (k - 1) / 2
    out = np.zeros(g.node_count)
    np.divide(e, pairs, out=out, where=k >= 2)
    return out


def average_clustering(g: Graph) -> float:
    if g.node_count == 0:
        raise GraphError("average clustering undefined for an empty graph")
    return float(local_clustering_all(g).mean())


def average_clustering_exact(g: Graph) -> Fraction:
    """Rational-valued average clustering, for checks that need exactness."""
    if g.node_count == 0:
        raise GraphError("average clustering undefined for an empty graph")
    k = g.degrees.tolist()
    e = triangle_counts(g).tolist()
    total = sum((Fraction(2 * ei, ki * (ki - 1)) for ki, ei in zip(k, e) if ki >= 2), Fraction(0))
    return total / g.node_count


# --------------------------------------------------------------------------
# paths and components
# --------------------------------------------------------------------------

def bfs_distances(g: Graph, source: int) -> dict[int, int]:
    g._check(source)
    dist = {source: 0}
    queue = deque([source])
    indptr, indices = g.indptr, g.indices
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in indices[indptr[u]:indptr[u + 1]].tolist():
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def _hop_sums(g: Graph, sources: np.ndarray) -> tuple[int, int]:
    """Total hop distance and count of reachable (source, target != source) pairs.

    Bit-parallel BFS: each bit of a ``uint64`` word tracks one source, so a
    level expansion for 64 * words sources is one gather plus one OR-reduce
    over the CSR neighbor slices.
    """
    n = g.node_count
    deg = g.degrees
    isolated = deg == 0
    starts = g.indptr[:-1]
    total, pairs = 0, 0
    per_batch = 64 * _BFS_WORDS
    for b0 in range(0, len(sources), per_batch):
        batch = sources[b0:b0 + per_batch]
        words = (len(batch) + 63) // 64
        frontier = np.zeros((n, words), dtype=np.uint64)
        pos = np.arange(len(batch))
        np.bitwise_or.at(frontier, (batch, pos // 64), np.left_shift(np.uint64(1), (pos % 64).astype(np.uint64)))
        visited = frontier.copy()
        level = 0
        pad = np.zeros((1, words), dtype=np.uint64)
        while True:
            level += 1
            gathered = np.concatenate([frontier[g.indices], pad])
            reached = np.bitwise_or.reduceat(gathered, starts, axis=0)
            reached[isolated] = 0
            reached &= ~visited
            found = int(np.bitwise_count(reached).sum())
            if found == 0:
                break
            visited |= reached
            frontier = reached
            total += level * found
            pairs += found
    return total, pairs


def average_path_length(
    g: Graph, sample_sources: int | None = None, seed: int = 0
) -> tuple[float, float]:
    """Mean shortest-path length over ordered reachable pairs.

    Returns ``(l, reachable_pair_fraction)``.  With ``sample_sources`` set, BFS
    runs only from that many distinct uniformly drawn sources.  Without it the
    computation is exact up to 10,000 nodes; larger graphs fall back to 1,000
    sampled sources.
    """
    n = g.node_count
    if n < 2:
        raise GraphError("average path length needs at least two nodes")
    if g.edge_count == 0:
        raise GraphError("graph has no edges, so no pair is reachable")
    if sample_sources is None and n > EXACT_PATH_LENGTH_LIMIT:
        sample_sources = 1000
    if sample_sources is None or sample_sources >= n:
        sources = np.arange(n)
    else:
        if sample_sources < 1:
            raise GraphError("sample_sources must be positive")
        rng = np.random.default_rng(np.random.SeedSequence(seed % 2**64))
        sources = np.sort(rng.choice(n, size=sample_sources, replace=False))
    total, pairs = _hop_sums(g, sources)
    if pairs == 0:
        raise GraphError("no reachable pairs from the chosen sources")
    return total / pairs, pairs / (len(sources) * (n - 1))


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by their smallest node."""
    n = g.node_count
    if n == 0:
        return []
    _, lab = csgraph.connected_components(g.adjacency_matrix(), directed=False)
    order = np.argsort(lab, kind="stable")
    bounds = np.flatnonzero(np.diff(lab[order])) + 1
    comps = [c.tolist() for c in np.split(order, bounds)]
    comps.sort(key=lambda c: c[0])
    return comps


def component_labels(g: Graph) -> np.ndarray:
    if g.node_count == 0:
        return np.zeros(0, dtype=np.int64)
    return csgraph.connected_components(g.adjacency_matrix(), directed=False)[1]


def induced_subgraph(g: Graph, nodes: Iterable[int]) -> Graph:
    """Subgraph on ``nodes`` keeping every edge with both endpoints inside.

    New id ``i`` is the ``i``-th smallest kept id of ``g``; the result carries
    the parent's labels for those nodes.
    """
    keep = np.unique(np.fromiter(nodes, dtype=np.int64))
    if keep.size and (keep[0] < 0 or keep[-1] >= g.node_count):
        raise GraphError("induced_subgraph: node id out of range")
    remap = np.full(g.node_count, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    e = g.edges()
    if len(e):
        e = e[(remap[e[:, 0]] >= 0) & (remap[e[:, 1]] >= 0)]
        e = remap[e]
    return Graph.from_edges(len(keep), e, [g.labels[i] for i in keep.tolist()])
