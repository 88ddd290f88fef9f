"""Immutable simple undirected graphs and the structural quantities used
throughout percolab: degrees, components, excess, induced subgraphs, girth and
subgraph containment of small patterns.

Vertices are the integers 0..n-1 and the canonical order is ascending integer
order. Edges are stored once as (u, v) with u < v, sorted lexicographically;
the position of an edge in that list is its edge index.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from percolab import config
from percolab.errors import GraphBuildError, PatternTooLargeError

logger = logging.getLogger(__name__)


################################################################################
### Types
@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph in CSR form.

    `indices[indptr[v]:indptr[v + 1]]` are the neighbours of v in ascending
    order and `edge_ids` holds the edge index of each of those half-edges.
    """

    n: int
    edges: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    edge_ids: np.ndarray

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex sorted neighbour tuples."""
        bounds = self.indptr.tolist()
        flat = self.indices.tolist()
        return tuple(tuple(flat[bounds[v]:bounds[v + 1]]) for v in range(self.n))

    @cached_property
    def adj_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nb) for nb in self.adj)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_index(u, v) is not None

    def edge_index(self, u: int, v: int) -> int | None:
        """Index of edge {u, v} in the canonical enumeration, or None."""
        nb = self.neighbors(u)
        pos = int(np.searchsorted(nb, v))
        if pos < nb.size and nb[pos] == v:
            return int(self.edge_ids[self.indptr[u] + pos])
        return None

    def edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class ComponentPartition:
    component_id: np.ndarray = field(repr=False)
    sizes: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class GirthValue:
    """Girth with a witnessing shortest cycle; `length is None` means acyclic."""

    length: int | None
    cycle: tuple[int, ...] = ()

    @property
    def is_infinite(self) -> bool:
        return self.length is None

    def exceeds(self, g: int) -> bool:
        return self.length is None or self.length > g

    def __str__(self) -> str:
        return "inf" if self.length is None else str(self.length)


@dataclass(frozen=True)
class Embedding:
    """Witness that pattern number `pattern_index` embeds into a graph.

    `mapping[i]` is the image of pattern vertex i.
    """

    pattern_index: int
    mapping: tuple[int, ...]


################################################################################
### Construction
def build(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Build a graph on vertices 0..n-1 from an edge list.

    Self-loops, duplicate edges (in either orientation) and out-of-range
    endpoints are rejected with the offending pair.
    """
    if n < 0:
        raise GraphBuildError(f"vertex count must be non-negative, got {n}")
    pairs = [tuple(e) for e in edges]
    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if arr.size:
        bad = np.flatnonzero(((arr < 0) | (arr >= n)).any(axis=1))
        if bad.size:
            raise GraphBuildError("vertex out of range", pairs[int(bad[0])])
        loops = np.flatnonzero(arr[:, 0] == arr[:, 1])
        if loops.size:
            raise GraphBuildError("self-loop", pairs[int(loops[0])])
    canon = np.sort(arr, axis=1)
    keys = canon[:, 0] * max(n, 1) + canon[:, 1]
    order = np.argsort(keys, kind="stable")
    dup = np.flatnonzero(keys[order][1:] == keys[order][:-1])
    if dup.size:
        # report the later occurrence in input order
        first_dup = min(int(order[i + 1]) for i in dup)
        raise GraphBuildError("duplicate edge", pairs[first_dup])
    return from_canonical(n, canon[order])


def from_canonical(n: int, edges: np.ndarray) -> Graph:
    """Build from an (m, 2) array already canonical: u < v, sorted, unique."""
    edges = np.ascontiguousarray(edges, dtype=np.int64).reshape(-1, 2)
    m = edges.shape[0]
    src = np.concatenate([edges[:, 0], edges[:, 1]])
    dst = np.concatenate([edges[:, 1], edges[:, 0]])
    eid = np.concatenate([np.arange(m, dtype=np.int64)] * 2)
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    arrays = (edges, indptr, dst[order], eid[order])
    for a in arrays:
        a.flags.writeable = False
    return Graph(n, *arrays)


def with_edges(G: Graph, mask: np.ndarray) -> Graph:
    """The spanning subgraph of G keeping the edges selected by `mask`."""
    return from_canonical(G.n, G.edges[np.asarray(mask, dtype=bool)])


def empty(n: int) -> Graph:
    return from_canonical(n, np.empty((0, 2), dtype=np.int64))


################################################################################
### Degrees and components
def degree_stats(G: Graph) -> tuple[int, float, int]:
    """(minimum, average, maximum) degree."""
    if G.n < 1:
        raise GraphBuildError("degree statistics need at least one vertex")
    deg = G.degrees
    return int(deg.min()), 2.0 * G.m / G.n, int(deg.max())


def count_isolated(G: Graph) -> int:
    return int(np.count_nonzero(G.degrees == 0))


def component_labels(n: int, edges: np.ndarray) -> tuple[int, np.ndarray]:
    """Component count and labels for a vertex set with the given edges.

    Labels are contiguous from 0 and numbered by each component's smallest
    vertex.
    """
    if n == 0:
        return 0, np.empty(0, dtype=np.int64)
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    ones = np.ones(edges.shape[0], dtype=np.int8)
    matrix = coo_matrix((ones, (edges[:, 0], edges[:, 1])), shape=(n, n))
    r, raw = connected_components(matrix, directed=False)
    _, first = np.unique(raw, return_index=True)
    rank = np.empty(r, dtype=np.int64)
    rank[np.argsort(first)] = np.arange(r)
    return int(r), rank[raw]


def components(G: Graph) -> ComponentPartition:
    r, labels = component_labels(G.n, G.edges)
    sizes = np.bincount(labels, minlength=r)
    labels.flags.writeable = False
    return ComponentPartition(labels, tuple(int(s) for s in sizes))


def excess(G: Graph) -> int:
    """exc(G) = e(G) - |V(G)| + #components."""
    r, _ = component_labels(G.n, G.edges)
    return G.m - G.n + r


def is_bipartite(G: Graph) -> bool:
    colour = [-1] * G.n
    adj = G.adj
    for s in range(G.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if colour[y] < 0:
                    colour[y] = 1 - colour[x]
                    queue.append(y)
                elif colour[y] == colour[x]:
                    return False
    return True


################################################################################
### Subgraphs
def induced(G: Graph, vertices: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """G[A] relabelled to 0..|A|-1 in ascending order, with the mapping
    new vertex -> old vertex."""
    mapping = tuple(sorted(set(int(v) for v in vertices)))
    for v in mapping:
        if not 0 <= v < G.n:
            raise GraphBuildError(f"vertex {v} out of range for n={G.n}")
    relabel = np.full(G.n, -1, dtype=np.int64)
    relabel[list(mapping)] = np.arange(len(mapping))
    if not mapping:
        return empty(0), mapping
    mapped = relabel[G.edges]
    kept = mapped[(mapped >= 0).all(axis=1)]
    return from_canonical(len(mapping), kept), mapping


def min_degree_core(G: Graph, d: int) -> tuple[Graph, tuple[int, ...]]:
    """Peel vertices of degree < d until none remain; returns the induced
    remainder and its mapping. Every vertex of the result has degree >= d."""
    deg = G.degrees.astype(np.int64).tolist()
    alive = [True] * G.n
    queue = deque(v for v in range(G.n) if deg[v] < d)
    for v in queue:
        alive[v] = False
    adj = G.adj
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] < d:
                    alive[w] = False
                    queue.append(w)
    core = [v for v in range(G.n) if alive[v]]
    logger.debug("min-degree-%d core keeps %d of %d vertices", d, len(core), G.n)
    return induced(G, core)


def to_networkx(G: Graph):
    import networkx as nx

    nxg = nx.Graph()
    nxg.add_nodes_from(range(G.n))
    nxg.add_edges_from(G.edge_list())
    return nxg


################################################################################
### Girth
def girth(G: Graph) -> GirthValue:
    """Exact girth by breadth-first search from every vertex.

    A search from root r that is processing depth d can only close cycles of
    length >= 2d + 1, so it stops as soon as that reaches the best length.
    """
    adj = G.adj
    best = None
    witness: tuple[int, ...] = ()
    for root in range(G.n):
        if best == 3:
            break
        depth = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            dx = depth[x]
            if best is not None and 2 * dx + 1 >= best:
                break
            for y in adj[x]:
                if y not in depth:
                    depth[y] = dx + 1
                    parent[y] = x
                    queue.append(y)
                elif y != parent[x] and depth[y] >= dx:
                    length = dx + depth[y] + 1
                    if best is None or length < best:
                        best = length
                        witness = _closed_walk(parent, x, y)
    return GirthValue(best, witness)


def _closed_walk(parent: dict[int, int], x: int, y: int) -> tuple[int, ...]:
    """root..x followed by y..root, minus the repeated root."""
    left = []
    while x != -1:
        left.append(x)
        x = parent[x]
    right = []
    while y != -1:
        right.append(y)
        y = parent[y]
    return tuple(reversed(left)) + tuple(right[:-1])


################################################################################
### Subgraph containment
class _Matcher:
    """Backtracking search for (not necessarily induced) copies of a small
    pattern, pruning on degree and on adjacency to already mapped vertices."""

    def __init__(self, host_adj: Sequence[frozenset[int] | set[int]]) -> None:
        self.host_adj = host_adj
        self.host_n = len(host_adj)

    def find(self, pattern: Graph, fixed: dict[int, int] | None = None) -> tuple[int, ...] | None:
        if pattern.n > config.SUBGRAPH_PATTERN_MAX_VERTICES:
            raise PatternTooLargeError(
                f"pattern has {pattern.n} vertices, limit is "
                f"{config.SUBGRAPH_PATTERN_MAX_VERTICES}"
            )
        if pattern.n == 0:
            return ()
        if pattern.n > self.host_n:
            return None
        fixed = dict(fixed or {})
        p_adj = pattern.adj
        p_deg = [len(nb) for nb in p_adj]
        order = self._order(p_adj, p_deg, list(fixed))
        image = [-1] * pattern.n
        used: set[int] = set()
        for a, b in fixed.items():
            if len(self.host_adj[b]) < p_deg[a] or b in used:
                return None
            image[a] = b
            used.add(b)
        for a in fixed:
            for c in p_adj[a]:
                if c in fixed and image[c] not in self.host_adj[image[a]]:
                    return None
        free = [v for v in order if v not in fixed]
        if self._extend(free, 0, p_adj, p_deg, image, used):
            return tuple(image)
        return None

    @staticmethod
    def _order(p_adj, p_deg, start: list[int]) -> list[int]:
        order = list(start)
        placed = set(order)
        while len(order) < len(p_adj):
            remaining = [v for v in range(len(p_adj)) if v not in placed]
            v = max(remaining, key=lambda u: (sum(1 for c in p_adj[u] if c in placed), p_deg[u], -u))
            order.append(v)
            placed.add(v)
        return order

    def _extend(self, free, i, p_adj, p_deg, image, used) -> bool:
        if i == len(free):
            return True
        a = free[i]
        mapped_nbrs = [image[c] for c in p_adj[a] if image[c] >= 0]
        if mapped_nbrs:
            anchor = min(mapped_nbrs, key=lambda h: len(self.host_adj[h]))
            candidates = sorted(self.host_adj[anchor])
        else:
            candidates = range(self.host_n)
        for h in candidates:
            if h in used or len(self.host_adj[h]) < p_deg[a]:
                continue
            if any(h not in self.host_adj[x] for x in mapped_nbrs):
                continue
            image[a] = h
            used.add(h)
            if self._extend(free, i + 1, p_adj, p_deg, image, used):
                return True
            used.discard(h)
            image[a] = -1
        return False


def is_h_free(G: Graph, patterns: Sequence[Graph]) -> tuple[bool, Embedding | None]:
    """Whether G contains none of `patterns` as a subgraph.

    On a hit the second element is an explicit embedding of the first pattern
    found.
    """
    for p in patterns:
        if p.n > config.SUBGRAPH_PATTERN_MAX_VERTICES:
            raise PatternTooLargeError(
                f"pattern has {p.n} vertices, limit is {config.SUBGRAPH_PATTERN_MAX_VERTICES}"
            )
    matcher = _Matcher(G.adj_sets)
    for i, p in enumerate(patterns):
        mapping = matcher.find(p)
        if mapping is not None:
            return False, Embedding(i, mapping)
    return True, None


def embeds_through_edge(host_adj: Sequence[set[int]], pattern: Graph, u: int, v: int) -> bool:
    """Whether some copy of `pattern` in the host uses the host edge {u, v}.

    Used when growing a graph edge by edge: a pattern can only appear through
    the newest edge.
    """
    matcher = _Matcher(host_adj)
    for a, b in pattern.edge_list():
        if matcher.find(pattern, {a: u, b: v}) is not None:
            return True
        if matcher.find(pattern, {a: v, b: u}) is not None:
            return True
    return False
