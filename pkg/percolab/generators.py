"""Base-graph constructions: complete and complete bipartite graphs, random
regular graphs, projective-plane incidence graphs, disjoint unions and a
girth-raising edge-swap repair. Every stochastic generator takes an explicit
seed.
"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from percolab import config
from percolab.errors import GeneratorError, RetryBudgetExhausted
from percolab.graph import Graph, GirthValue, build, from_canonical, girth
from percolab.rng import generator

logger = logging.getLogger(__name__)

GEN_KINDS = (
    "complete",
    "complete_bipartite",
    "random_regular",
    "pp_incidence",
    "disjoint_copies",
    "girth_repair",
    "cycle",
    "path",
)


@dataclass(frozen=True)
class GenSpec:
    """A serializable recipe for a base graph: {kind, params..., seed}."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"kind": self.kind}
        for key, value in self.params.items():
            out[key] = value.to_json() if isinstance(value, GenSpec) else value
        out["seed"] = self.seed
        return out

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind}({args};seed={self.seed})"


@dataclass(frozen=True)
class GirthRepairResult:
    graph: Graph
    success: bool
    iterations: int
    girth: GirthValue


################################################################################
### Deterministic families
def complete(n: int) -> Graph:
    if n < 1:
        raise GeneratorError(f"complete graph needs n >= 1, got {n}")
    u, v = np.triu_indices(n, k=1)
    return from_canonical(n, np.column_stack([u, v]))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} on parts {0..a-1} and {a..a+b-1}."""
    if a < 1 or b < 1:
        raise GeneratorError(f"complete bipartite graph needs a, b >= 1, got ({a}, {b})")
    left = np.repeat(np.arange(a), b)
    right = np.tile(np.arange(a, a + b), a)
    return from_canonical(a + b, np.column_stack([left, right]))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GeneratorError(f"cycle needs n >= 3, got {n}")
    return build(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    if n < 1:
        raise GeneratorError(f"path needs n >= 1, got {n}")
    return build(n, [(i, i + 1) for i in range(n - 1)])


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def pp_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2, q) for prime q.

    Points are vertices 0..N-1 and lines N..2N-1 with N = q^2 + q + 1; the
    graph is (q+1)-regular, bipartite and has girth 6.
    """
    if not _is_prime(q):
        raise GeneratorError(f"pp_incidence needs a prime q, got {q}")
    reps = [(1, a, b) for a in range(q) for b in range(q)]
    reps += [(0, 1, b) for b in range(q)]
    reps.append((0, 0, 1))
    pts = np.array(reps, dtype=np.int64)
    size = len(reps)
    incident = (pts @ pts.T) % q == 0
    rows, cols = np.nonzero(incident)
    return from_canonical(2 * size, np.column_stack([rows, cols + size]))


def disjoint_copies(G: Graph, t: int) -> Graph:
    if t < 1:
        raise GeneratorError(f"need at least one copy, got t={t}")
    shifted = [G.edges + c * G.n for c in range(t)]
    return from_canonical(G.n * t, np.concatenate(shifted) if shifted else G.edges)


################################################################################
### Random regular graphs
def random_regular(n: int, k: int, seed: int) -> Graph:
    """A simple k-regular graph on n vertices from the pairing model.

    Stubs are shuffled and paired; pairs that would form a loop or a repeated
    edge are returned to the pool and re-paired. An attempt that gets stuck
    restarts from scratch, up to CONFIG_RETRY_FACTOR * n * k restarts.
    """
    if (n * k) % 2:
        raise GeneratorError(f"n*k must be even, got n={n}, k={k}")
    if not 0 <= k < n:
        raise GeneratorError(f"need 0 <= k < n, got n={n}, k={k}")
    rng = generator(seed)
    budget = max(1, config.CONFIG_RETRY_FACTOR * n * k)
    for attempt in range(budget):
        edges = _try_pairing(n, k, rng)
        if edges is not None:
            if attempt:
                logger.debug("random_regular(%d, %d) succeeded after %d restarts", n, k, attempt)
            return build(n, sorted(edges))
    raise RetryBudgetExhausted(f"random_regular({n}, {k}) failed after {budget} restarts")


def _try_pairing(n: int, k: int, rng: np.random.Generator) -> set[tuple[int, int]] | None:
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), k)
    while stubs.size:
        leftover: dict[int, int] = defaultdict(int)
        shuffled = rng.permutation(stubs).tolist()
        it = iter(shuffled)
        for s1, s2 in zip(it, it):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                leftover[s1] += 1
                leftover[s2] += 1
        if not _can_continue(edges, leftover):
            return None
        stubs = np.array([v for v, c in leftover.items() for _ in range(c)], dtype=np.int64)
    return edges


def _can_continue(edges: set[tuple[int, int]], leftover: dict[int, int]) -> bool:
    """Some pair of leftover vertices can still be joined."""
    if not leftover:
        return True
    nodes = sorted(leftover)
    for i, s1 in enumerate(nodes):
        for s2 in nodes[i + 1:]:
            if (s1, s2) not in edges:
                return True
    return False


################################################################################
### Girth repair
def girth_repair(
    G: Graph, g: int, seed: int, max_iters: int = config.GIRTH_REPAIR_MAX_ITERS
) -> GirthRepairResult:
    """Raise the girth above g with degree-preserving double edge swaps.

    Each step takes an edge {a, b} of the current shortest cycle and a random
    edge {c, d}, and proposes {a, d}, {c, b}. The swap is kept only when
    neither new edge closes a cycle of length <= g, so the number of short
    cycles strictly drops and the girth never decreases.
    """
    if g < 3:
        raise GeneratorError(f"target girth bound must be >= 3, got {g}")
    current = girth(G)
    if current.exceeds(g):
        return GirthRepairResult(G, True, 0, current)
    rng = generator(seed)
    adj = [set(nb) for nb in G.adj]
    edge_list = G.edge_list()
    position = {e: i for i, e in enumerate(edge_list)}
    graph = G
    for it in range(1, max_iters + 1):
        cyc = current.cycle
        i = int(rng.integers(len(cyc)))
        a, b = cyc[i], cyc[(i + 1) % len(cyc)]
        c, d = edge_list[int(rng.integers(len(edge_list)))]
        if rng.random() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4 or d in adj[a] or b in adj[c]:
            continue
        _remove(adj, edge_list, position, a, b)
        _remove(adj, edge_list, position, c, d)
        if _within(adj, a, d, g - 1):
            _add(adj, edge_list, position, a, b)
            _add(adj, edge_list, position, c, d)
            continue
        _add(adj, edge_list, position, a, d)
        if _within(adj, c, b, g - 1):
            _remove(adj, edge_list, position, a, d)
            _add(adj, edge_list, position, a, b)
            _add(adj, edge_list, position, c, d)
            continue
        _add(adj, edge_list, position, c, b)
        graph = build(G.n, sorted(edge_list))
        current = girth(graph)
        logger.debug("girth_repair iteration %d: girth now %s", it, current)
        if current.exceeds(g):
            return GirthRepairResult(graph, True, it, current)
    logger.warning("girth_repair budget of %d swaps exhausted at girth %s", max_iters, current)
    return GirthRepairResult(graph, False, max_iters, current)


def _key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _remove(adj, edge_list, position, u, v) -> None:
    adj[u].discard(v)
    adj[v].discard(u)
    e = _key(u, v)
    i = position.pop(e)
    last = edge_list.pop()
    if last != e:
        edge_list[i] = last
        position[last] = i


def _add(adj, edge_list, position, u, v) -> None:
    adj[u].add(v)
    adj[v].add(u)
    e = _key(u, v)
    position[e] = len(edge_list)
    edge_list.append(e)


def _within(adj, source: int, target: int, limit: int) -> bool:
    """Whether target is at distance <= limit from source."""
    seen = {source}
    frontier = deque([(source, 0)])
    while frontier:
        x, dist = frontier.popleft()
        if dist == limit:
            continue
        for y in adj[x]:
            if y == target:
                return True
            if y not in seen:
                seen.add(y)
                frontier.append((y, dist + 1))
    return False


################################################################################
### Spec dispatch
def declared_size(spec: GenSpec) -> tuple[int, int]:
    """Vertex and edge counts a GenSpec will produce, without building it."""
    p = spec.params
    if spec.kind == "complete":
        n = int(p["n"])
        return n, n * (n - 1) // 2
    if spec.kind == "complete_bipartite":
        a, b = int(p["a"]), int(p["b"])
        return a + b, a * b
    if spec.kind == "random_regular":
        n, k = int(p["n"]), int(p["k"])
        return n, n * k // 2
    if spec.kind == "pp_incidence":
        q = int(p["q"])
        points = q * q + q + 1
        return 2 * points, points * (q + 1)
    if spec.kind == "cycle":
        n = int(p["n"])
        return n, n
    if spec.kind == "path":
        n = int(p["n"])
        return n, max(n - 1, 0)
    if spec.kind == "disjoint_copies":
        n, m = declared_size(p["base"])
        t = int(p["t"])
        return t * n, t * m
    if spec.kind == "girth_repair":
        return declared_size(p["base"])
    raise GeneratorError(f"unknown generator kind {spec.kind!r}")


def build_from_spec(spec: GenSpec) -> Graph:
    """Materialize a GenSpec (nested specs for disjoint_copies/girth_repair)."""
    p = spec.params
    if spec.kind == "complete":
        return complete(int(p["n"]))
    if spec.kind == "complete_bipartite":
        return complete_bipartite(int(p["a"]), int(p["b"]))
    if spec.kind == "random_regular":
        return random_regular(int(p["n"]), int(p["k"]), spec.seed)
    if spec.kind == "pp_incidence":
        return pp_incidence(int(p["q"]))
    if spec.kind == "cycle":
        return cycle(int(p["n"]))
    if spec.kind == "path":
        return path(int(p["n"]))
    if spec.kind == "disjoint_copies":
        return disjoint_copies(build_from_spec(p["base"]), int(p["t"]))
    if spec.kind == "girth_repair":
        result = girth_repair(
            build_from_spec(p["base"]),
            int(p["g"]),
            spec.seed,
            int(p.get("max_iters", config.GIRTH_REPAIR_MAX_ITERS)),
        )
        if not result.success:
            raise GeneratorError(
                f"girth_repair could not raise the girth above {p['g']} in {result.iterations} swaps"
                f" (girth is {result.girth.length})"
            )
        return result.graph
    raise GeneratorError(f"unknown generator kind {spec.kind!r}")
