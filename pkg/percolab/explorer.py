"""Two-phase depth-first exploration of a subgraph G' of a known base graph G.

Phase 1 keeps the vertices partitioned into S (done), U (a stack, being
explored) and T (unvisited) and runs exactly 2n rounds. When U is empty the
smallest vertex of T is moved to U. Otherwise the top v of U queries its
G-neighbours in T in ascending order; the first positive answer moves that
neighbour onto U and ends the round, and if every answer is negative v moves
to S. Every pair still unqueried afterwards joins a vertex to one of its
ancestors in the spanning forest; phase 2 queries those pairs by ascending
tree distance len(v, w), ties broken by (min endpoint, max endpoint).

The algorithm asks about every edge of G exactly once, so the answers in query
order form a bit string of length e(G) that determines G' and vice versa.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from percolab.errors import BaseMismatchError, PercolabError, TraceLengthError
from percolab.graph import Graph, component_labels
from percolab.percolation import SubgraphSample

logger = logging.getLogger(__name__)

ROOT, PUSH, POP = 0, 1, 2
PHASE1, PHASE2 = 1, 2


################################################################################
### Types
@dataclass(frozen=True, eq=False)
class BitTrace:
    bits: np.ndarray

    @property
    def length(self) -> int:
        return int(self.bits.size)

    @property
    def ones(self) -> int:
        return int(np.count_nonzero(self.bits))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits.tolist())

    @classmethod
    def from_string(cls, text: str) -> BitTrace:
        text = text.strip()
        if set(text) - {"0", "1"}:
            raise PercolabError("a trace is a string of 0s and 1s")
        return cls(np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0"))

    @classmethod
    def from_bits(cls, bits) -> BitTrace:
        return cls(np.asarray(bits, dtype=np.uint8).ravel())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitTrace) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())


@dataclass(frozen=True, eq=False)
class DfsRun:
    """Full transcript of one exploration.

    `query_edges[i]` is the edge index asked by query i and
    `query_answers[i]` its answer; the first `phase1_query_count` queries are
    phase 1. Rounds are recorded as (kind, moved vertex, cumulative query
    count) and `sut_timeline[r]` holds |S|, |U|, |T| after round r.
    `unqueried` rows are (ancestor, descendant, len) in phase-2 order.
    """

    graph: Graph = field(repr=False)
    kept: np.ndarray = field(repr=False)
    parent: np.ndarray = field(repr=False)
    depth: np.ndarray = field(repr=False)
    roots: tuple[int, ...]
    query_edges: np.ndarray = field(repr=False)
    query_answers: np.ndarray = field(repr=False)
    phase1_query_count: int
    round_kind: np.ndarray = field(repr=False)
    round_vertex: np.ndarray = field(repr=False)
    round_query_end: np.ndarray = field(repr=False)
    sut_timeline: np.ndarray = field(repr=False)
    max_u: int
    max_u_path: tuple[int, ...] = field(repr=False)
    unqueried: np.ndarray = field(repr=False)

    @property
    def phase1_positive_count(self) -> int:
        return int(np.count_nonzero(self.query_answers[:self.phase1_query_count]))

    @property
    def phase2_answers(self) -> np.ndarray:
        return self.query_answers[self.phase1_query_count:]

    @property
    def phase2_positive_count(self) -> int:
        return int(np.count_nonzero(self.phase2_answers))

    @property
    def back_edges(self) -> np.ndarray:
        """(ancestor, descendant, len) rows for positive phase-2 answers."""
        return self.unqueried[self.phase2_answers.astype(bool)]

    @property
    def n_rounds(self) -> int:
        return int(self.round_kind.size)

    def trace(self) -> BitTrace:
        return BitTrace(self.query_answers.astype(np.uint8))


@dataclass(frozen=True)
class CycleCertificate:
    """A cycle of G' closed by a back edge: vertices[0] == vertices[-1]."""

    vertices: tuple[int, ...]
    back_edge: tuple[int, int]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


################################################################################
### Answer sources
class _MaskOracle:
    """Answers queries from an edge mask."""

    def __init__(self, kept: np.ndarray) -> None:
        self.kept = kept

    def peek(self, eids: np.ndarray) -> np.ndarray:
        return self.kept[eids]

    def consume(self, count: int) -> None:
        pass


class _TraceOracle:
    """Answers query number i with bit i of a trace."""

    def __init__(self, bits: np.ndarray) -> None:
        self.bits = bits.astype(bool)
        self.cursor = 0

    def peek(self, eids: np.ndarray) -> np.ndarray:
        end = self.cursor + eids.size
        if end > self.bits.size:
            raise TraceLengthError(f"trace exhausted after {self.bits.size} answers")
        return self.bits[self.cursor:end]

    def consume(self, count: int) -> None:
        self.cursor += count


################################################################################
### Exploration
def _explore(G: Graph, oracle) -> DfsRun:
    n, m = G.n, G.m
    indptr = G.indptr.tolist()
    indices = G.indices
    half_edge_ids = G.edge_ids
    ptr = indptr[:-1]
    in_t = np.ones(n, dtype=bool)
    parent = np.full(n, -1, dtype=np.int64)
    depth = np.zeros(n, dtype=np.int64)
    rounds = 2 * n
    round_kind = np.empty(rounds, dtype=np.int8)
    round_vertex = np.empty(rounds, dtype=np.int64)
    round_query_end = np.empty(rounds, dtype=np.int64)
    sut = np.empty((rounds, 3), dtype=np.int64)
    asked: list[np.ndarray] = []
    answered: list[np.ndarray] = []
    roots: list[int] = []
    stack: list[int] = []
    done = 0
    queries = 0
    next_t = 0
    max_u, max_path = 0, ()

    for r in range(rounds):
        if not stack:
            while not in_t[next_t]:
                next_t += 1
            v = next_t
            in_t[v] = False
            stack.append(v)
            roots.append(v)
            round_kind[r], round_vertex[r] = ROOT, v
        else:
            v = stack[-1]
            lo, hi = ptr[v], indptr[v + 1]
            moved = -1
            if lo < hi:
                nbrs = indices[lo:hi]
                cand = np.flatnonzero(in_t[nbrs])
                if cand.size:
                    eids = half_edge_ids[lo:hi][cand]
                    answers = oracle.peek(eids)
                    hits = np.flatnonzero(answers)
                    if hits.size:
                        j = int(hits[0])
                        take = j + 1
                        moved = int(nbrs[cand[j]])
                        ptr[v] = lo + int(cand[j]) + 1
                    else:
                        take = cand.size
                        ptr[v] = hi
                    asked.append(eids[:take])
                    answered.append(np.array(answers[:take], dtype=bool))
                    oracle.consume(take)
                    queries += take
                else:
                    ptr[v] = hi
            if moved >= 0:
                in_t[moved] = False
                parent[moved] = v
                depth[moved] = depth[v] + 1
                stack.append(moved)
                round_kind[r], round_vertex[r] = PUSH, moved
            else:
                stack.pop()
                done += 1
                round_kind[r], round_vertex[r] = POP, v
        round_query_end[r] = queries
        sut[r] = (done, len(stack), n - done - len(stack))
        if len(stack) > max_u:
            max_u, max_path = len(stack), tuple(stack)

    q_edges = np.concatenate(asked) if asked else np.empty(0, dtype=np.int64)
    q_answers = np.concatenate(answered) if answered else np.empty(0, dtype=bool)

    queried = np.zeros(m, dtype=bool)
    queried[q_edges] = True
    rest = np.flatnonzero(~queried)
    u, w = G.edges[rest, 0], G.edges[rest, 1]
    du, dw = depth[u], depth[w]
    lengths = np.abs(du - dw)
    order = np.lexsort((w, u, lengths))
    rest, u, w, du, dw, lengths = rest[order], u[order], w[order], du[order], dw[order], lengths[order]
    ancestor = np.where(du <= dw, u, w)
    descendant = np.where(du <= dw, w, u)
    phase2 = np.array(oracle.peek(rest), dtype=bool)
    oracle.consume(rest.size)

    all_edges = np.concatenate([q_edges, rest]).astype(np.int64)
    all_answers = np.concatenate([q_answers, phase2])
    kept = np.zeros(m, dtype=bool)
    kept[all_edges] = all_answers
    unqueried = np.column_stack([ancestor, descendant, lengths]).astype(np.int64).reshape(-1, 3)
    for a in (kept, parent, depth, all_edges, all_answers, round_kind, round_vertex,
              round_query_end, sut, unqueried):
        a.flags.writeable = False
    return DfsRun(
        graph=G,
        kept=kept,
        parent=parent,
        depth=depth,
        roots=tuple(roots),
        query_edges=all_edges,
        query_answers=all_answers,
        phase1_query_count=int(q_edges.size),
        round_kind=round_kind,
        round_vertex=round_vertex,
        round_query_end=round_query_end,
        sut_timeline=sut,
        max_u=max_u,
        max_u_path=max_path,
        unqueried=unqueried,
    )


def run(G: Graph, sample: SubgraphSample) -> DfsRun:
    """Explore the sampled subgraph of G."""
    if sample.base is not G and sample.base != G:
        raise BaseMismatchError("sample was drawn from a different base graph")
    result = _explore(G, _MaskOracle(sample.kept))
    logger.debug(
        "dfs on n=%d m=%d: Q=%d P=%d max|U|=%d back edges=%d",
        G.n, G.m, result.phase1_query_count, result.phase1_positive_count,
        result.max_u, result.phase2_positive_count,
    )
    return result


def encode(G: Graph, sample: SubgraphSample) -> BitTrace:
    """phi(G'): the answers in query order."""
    return run(G, sample).trace()


def decode_mask(G: Graph, trace: BitTrace) -> np.ndarray:
    if trace.length != G.m:
        raise TraceLengthError(f"trace has {trace.length} bits, graph has {G.m} edges")
    return _explore(G, _TraceOracle(trace.bits)).kept


def decode(G: Graph, trace: BitTrace) -> frozenset[tuple[int, int]]:
    """The subgraph (as an edge set) whose exploration answers are `trace`."""
    mask = decode_mask(G, trace)
    return frozenset((int(u), int(v)) for u, v in G.edges[mask])


################################################################################
### Certificates and statistics
def longest_path_certificate(result: DfsRun) -> tuple[int, ...]:
    """The largest U snapshot, a path of length max_u - 1 in G'."""
    return result.max_u_path


def longest_cycle_certificate(result: DfsRun) -> CycleCertificate | None:
    """The cycle closed by the back edge with the largest len, or None."""
    back = result.back_edges
    if back.shape[0] == 0:
        return None
    i = int(np.argmax(back[:, 2]))
    anc, desc = int(back[i, 0]), int(back[i, 1])
    walk = [desc]
    while walk[-1] != anc:
        walk.append(int(result.parent[walk[-1]]))
    walk.reverse()
    walk.append(anc)
    return CycleCertificate(tuple(walk), (anc, desc))


def certified_cycle_length(result: DfsRun) -> int:
    back = result.back_edges
    return int(back[:, 2].max()) + 1 if back.shape[0] else 0


def long_unqueried_count(result: DfsRun, ell: int) -> int:
    """Pairs unqueried after phase 1 whose tree distance is at least ell."""
    if ell < 1:
        raise PercolabError(f"ell must be >= 1, got {ell}")
    return int(np.count_nonzero(result.unqueried[:, 2] >= ell))


def stack_size_at_explored(result: DfsRun, size: int) -> int | None:
    """|U| at the first round where |S| + |U| reaches `size`."""
    explored = result.sut_timeline[:, 0] + result.sut_timeline[:, 1]
    hits = np.flatnonzero(explored >= size)
    return int(result.sut_timeline[hits[0], 1]) if hits.size else None


def query_log(result: DfsRun) -> Iterator[tuple[int, int, bool, int]]:
    """(u, v, answer, phase) per query, u < v."""
    edges = result.graph.edges
    for i, (e, a) in enumerate(zip(result.query_edges.tolist(), result.query_answers.tolist())):
        u, v = edges[e]
        yield int(u), int(v), bool(a), PHASE1 if i < result.phase1_query_count else PHASE2


################################################################################
### Replay checker
def check_properties(result: DfsRun) -> list[str]:
    """Replay a run and report every violated invariant; [] means it passed.

    Checks that the log answers agree with the explored subgraph and that
    each edge is asked once, then replays the rounds for: (1) a component is
    entirely in S when U empties; (2) with T nonempty, each positive phase-1
    answer grows U by one; (3) all S-T pairs were asked and answered
    negatively; (4) U always spans a path in G'. Phase 2 must hold exactly
    the remaining ancestor-descendant pairs in (len, min, max) order.
    """
    G = result.graph
    n, m = G.n, G.m
    edges = G.edges.tolist()
    kept = result.kept
    qe = result.query_edges.tolist()
    qa = result.query_answers.tolist()
    q1 = result.phase1_query_count
    out: list[str] = []

    if len(qe) != m:
        out.append(f"{len(qe)} queries for {m} edges")
    counts = np.bincount(result.query_edges, minlength=m) if m else np.zeros(0, dtype=np.int64)
    for e in np.flatnonzero(counts != 1).tolist():
        out.append(f"edge {tuple(edges[e])} asked {int(counts[e])} times")
    for i, (e, a) in enumerate(zip(qe, qa)):
        if bool(kept[e]) != a:
            out.append(f"query {i} on {tuple(edges[e])} answered {int(a)}, subgraph says {int(kept[e])}")
    if result.n_rounds != 2 * n:
        out.append(f"phase 1 ran {result.n_rounds} rounds, expected {2 * n}")

    sub_edges = G.edges[kept]
    _, labels = component_labels(n, sub_edges)
    T, U, S = 0, 1, 2
    state = [T] * n
    answer_of = [-1] * m
    stack: list[int] = []
    adj = G.adj
    tin = [-1] * n
    tout = [-1] * n
    pos = 0
    root = -1
    for r in range(result.n_rounds):
        kind = int(result.round_kind[r])
        x = int(result.round_vertex[r])
        end = int(result.round_query_end[r])
        if kind == ROOT:
            if stack:
                out.append(f"round {r}: new root {x} while U is nonempty")
            if end != pos:
                out.append(f"round {r}: root round asked queries")
            smallest = next((v for v in range(n) if state[v] == T), None)
            if x != smallest:
                out.append(f"round {r}: root {x} is not the smallest vertex of T ({smallest})")
            state[x] = U
            stack.append(x)
            tin[x] = r
            root = x
        else:
            if not stack:
                out.append(f"round {r}: U empty in a non-root round")
                break
            v = stack[-1]
            prev = -1
            last_other = None
            positives = 0
            for i in range(pos, end):
                a, b = edges[qe[i]]
                other = b if a == v else a if b == v else None
                if other is None:
                    out.append(f"query {i} on {(a, b)} does not involve the top vertex {v}")
                    continue
                if state[other] != T:
                    out.append(f"query {i} asks {v} about {other}, which is not in T")
                if other <= prev:
                    out.append(f"query {i}: T scanned out of order at {v}")
                prev = other
                answer_of[qe[i]] = int(qa[i])
                if qa[i]:
                    positives += 1
                    if i != end - 1:
                        out.append(f"query {i}: round continued after a positive answer")
                last_other = other
            if kind == PUSH:
                if end == pos or not qa[end - 1] or last_other != x:
                    out.append(f"(2) round {r}: {x} pushed without a positive answer from {v}")
                if state[x] != T:
                    out.append(f"round {r}: pushed vertex {x} was not in T")
                if int(result.parent[x]) != v:
                    out.append(f"round {r}: parent of {x} recorded as {int(result.parent[x])}, not {v}")
                e = G.edge_index(v, x)
                if e is None or not kept[e]:
                    out.append(f"(4) round {r}: U stops spanning a path at {v}-{x}")
                state[x] = U
                stack.append(x)
                tin[x] = r
            else:
                if positives:
                    out.append(f"(2) round {r}: positive answer did not grow U")
                if x != v:
                    out.append(f"round {r}: popped {x} but top of U is {v}")
                for y in adj[v]:
                    if state[y] == T:
                        e = G.edge_index(v, y)
                        if answer_of[e] != 0:
                            out.append(f"(3) pair {{{v}, {y}}} between S and T not answered negatively")
                state[v] = S
                stack.pop()
                tout[v] = r
                if not stack:
                    members = np.flatnonzero(labels == labels[root]).tolist()
                    missing = [u for u in members if state[u] != S]
                    if missing:
                        out.append(f"(1) round {r}: component of {root} finished with {missing[:5]} outside S")
        sizes = (state.count(S), len(stack), state.count(T))
        if tuple(int(s) for s in result.sut_timeline[r]) != sizes:
            out.append(f"round {r}: recorded |S|,|U|,|T| differ from replay {sizes}")
        pos = end
    if pos != q1:
        out.append(f"phase 1 replay consumed {pos} queries, log says {q1}")

    path = result.max_u_path
    if len(path) != result.max_u:
        out.append("max_U witness has the wrong size")
    for a, b in zip(path, path[1:]):
        e = G.edge_index(a, b)
        if e is None or not kept[e]:
            out.append(f"(4) max_U witness is not a path in G' at {a}-{b}")

    p2_edges = result.query_edges[q1:]
    unq = result.unqueried
    if unq.shape[0] != p2_edges.size:
        out.append("phase 2 log and unqueried list differ in size")
    else:
        ends = G.edges[p2_edges]
        pairs = np.sort(unq[:, :2], axis=1)
        if not np.array_equal(ends, pairs):
            out.append("phase 2 queries differ from the unqueried pairs")
        keys = list(zip(unq[:, 2].tolist(), pairs[:, 0].tolist(), pairs[:, 1].tolist()))
        if keys != sorted(keys):
            out.append("phase 2 is not in ascending (len, min, max) order")
        for (anc, desc, length) in unq.tolist():
            if not (tin[anc] <= tin[desc] and tout[desc] <= tout[anc]):
                out.append(f"unqueried pair ({anc}, {desc}) is not ancestor-descendant")
            elif int(result.depth[desc] - result.depth[anc]) != length:
                out.append(f"len({anc}, {desc}) recorded as {length}")
        for e in p2_edges.tolist():
            if answer_of[e] != -1:
                out.append(f"edge {tuple(edges[e])} asked in both phases")

    r_sub = int(labels.max()) + 1 if n else 0
    if result.phase1_positive_count != n - r_sub:
        out.append(f"phase 1 positives {result.phase1_positive_count} != n - r = {n - r_sub}")
    exc = int(kept.sum()) - n + r_sub
    if result.phase2_positive_count != exc:
        out.append(f"phase 2 positives {result.phase2_positive_count} != exc(G') = {exc}")
    return out
