"""Bernoulli edge percolation.

Edge i of the base graph is kept iff U_i < p, where U_i is the i-th uniform of
the Philox stream keyed by the seed. The same seed therefore couples all
values of p monotonically, and the two rounds of a sprinkled sample are read
off the same uniforms.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from percolab import config
from percolab.errors import ProbabilityError
from percolab.graph import Graph, with_edges
from percolab.rng import uniforms

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubgraphSample:
    base: Graph = field(repr=False)
    kept: np.ndarray = field(repr=False)
    p: float
    seed: int

    @property
    def kept_count(self) -> int:
        return int(np.count_nonzero(self.kept))

    def materialize(self) -> Graph:
        return with_edges(self.base, self.kept)


@dataclass(frozen=True, eq=False)
class SprinklePair:
    p1: float
    p2: float
    round1: SubgraphSample
    combined: SubgraphSample


def _check_prob(p: float, name: str = "p") -> None:
    if not 0.0 <= p <= 1.0:
        raise ProbabilityError(f"{name} must lie in [0, 1], got {p}")


def edge_uniforms(G: Graph, seed: int) -> np.ndarray:
    return uniforms(seed, G.m)


def sample(G: Graph, p: float, seed: int) -> SubgraphSample:
    """G_p: each edge kept independently with probability p."""
    _check_prob(p)
    kept = edge_uniforms(G, seed) < p
    kept.flags.writeable = False
    return SubgraphSample(G, kept, float(p), int(seed))


def from_mask(G: Graph, mask: np.ndarray, p: float = float("nan"), seed: int = -1) -> SubgraphSample:
    """Wrap an explicit edge mask (e.g. a fixed subgraph) as a sample."""
    kept = np.array(mask, dtype=bool).reshape(G.m)
    kept.flags.writeable = False
    return SubgraphSample(G, kept, p, seed)


def two_round_split(p: float, p1: float) -> float:
    """p2 with (1 - p1)(1 - p2) = 1 - p."""
    _check_prob(p)
    _check_prob(p1, "p1")
    if p1 > p:
        raise ProbabilityError(f"first-round probability {p1} exceeds p={p}")
    if p1 == 1.0:
        return 0.0
    if p == 1.0:
        raise ProbabilityError("p = 1 needs p1 = 1")
    return 1.0 - (1.0 - p) / (1.0 - p1)


def sprinkle_identity_holds(p: float, p1: float, p2: float) -> bool:
    """p1 + (1 - p1) p2 = p up to REL_TOL."""
    return abs(p1 + (1 - p1) * p2 - p) <= config.REL_TOL * max(abs(p), 1e-300)


def sample_sprinkled(G: Graph, p: float, p1: float, seed: int) -> SprinklePair:
    """Expose G_p in two rounds: G_{p1}, then each remaining edge with p2.

    Round one keeps U_i < p1. Conditioned on U_i >= p1, U_i < p has
    probability p2, so adding those edges is an independent p2-sprinkle and
    the union is exactly sample(G, p, seed).
    """
    p2 = two_round_split(p, p1)
    u = edge_uniforms(G, seed)
    first = u < p1
    both = u < p
    first.flags.writeable = False
    both.flags.writeable = False
    logger.debug("sprinkle p=%g p1=%g p2=%g: %d then %d edges", p, p1, p2,
                 int(first.sum()), int(both.sum()))
    return SprinklePair(
        float(p1),
        p2,
        SubgraphSample(G, first, float(p1), int(seed)),
        SubgraphSample(G, both, float(p), int(seed)),
    )
