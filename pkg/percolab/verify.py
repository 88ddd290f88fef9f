"""Property suite behind `percolab verify`.

The quick suite runs the exact checks on reduced sample counts; the full
suite runs them at full size and adds the desk-scale Monte Carlo checks.
Each check returns a list of failure messages.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from itertools import product
from typing import Callable

import numpy as np

from percolab import explorer, extremal, generators, harness, oracles
from percolab.graph import Graph, build, excess, from_canonical
from percolab.percolation import from_mask, sample, sprinkle_identity_holds, two_round_split
from percolab.rng import generator, mix

logger = logging.getLogger(__name__)

VERIFY_SEED = 20240917
C0_REFERENCE = 1.593624


@dataclass(frozen=True)
class CheckResult:
    name: str
    failures: tuple[str, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures


def random_graph(n: int, q: float, seed: int) -> Graph:
    """G(n, q) as a p-random subgraph of K_n."""
    return sample(generators.complete(n), q, seed).materialize() if n > 1 else build(n, [])


################################################################################
### Exact checks
def check_hand_traces(_: bool) -> list[str]:
    out = []
    tri = generators.complete(3)
    full = explorer.run(tri, from_mask(tri, np.ones(3, bool)))
    if [(u, v, a) for u, v, a, _ in explorer.query_log(full)] != [(0, 1, True), (1, 2, True), (0, 2, True)]:
        out.append("triangle with all edges: unexpected query log")
    none = explorer.run(tri, from_mask(tri, np.zeros(3, bool)))
    if none.roots != (0, 1, 2) or none.phase1_query_count != 3:
        out.append("empty triangle: expected three roots after three negative queries")
    k4 = generators.complete(4)
    run = explorer.run(k4, from_mask(k4, np.ones(6, bool)))
    if run.unqueried.tolist() != [[0, 2, 2], [1, 3, 2], [0, 3, 3]]:
        out.append(f"K4: unqueried pairs {run.unqueried.tolist()}")
    cert = explorer.longest_cycle_certificate(run)
    if cert is None or cert.length != 4:
        out.append("K4: expected a certified 4-cycle")
    return out


def check_dfs_properties(full: bool) -> list[str]:
    out = []
    runs = 1000 if full else 100
    for i in range(runs):
        rng = generator(mix(VERIFY_SEED, 1, i))
        n = int(rng.integers(1, 51))
        G = random_graph(n, float(rng.choice([0.2, 0.5, 1.0])), mix(VERIFY_SEED, 2, i))
        p = (0.1, 1 / math.sqrt(n), 0.9)[i % 3]
        result = explorer.run(G, sample(G, p, mix(VERIFY_SEED, 3, i)))
        violations = explorer.check_properties(result)
        if violations:
            out.append(f"run {i} (n={n}, p={p:.3f}): {violations[0]}")
        if result.n_rounds != 2 * n:
            out.append(f"run {i}: {result.n_rounds} rounds for n={n}")
    return out


def check_bijection(full: bool) -> list[str]:
    out = []
    k4 = generators.complete(4)
    seen = set()
    for bits in product((0, 1), repeat=6):
        mask = np.array(bits, dtype=bool)
        trace = explorer.encode(k4, from_mask(k4, mask))
        seen.add(trace.bits.tobytes())
        if not np.array_equal(explorer.decode_mask(k4, trace), mask):
            out.append(f"K4 subgraph {bits} does not survive encode/decode")
        if trace.ones != int(mask.sum()):
            out.append(f"K4 subgraph {bits}: trace has {trace.ones} ones")
    if len(seen) != 64:
        out.append(f"K4: {len(seen)} distinct traces for 64 subgraphs")
    for i in range(500 if full else 100):
        rng = generator(mix(VERIFY_SEED, 4, i))
        G = random_graph(8, float(rng.uniform(0.2, 1.0)), mix(VERIFY_SEED, 5, i))
        mask = rng.random(G.m) < 0.5
        trace = explorer.encode(G, from_mask(G, mask))
        if not np.array_equal(explorer.decode_mask(G, trace), mask):
            out.append(f"random pair {i} does not survive encode/decode")
        if not explorer.encode(G, from_mask(G, explorer.decode_mask(G, trace))) == trace:
            out.append(f"random pair {i}: encode(decode(bits)) != bits")
    return out


def check_excess_monotone(full: bool) -> list[str]:
    out = []
    for i in range(1000 if full else 200):
        rng = generator(mix(VERIFY_SEED, 6, i))
        n = int(rng.integers(2, 16))
        K = generators.complete(n)
        mask = rng.random(K.m) < float(rng.uniform(0, 1))
        e = int(rng.integers(K.m))
        smaller = mask.copy()
        smaller[e] = False
        larger = mask.copy()
        larger[e] = True
        diff = excess(from_canonical(n, K.edges[larger])) - excess(from_canonical(n, K.edges[smaller]))
        if diff not in (0, 1):
            out.append(f"pair {i}: adding an edge changed the excess by {diff}")
    return out


def check_oracle_consistency(full: bool) -> list[str]:
    out = []
    for i in range(500 if full else 60):
        rng = generator(mix(VERIFY_SEED, 7, i))
        n = int(rng.integers(3, 13))
        G = random_graph(n, float(rng.uniform(0.15, 0.7)), mix(VERIFY_SEED, 8, i))
        result = explorer.run(G, from_mask(G, np.ones(G.m, bool)))
        cert = explorer.longest_cycle_certificate(result)
        circ = oracles.circumference(G)
        if cert is not None and cert.length > circ:
            out.append(f"graph {i}: certified cycle {cert.length} > circumference {circ}")
        if (cert is not None) != (excess(G) >= 1):
            out.append(f"graph {i}: certificate presence disagrees with excess {excess(G)}")
        if result.max_u - 1 > oracles.longest_path_length(G):
            out.append(f"graph {i}: certified path longer than the longest path")
    return out


def check_turan_lemmas(full: bool) -> list[str]:
    out = []
    top = 7 if full else 6
    for n in range(1, top + 1):
        if extremal.ex_bruteforce(n, extremal.TuranFamily.girth_greater(3)) != n * n // 4:
            out.append(f"ex({n}, C3) differs from floor(n^2/4)")
    families = [
        extremal.TuranFamily.explicit([generators.cycle(3)]),
        extremal.TuranFamily.explicit([generators.cycle(4)]),
        extremal.TuranFamily.explicit([generators.cycle(3), generators.cycle(4)]),
    ]
    for fam in families:
        ex = {n: extremal.ex_bruteforce(n, fam) for n in range(2, top + 1)}
        for m in range(2, top + 1):
            for n in range(m, top + 1):
                if ex[n] > extremal.turan_growth_bound(n, m, ex[m]) + 1e-9:
                    out.append(f"{fam}: growth bound fails at n={n}, m={m}")
                if ex[m] / m > extremal.turan_average_bound(n, ex[n]) + 1e-9:
                    out.append(f"{fam}: average bound fails at n={n}, m={m}")
    return out


def check_binomial_tails(_: bool) -> list[str]:
    out = []
    for n, p in product((10, 100, 1000), (0.01, 0.1, 0.5)):
        mu = n * p
        for i in range(1, 11):
            modes = [extremal.Chernoff(mu / 2 * i / 10), extremal.Mult(math.e * i / 10 + 0.5 * i)]
            for mode in modes:
                exact = extremal.binom_tail_exact(n, p, mode)
                bound = extremal.binom_tail_bound(n, p, mode)
                if exact > bound * (1 + 1e-12):
                    out.append(f"n={n} p={p} {mode}: exact {exact:.3g} > bound {bound:.3g}")
    return out


def check_c0(_: bool) -> list[str]:
    c0 = extremal.solve_c0()
    out = []
    if abs(c0 - C0_REFERENCE) > 1e-5:
        out.append(f"c0 = {c0}")
    if abs(c0 / 2 - 1 + math.exp(-c0)) > 1e-9:
        out.append(f"c0 residual {c0 / 2 - 1 + math.exp(-c0):.3g}")
    return out


def check_sprinkling(_: bool) -> list[str]:
    out = []
    grid = [0.0, 0.01, 0.1, 0.3, 0.5, 0.9, 0.99]
    for p, p1 in product(grid, grid):
        if p1 > p:
            continue
        p2 = two_round_split(p, p1)
        if not sprinkle_identity_holds(p, p1, p2):
            out.append(f"split({p}, {p1}) = {p2} breaks the identity")
    return out


################################################################################
### Desk-scale Monte Carlo (full suite only)
def check_long_path(_: bool) -> list[str]:
    G = generators.complete(1001)
    est = harness.structure_prob(G, 1.5 / 1000, "path", 6, 200, VERIFY_SEED)
    return [] if est.point >= 0.99 else [f"path >= 6 in {est.point:.3f} of trials"]


def check_regular_cycle(_: bool) -> list[str]:
    G = generators.random_regular(5000, 100, VERIFY_SEED)
    est = harness.structure_prob(G, 1.5 / 100, "cycle", 10, 100, VERIFY_SEED)
    return [] if est.point >= 0.9 else [f"cycle >= 10 in {est.point:.3f} of trials"]


def check_girth_contrast(_: bool) -> list[str]:
    G = generators.pp_incidence(13)
    k = 14
    lo, hi = harness.sweep(G, [0.8 / k, 1.5 / k], 1, 100, VERIFY_SEED)
    out = []
    if any(b < a for a, b in zip(lo.excesses, hi.excesses)):
        out.append("excess is not monotone along the coupled grid")
    if np.median(hi.cycles) < 5 * max(np.median(lo.cycles), 1):
        out.append(f"median cycle {np.median(hi.cycles)} vs {np.median(lo.cycles)}")
    return out


def check_component(_: bool) -> list[str]:
    G = generators.complete(501)
    est = harness.component_prob(G, 1.3 / 500, 0, 75, 2000, VERIFY_SEED)
    return [] if est.low > 0.05 else [f"Wilson lower bound {est.low:.4f} <= 0.05"]


def check_concentration(_: bool) -> list[str]:
    G = generators.complete(2001)
    st = harness.excess_stats(G, 1.2 / 2000, 500, VERIFY_SEED)
    return [f"beta={b}: {f:.3f} > {bound:.3f}" for b, f, bound in st.deviation if f > bound]


EXACT_CHECKS: dict[str, Callable[[bool], list[str]]] = {
    "hand-traces": check_hand_traces,
    "dfs-properties": check_dfs_properties,
    "bijection": check_bijection,
    "excess-monotone": check_excess_monotone,
    "oracle-consistency": check_oracle_consistency,
    "turan-lemmas": check_turan_lemmas,
    "binomial-tails": check_binomial_tails,
    "c0": check_c0,
    "sprinkling": check_sprinkling,
}
MONTE_CARLO_CHECKS: dict[str, Callable[[bool], list[str]]] = {
    "long-path": check_long_path,
    "regular-cycle": check_regular_cycle,
    "girth-contrast": check_girth_contrast,
    "component": check_component,
    "concentration": check_concentration,
}


def run_suite(quick: bool = True) -> list[CheckResult]:
    checks = dict(EXACT_CHECKS)
    if not quick:
        checks |= MONTE_CARLO_CHECKS
    results = []
    for name, check in checks.items():
        t0 = time.perf_counter()
        failures = tuple(check(not quick))
        seconds = time.perf_counter() - t0
        (logger.info if not failures else logger.error)(
            "%s: %s in %.2fs", name, "ok" if not failures else f"{len(failures)} failure(s)", seconds
        )
        results.append(CheckResult(name, failures, seconds))
    return results
