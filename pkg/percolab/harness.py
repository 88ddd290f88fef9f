"""Seeded Monte Carlo experiments over p-random subgraphs.

Trial t of an experiment with master seed s samples G_p with seed
trial_seed(s, t). Every grid point of a sweep uses the same schedule, so
per-trial statistics are coupled across p. Trials run in a process pool
when the work is large enough; results are always reduced in trial order.
"""

from __future__ import annotations

import csv
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence, TextIO

import numpy as np
from scipy import stats

from percolab import __version__, config
from percolab.errors import PercolabError, ProbabilityError
from percolab.explorer import certified_cycle_length, run, stack_size_at_explored
from percolab.extremal import explored_size, path_prob_lower_bound
from percolab.graph import Graph, component_labels, degree_stats, girth
from percolab.percolation import sample
from percolab.rng import trial_seed
from percolab.validation import validate_probability

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = (
    "p",
    "trials",
    "mean_cycle",
    "max_cycle",
    "frac_cycle_ge_lstar",
    "mean_path",
    "mean_excess",
    "mean_largest_comp_frac",
)
STRUCTURE_KINDS = ("path", "cycle")


################################################################################
### Result types
@dataclass(frozen=True)
class Estimate:
    trials: int
    successes: int
    point: float
    low: float
    high: float
    seed: int

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ExcessStats:
    trials: int
    mean: float
    std: float
    quantiles: dict[float, float]
    # (beta, fraction of trials with |exc - mean| >= beta p e(G), bound)
    deviation: tuple[tuple[float, float, float], ...]
    seed: int

    def to_json(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "mean": self.mean,
            "std": self.std,
            "quantiles": {str(q): v for q, v in self.quantiles.items()},
            "deviation": [{"beta": b, "fraction": f, "bound": bd} for b, f, bd in self.deviation],
            "seed": self.seed,
        }


@dataclass(frozen=True)
class IsolatedStats:
    trials: int
    mean: float
    lower_bound: float
    seed: int

    def to_json(self) -> dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class StackEstimate:
    estimate: Estimate
    explored: int
    bound: float

    def to_json(self) -> dict[str, Any]:
        return {"estimate": self.estimate.to_json(), "explored": self.explored, "bound": self.bound}


@dataclass(frozen=True)
class TrialOutcome:
    seed: int
    kept: int
    excess: int
    largest_component: int
    isolated: int
    root_component: int = 0
    path: int = 0
    cycle: int = 0
    stack_at: int | None = None


@dataclass(frozen=True)
class SweepRow:
    p: float
    trials: int
    mean_cycle: float
    max_cycle: int
    frac_cycle_ge_lstar: float
    mean_path: float
    max_path: int
    mean_excess: float
    mean_largest_comp_frac: float
    cycles: tuple[int, ...] = field(repr=False, default=())
    paths: tuple[int, ...] = field(repr=False, default=())
    excesses: tuple[int, ...] = field(repr=False, default=())
    largest: tuple[int, ...] = field(repr=False, default=())

    def to_json(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in SWEEP_COLUMNS} | {
            "max_path": self.max_path
        }


@dataclass(frozen=True)
class _Task:
    dfs: bool = False
    vertex: int = -1
    explored: int = 0


################################################################################
### Trials
def _trial(G: Graph, p: float, seed: int, task: _Task) -> TrialOutcome:
    sub = sample(G, p, seed)
    kept_edges = G.edges[sub.kept]
    r, labels = component_labels(G.n, kept_edges)
    sizes = np.bincount(labels, minlength=max(r, 1)) if G.n else np.zeros(1, dtype=np.int64)
    touched = np.bincount(kept_edges.ravel(), minlength=G.n) if G.n else np.zeros(0)
    outcome = dict(
        seed=seed,
        kept=int(kept_edges.shape[0]),
        excess=int(kept_edges.shape[0]) - G.n + r,
        largest_component=int(sizes.max()) if G.n else 0,
        isolated=int(np.count_nonzero(touched == 0)),
    )
    if task.vertex >= 0:
        outcome["root_component"] = int(sizes[labels[task.vertex]])
    if task.dfs:
        result = run(G, sub)
        outcome["path"] = result.max_u - 1 if G.n else 0
        outcome["cycle"] = certified_cycle_length(result)
        if task.explored:
            outcome["stack_at"] = stack_size_at_explored(result, task.explored)
    return TrialOutcome(**outcome)


_WORKER_GRAPH: Graph | None = None


def _init_worker(G: Graph) -> None:
    global _WORKER_GRAPH
    _WORKER_GRAPH = G


def _trial_batch(args: tuple[float, list[int], _Task]) -> list[TrialOutcome]:
    p, seeds, task = args
    return [_trial(_WORKER_GRAPH, p, s, task) for s in seeds]


def run_trials(
    G: Graph,
    p: float,
    trials: int,
    seed: int,
    task: _Task = _Task(),
    workers: int | None = None,
) -> list[TrialOutcome]:
    """Outcomes of trials 0..trials-1, in trial order."""
    if trials < 1:
        raise PercolabError(f"trials must be >= 1, got {trials}")
    if not 0.0 <= p <= 1.0:
        raise ProbabilityError(f"p must lie in [0, 1], got {p}")
    seeds = [trial_seed(seed, t) for t in range(trials)]
    workers = min(workers or config.MAX_WORKERS, trials)
    if workers <= 1 or trials * max(G.m, 1) < config.PARALLEL_MIN_WORK:
        return [_trial(G, p, s, task) for s in seeds]
    chunks = [c.tolist() for c in np.array_split(np.array(seeds, dtype=np.uint64), workers)]
    with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(G,)) as ex:
        batches = list(ex.map(_trial_batch, [(p, chunk, task) for chunk in chunks if chunk]))
    return [outcome for batch in batches for outcome in batch]


def wilson(successes: int, trials: int, seed: int) -> Estimate:
    """Point estimate with a Wilson interval at WILSON_CONFIDENCE."""
    point = successes / trials
    ci = stats.binomtest(successes, trials).proportion_ci(
        confidence_level=config.WILSON_CONFIDENCE, method="wilson"
    )
    low = max(0.0, min(float(ci.low), point))
    high = min(1.0, max(float(ci.high), point))
    return Estimate(trials, successes, point, low, high, seed)


def _timed(name: str, G: Graph, p: float, trials: int):
    logger.info("%s: n=%d m=%d p=%.6g trials=%d", name, G.n, G.m, p, trials)
    return time.perf_counter()


################################################################################
### Experiments
def structure_prob(
    G: Graph, p: float, kind: str, ell: int, trials: int, seed: int, workers: int | None = None
) -> Estimate:
    """P(the DFS certifies a path / cycle of length >= ell in G_p)."""
    if kind not in STRUCTURE_KINDS:
        raise PercolabError(f"kind must be one of {STRUCTURE_KINDS}, got {kind!r}")
    if ell < 1:
        raise PercolabError(f"ell must be >= 1, got {ell}")
    t0 = _timed(f"structure_prob[{kind}>={ell}]", G, p, trials)
    outcomes = run_trials(G, p, trials, seed, _Task(dfs=True), workers)
    attr = "path" if kind == "path" else "cycle"
    hits = sum(getattr(o, attr) >= ell for o in outcomes)
    logger.info("structure_prob: %d/%d in %.2fs", hits, trials, time.perf_counter() - t0)
    return wilson(hits, trials, seed)


def component_prob(
    G: Graph, p: float, v: int, s: int, trials: int, seed: int, workers: int | None = None
) -> Estimate:
    """P(the component of v in G_p has at least s vertices)."""
    if not 0 <= v < G.n:
        raise PercolabError(f"vertex {v} out of range for n={G.n}")
    t0 = _timed(f"component_prob[v={v},s={s}]", G, p, trials)
    outcomes = run_trials(G, p, trials, seed, _Task(vertex=v), workers)
    hits = sum(o.root_component >= s for o in outcomes)
    logger.info("component_prob: %d/%d in %.2fs", hits, trials, time.perf_counter() - t0)
    return wilson(hits, trials, seed)


def deviation_bound(beta: float, p: float, m: int) -> float:
    """2 exp(-beta^2 p e(G) / 3)."""
    return 2 * math.exp(-(beta ** 2) * p * m / 3)


def excess_stats(
    G: Graph,
    p: float,
    trials: int,
    seed: int,
    betas: Sequence[float] = config.DEVIATION_BETAS,
    workers: int | None = None,
) -> ExcessStats:
    """Mean, spread and concentration of exc(G_p)."""
    if trials < 2:
        raise PercolabError(f"excess_stats needs trials >= 2, got {trials}")
    t0 = _timed("excess_stats", G, p, trials)
    exc = np.array([o.excess for o in run_trials(G, p, trials, seed, _Task(), workers)], dtype=float)
    mean = float(exc.mean())
    quantiles = dict(zip(config.EXCESS_QUANTILES,
                         (float(q) for q in np.quantile(exc, config.EXCESS_QUANTILES))))
    scale = p * G.m
    deviation = tuple(
        (float(b), float(np.mean(np.abs(exc - mean) >= b * scale)), deviation_bound(b, p, G.m))
        for b in betas
    )
    logger.info("excess_stats: mean %.4g in %.2fs", mean, time.perf_counter() - t0)
    return ExcessStats(trials, mean, float(exc.std(ddof=1)), quantiles, deviation, seed)


def isolated_stats(G: Graph, p: float, trials: int, seed: int, workers: int | None = None) -> IsolatedStats:
    """Mean number of isolated vertices of G_p and the lower bound (1-p)^k n
    with k the average degree."""
    _, k, _ = degree_stats(G)
    outcomes = run_trials(G, p, trials, seed, _Task(), workers)
    mean = float(np.mean([o.isolated for o in outcomes]))
    return IsolatedStats(trials, mean, (1 - p) ** k * G.n, seed)


def explored_stack_prob(
    G: Graph, p: float, ell: int, eps: float, trials: int, seed: int, workers: int | None = None
) -> StackEstimate:
    """P(|U| >= ell when the DFS has explored ceil(6 ell/eps) vertices).

    A run that never explores that many vertices counts as a failure.
    """
    if ell < 1 or not 0 < eps <= 1:
        raise PercolabError(f"need ell >= 1 and 0 < eps <= 1, got ell={ell}, eps={eps}")
    size = explored_size(ell, eps)
    outcomes = run_trials(G, p, trials, seed, _Task(dfs=True, explored=size), workers)
    hits = sum(o.stack_at is not None and o.stack_at >= ell for o in outcomes)
    _, k, _ = degree_stats(G)
    return StackEstimate(wilson(hits, trials, seed), size, path_prob_lower_bound(k, eps))


def sweep(
    G: Graph,
    p_grid: Sequence[float],
    lstar: int,
    trials: int,
    seed: int,
    workers: int | None = None,
) -> list[SweepRow]:
    """One row per grid point, all on the same per-trial seed schedule."""
    grid = [float(p) for p in p_grid]
    if not grid:
        raise PercolabError("p grid is empty")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise PercolabError("p grid must be ascending")
    rows = []
    for p in grid:
        t0 = _timed("sweep", G, p, trials)
        outcomes = run_trials(G, p, trials, seed, _Task(dfs=True), workers)
        cycles = tuple(o.cycle for o in outcomes)
        paths = tuple(o.path for o in outcomes)
        excesses = tuple(o.excess for o in outcomes)
        largest = tuple(o.largest_component for o in outcomes)
        rows.append(SweepRow(
            p=p,
            trials=trials,
            mean_cycle=float(np.mean(cycles)),
            max_cycle=max(cycles),
            frac_cycle_ge_lstar=float(np.mean([c >= lstar for c in cycles])),
            mean_path=float(np.mean(paths)),
            max_path=max(paths),
            mean_excess=float(np.mean(excesses)),
            mean_largest_comp_frac=float(np.mean(largest)) / G.n if G.n else 0.0,
            cycles=cycles,
            paths=paths,
            excesses=excesses,
            largest=largest,
        ))
        logger.debug("sweep p=%.6g done in %.2fs", p, time.perf_counter() - t0)
    return rows


################################################################################
### Output
def _fmt(value: Any) -> str:
    return format(value, ".12g") if isinstance(value, float) else str(value)


def write_sweep_csv(rows: Iterable[SweepRow], target: str | Path | TextIO) -> None:
    def emit(fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, name)) for name in SWEEP_COLUMNS])

    if hasattr(target, "write"):
        emit(target)
    else:
        with open(target, "w", newline="", encoding="ascii") as fh:
            emit(fh)


def graph_summary(G: Graph) -> dict[str, Any]:
    min_deg, _, _ = degree_stats(G)
    g: int | str | None = None
    if G.m <= config.REPORT_GIRTH_MAX_EDGES:
        value = girth(G)
        g = "inf" if value.is_infinite else value.length
    return {"n": G.n, "m": G.m, "min_deg": min_deg, "girth": g}


def report(spec: str, G: Graph, results: list[dict[str, Any]], seed: int) -> dict[str, Any]:
    """JSON report: {spec, graph, results, seed, version}."""
    return {
        "spec": spec,
        "graph": graph_summary(G),
        "results": results,
        "seed": seed,
        "version": __version__,
    }


def resolve_probability(value: Any, G: Graph) -> float:
    """A number, or auto(c) = c / (minimum degree of G)."""
    ok, normalized, error = validate_probability(value)
    if not ok:
        raise ProbabilityError(error)
    mode, x = normalized
    if mode == "fixed":
        return x
    min_deg, _, _ = degree_stats(G)
    if min_deg == 0:
        raise ProbabilityError("auto(c) needs a graph with minimum degree >= 1")
    p = x / min_deg
    if p > 1:
        raise ProbabilityError(f"auto({x}) gives p = {p} > 1 for minimum degree {min_deg}")
    return p
