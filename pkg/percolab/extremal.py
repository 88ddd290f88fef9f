"""Turán-number machinery.

An exhaustive ex(n, H) oracle for n <= 8, explicit ex brackets for the
families we care about, the n_H(k) bracket derived from nk <= 2 ex(n, H),
the path and cycle length budgets, binomial tail bounds and the root c0 of
c/2 - 1 + e^{-c} = 0.

Only Empty and GirthGreater(3) (Mantel) have exact closed forms. The girth
brackets use explicit formulas with configurable constants; they size
experiments and are checked only against the exhaustive oracle at small n.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Sequence

from scipy import optimize, stats

from percolab import config
from percolab.errors import OracleLimitError, PercolabError, ProbabilityError
from percolab.generators import cycle
from percolab.graph import Graph, build, component_labels, embeds_through_edge, girth, is_bipartite

logger = logging.getLogger(__name__)

EMPTY = "empty"
GIRTH_GREATER = "girth_greater"
EXPLICIT = "explicit"


################################################################################
### Families
@dataclass(frozen=True)
class TuranFamily:
    """A good family H: Empty, GirthGreater(g) = {C3..Cg}, or explicit patterns.

    Build through the classmethods; `explicit` normalizes a set of cycles
    C3..Cg to GirthGreater(g).
    """

    variant: str
    g: int | None = None
    patterns: tuple[Graph, ...] = field(default=(), compare=False)

    @classmethod
    def empty(cls) -> TuranFamily:
        return cls(EMPTY)

    @classmethod
    def girth_greater(cls, g: int) -> TuranFamily:
        if g < 3:
            raise PercolabError(f"girth family needs g >= 3, got {g}")
        return cls(GIRTH_GREATER, g=g)

    @classmethod
    def explicit(cls, patterns: Sequence[Graph]) -> TuranFamily:
        patterns = tuple(patterns)
        if not patterns:
            return cls.empty()
        for i, p in enumerate(patterns):
            r, _ = component_labels(p.n, p.edges)
            if r != 1 or p.m < p.n:
                raise PercolabError(f"pattern {i} must be connected and contain a cycle")
        lengths = sorted(p.n for p in patterns if _is_cycle(p))
        if len(lengths) == len(patterns) and lengths == list(range(3, 3 + len(lengths))):
            return cls.girth_greater(lengths[-1])
        return cls(EXPLICIT, patterns=patterns)

    @property
    def key(self) -> tuple:
        return (self.variant, self.g, tuple(p.edges.tobytes() for p in self.patterns))

    def __hash__(self) -> int:
        return hash(self.key)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TuranFamily) and self.key == other.key

    def concrete_patterns(self) -> tuple[Graph, ...]:
        if self.variant == GIRTH_GREATER:
            return tuple(cycle(length) for length in range(3, self.g + 1))
        return self.patterns

    def is_non_bipartite_only(self) -> bool:
        pats = self.concrete_patterns()
        return bool(pats) and all(not is_bipartite(p) for p in pats)

    def max_pattern_girth(self) -> int:
        return max(girth(p).length for p in self.concrete_patterns())

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"variant": self.variant}
        if self.variant == GIRTH_GREATER:
            out["g"] = self.g
        if self.variant == EXPLICIT:
            out["patterns"] = [p.edge_list() for p in self.patterns]
        return out

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> TuranFamily:
        variant = obj.get("variant")
        if variant == EMPTY:
            return cls.empty()
        if variant == GIRTH_GREATER:
            return cls.girth_greater(int(obj["g"]))
        if variant == EXPLICIT:
            pats = []
            for edges in obj.get("patterns", []):
                edges = [tuple(e) for e in edges]
                n = 1 + max((max(e) for e in edges), default=-1)
                pats.append(build(n, edges))
            return cls.explicit(pats)
        raise PercolabError(f"unknown family variant {variant!r}")

    def __str__(self) -> str:
        if self.variant == GIRTH_GREATER:
            return f"girth>{self.g}"
        if self.variant == EXPLICIT:
            return f"explicit[{len(self.patterns)}]"
        return "empty"


def _is_cycle(p: Graph) -> bool:
    return p.n >= 3 and p.m == p.n and bool((p.degrees == 2).all())


@dataclass(frozen=True)
class ExBracket:
    n: int
    lower: int
    upper: int
    exact: int | None = None
    available: bool = True      # False: explicit family above the oracle cap
    heuristic: bool = False     # True: formula constants are not proven

    def to_row(self) -> tuple:
        return (self.n, self.lower, "" if self.exact is None else self.exact, self.upper)


################################################################################
### Exhaustive oracle
def ex_bruteforce(n: int, family: TuranFamily) -> int:
    """Exact ex(n, H) by pruned search over labelled graphs, n <= 8."""
    if n > config.EX_BRUTEFORCE_MAX_N:
        raise OracleLimitError(f"ex_bruteforce is capped at n={config.EX_BRUTEFORCE_MAX_N}, got {n}")
    return _ex_bruteforce(n, family)


@lru_cache(maxsize=None)
def _ex_bruteforce(n: int, family: TuranFamily) -> int:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if family.variant == EMPTY or n < 3:
        return len(pairs)
    adj: list[set[int]] = [set() for _ in range(n)]
    if family.variant == GIRTH_GREATER:
        g = family.g

        def closes_pattern(u: int, v: int) -> bool:
            return _distance_at_most(adj, u, v, g - 1)
    else:
        patterns = family.patterns

        def closes_pattern(u: int, v: int) -> bool:
            adj[u].add(v)
            adj[v].add(u)
            hit = any(embeds_through_edge(adj, p, u, v) for p in patterns)
            adj[u].discard(v)
            adj[v].discard(u)
            return hit

    # a tree is H-free; so is K_{n/2,n/2} when no pattern is bipartite
    certified = n - 1
    if family.is_non_bipartite_only():
        certified = max(certified, n * n // 4)
    best = certified - 1
    total = len(pairs)

    def search(idx: int, count: int) -> None:
        nonlocal best
        if count + (total - idx) <= best:
            return
        if idx == total:
            best = count
            return
        u, v = pairs[idx]
        if not closes_pattern(u, v):
            adj[u].add(v)
            adj[v].add(u)
            search(idx + 1, count + 1)
            adj[u].discard(v)
            adj[v].discard(u)
        if idx > 0:
            search(idx + 1, count)

    # any nonempty H-free graph can be relabelled to contain the edge {0, 1}
    search(0, 0)
    logger.debug("ex(%d, %s) = %d", n, family, best)
    return best


def _distance_at_most(adj: Sequence[set[int]], source: int, target: int, limit: int) -> bool:
    frontier = {source}
    seen = {source}
    for _ in range(limit):
        nxt = set()
        for x in frontier:
            for y in adj[x]:
                if y == target:
                    return True
                if y not in seen:
                    seen.add(y)
                    nxt.add(y)
        if not nxt:
            return False
        frontier = nxt
    return False


################################################################################
### Brackets
def _girth_bracket(n: int, g: int, c_up: float, c_lo: float) -> tuple[int, int]:
    total = n * (n - 1) // 2
    t = g // 2
    upper = min(total, math.floor(c_up * 0.5 * (n ** (1 + 1 / t) + n)))
    lower = math.floor(c_lo * 0.25 * n ** (1 + 1 / (g - 1)))
    trivial = max(n - 1, 0) if n <= g else n
    lower = min(max(lower, trivial), upper)
    return lower, upper


def ex_bracket(
    n: int,
    family: TuranFamily,
    c_up: float = config.DEFAULT_C_UP,
    c_lo: float = config.DEFAULT_C_LO,
) -> ExBracket:
    total = n * (n - 1) // 2
    if family.variant == EMPTY:
        return ExBracket(n, total, total, total)
    if family.variant == GIRTH_GREATER:
        if family.g == 3:
            mantel = n * n // 4
            return ExBracket(n, mantel, mantel, mantel)
        lower, upper = _girth_bracket(n, family.g, c_up, c_lo)
        return ExBracket(n, lower, upper, heuristic=True)
    if n <= config.EX_BRUTEFORCE_MAX_N:
        exact = ex_bruteforce(n, family)
        return ExBracket(n, exact, exact, exact)
    if family.is_non_bipartite_only():
        lower = n * n // 4
    else:
        lower, _ = _girth_bracket(n, family.max_pattern_girth(), c_up, c_lo)
    return ExBracket(n, lower, total, available=False, heuristic=True)


def ex_upper(n: int, family: TuranFamily, c_up: float = config.DEFAULT_C_UP) -> int:
    return ex_bracket(n, family, c_up=c_up).upper


def ex_lower(n: int, family: TuranFamily, c_lo: float = config.DEFAULT_C_LO) -> int:
    return ex_bracket(n, family, c_lo=c_lo).lower


################################################################################
### Scans
def _first_true(pred: Callable[[int], bool], start: int) -> int:
    """Smallest x >= start with pred(x).

    Ascending scan for LINEAR_SCAN_LIMIT steps; past that pred is assumed
    monotone and the answer is found by galloping then bisection.
    """
    x = start
    stop = start + config.LINEAR_SCAN_LIMIT
    while x < stop:
        if pred(x):
            return x
        x += 1
    lo, step = x - 1, 1
    hi = x
    while not pred(hi):
        lo = hi
        step *= 2
        hi = lo + step
        if hi > config.SCAN_CEILING:
            raise OracleLimitError(f"scan passed {config.SCAN_CEILING} without success")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class NhBracket:
    n_lo: int
    n_hi: int

    @property
    def exact(self) -> bool:
        return self.n_lo == self.n_hi


def n_h_bracket(
    k: float,
    family: TuranFamily,
    c_up: float = config.DEFAULT_C_UP,
    c_lo: float = config.DEFAULT_C_LO,
) -> NhBracket:
    """Bracket on n_H(k), the least n with n*k <= 2 ex(n, H).

    n_lo uses the upper ex bracket, n_hi the lower one. Every family has
    n_H(k) >= k + 1, so the scan starts there.
    """
    if k < 1:
        raise PercolabError(f"k must be >= 1, got {k}")
    start = math.ceil(k) + 1
    n_lo = _first_true(lambda n: n * k <= 2 * ex_upper(n, family, c_up), start)
    n_hi = _first_true(lambda n: n * k <= 2 * ex_lower(n, family, c_lo), start)
    return NhBracket(n_lo, max(n_hi, n_lo))


def explored_size(ell: int, eps: float) -> int:
    """ceil(6 ell / eps), the explored-set size at which |U| >= ell is expected."""
    return math.ceil(6 * ell / eps * (1 - 1e-12))


def path_len_budget(
    k: float,
    eps: float,
    family: TuranFamily,
    c_up: float = config.DEFAULT_C_UP,
    c_lo: float = config.DEFAULT_C_LO,
) -> tuple[int, int]:
    """Largest ell with ex(6 ell/eps, H) / ell <= k/2, once with the upper ex
    bracket (a guaranteed value) and once with the lower one."""
    if k < 1 or not 0 < eps <= 1:
        raise PercolabError(f"need k >= 1 and 0 < eps <= 1, got k={k}, eps={eps}")

    def largest(f: Callable[[int], int]) -> int:
        return _first_true(lambda ell: 2 * f(explored_size(ell, eps)) > k * ell, 1) - 1

    ell_lo = largest(lambda m: ex_upper(m, family, c_up))
    ell_hi = largest(lambda m: ex_lower(m, family, c_lo))
    return ell_lo, max(ell_hi, ell_lo)


def cycle_len_budget(
    k: float,
    c: float,
    family: TuranFamily,
    c_up: float = config.DEFAULT_C_UP,
    c_lo: float = config.DEFAULT_C_LO,
) -> tuple[int, int]:
    """Largest ell with ex(ell, H) <= c k ell / 20, for the upper and the
    lower ex bracket."""
    if c <= 0:
        raise PercolabError(f"c must be positive, got {c}")

    def largest(f: Callable[[int], int]) -> int:
        return _first_true(lambda ell: 20 * f(ell) > c * k * ell, 1) - 1

    ell_lo = largest(lambda m: ex_upper(m, family, c_up))
    ell_hi = largest(lambda m: ex_lower(m, family, c_lo))
    return ell_lo, max(ell_hi, ell_lo)


################################################################################
### Turán growth estimates
def turan_growth_bound(n: int, m: int, ex_m: int) -> float:
    """ex(n, H) <= ((n-1)/(m-1))^2 ex(m, H) for n >= m >= 2."""
    if not n >= m >= 2:
        raise PercolabError(f"need n >= m >= 2, got n={n}, m={m}")
    return ((n - 1) / (m - 1)) ** 2 * ex_m


def turan_average_bound(n: int, ex_n: int) -> float:
    """Upper bound 2 ex(n, H)/n on ex(m, H)/m for every 2 <= m <= n (good H)."""
    return 2 * ex_n / n


################################################################################
### Binomial tails
@dataclass(frozen=True)
class Chernoff:
    """P(|X - np| > a), valid for 0 < a <= np/2."""

    a: float


@dataclass(frozen=True)
class Mult:
    """P(X > kappa np), valid for kappa > 0."""

    kappa: float


def binom_tail_bound(n: int, p: float, mode: Chernoff | Mult) -> float:
    mu = n * p
    if isinstance(mode, Chernoff):
        if not 0 < mode.a <= mu / 2:
            raise ProbabilityError(f"Chernoff bound needs 0 < a <= np/2 = {mu / 2}, got a={mode.a}")
        return 2 * math.exp(-mode.a ** 2 / (4 * mu))
    if isinstance(mode, Mult):
        if mode.kappa <= 0:
            raise ProbabilityError(f"kappa must be positive, got {mode.kappa}")
        return math.exp(mode.kappa * mu * (1 - math.log(mode.kappa)))
    raise ProbabilityError(f"unknown tail mode {mode!r}")


def _snap(x: float) -> float:
    r = round(x)
    return float(r) if abs(x - r) < 1e-9 else x


def binom_tail_exact(n: int, p: float, mode: Chernoff | Mult) -> float:
    """Exact probability of the event that binom_tail_bound bounds."""
    mu = n * p
    dist = stats.binom(n, p)
    if isinstance(mode, Chernoff):
        upper = math.floor(_snap(mu + mode.a))
        lower = math.ceil(_snap(mu - mode.a)) - 1
        return float(dist.sf(upper) + (dist.cdf(lower) if lower >= 0 else 0.0))
    if isinstance(mode, Mult):
        return float(dist.sf(math.floor(_snap(mode.kappa * mu))))
    raise ProbabilityError(f"unknown tail mode {mode!r}")


################################################################################
### Probability and threshold quantities
def solve_c0() -> float:
    """Positive root of c/2 - 1 + e^{-c} = 0 (about 1.5936)."""
    lo, hi = config.C0_BRACKET
    return float(optimize.bisect(lambda c: c / 2 - 1 + math.exp(-c), lo, hi, xtol=config.C0_XTOL))


def path_prob_lower_bound(k: float, eps: float) -> float:
    """1 - 3 exp(-eps^3 k / 300): guaranteed probability of the long path."""
    return 1 - 3 * math.exp(-(eps ** 3) * k / 300)


def girth_cycle_target(k: float, g: int, delta: float) -> float:
    """delta * k^floor(g/2): cycle length promised when the girth exceeds g."""
    return delta * k ** (g // 2)


def avg_degree_threshold(k: float, eps: float) -> float:
    """(c0 + eps)/k: edge probability above which E[exc(G_p)] is linear for
    graphs of average degree k."""
    return (solve_c0() + eps) / k
