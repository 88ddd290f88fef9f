"""Exact longest-path and circumference by bitmask dynamic programming.

Exponential in n and refused above the configured caps; used by the tests
and by `percolab verify` to bound the DFS certificates from above.
"""

from __future__ import annotations

from percolab import config
from percolab.errors import OracleLimitError
from percolab.graph import Graph


def _neighbour_masks(G: Graph) -> list[int]:
    return [sum(1 << w for w in nbrs) for nbrs in G.adj]


def longest_path_length(G: Graph) -> int:
    """Edges on a longest path of G (0 for edgeless or empty graphs)."""
    n = G.n
    if n > config.LONGEST_PATH_ORACLE_MAX_N:
        raise OracleLimitError(f"longest path oracle handles n <= {config.LONGEST_PATH_ORACLE_MAX_N}, got {n}")
    if n == 0:
        return 0
    nbr = _neighbour_masks(G)
    # ends[mask]: bitset of vertices at which a path covering exactly mask can end
    ends = [0] * (1 << n)
    for v in range(n):
        ends[1 << v] = 1 << v
    best = 1
    for mask in range(1, 1 << n):
        here = ends[mask]
        if not here:
            continue
        best = max(best, mask.bit_count())
        free = ~mask & ((1 << n) - 1)
        while free:
            low = free & -free
            w = low.bit_length() - 1
            if nbr[w] & here:
                ends[mask | low] |= low
            free ^= low
    return best - 1


def circumference(G: Graph) -> int:
    """Length of a longest cycle of G, 0 if G is a forest."""
    n = G.n
    if n > config.CIRCUMFERENCE_ORACLE_MAX_N:
        raise OracleLimitError(f"circumference oracle handles n <= {config.CIRCUMFERENCE_ORACLE_MAX_N}, got {n}")
    nbr = _neighbour_masks(G)
    best = 0
    for s in range(n):
        # paths from s through vertices larger than s only
        allowed = ((1 << n) - 1) & ~((1 << (s + 1)) - 1)
        ends = {1 << s: 1 << s}
        for mask in _masks_from(allowed, s):
            here = ends.get(mask, 0)
            if not here:
                continue
            size = mask.bit_count()
            if size >= 3 and here & nbr[s] and size > best:
                best = size
            free = allowed & ~mask
            while free:
                low = free & -free
                w = low.bit_length() - 1
                if nbr[w] & here:
                    ends[mask | low] = ends.get(mask | low, 0) | low
                free ^= low
    return best


def _masks_from(allowed: int, s: int):
    """Masks containing s plus any subset of `allowed`, in increasing order."""
    bits = [b for b in range(allowed.bit_length()) if allowed >> b & 1]
    for sub in range(1 << len(bits)):
        mask = 1 << s
        for i, b in enumerate(bits):
            if sub >> i & 1:
                mask |= 1 << b
        yield mask
