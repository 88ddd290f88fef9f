import itertools

import networkx as nx
import pytest
from hypothesis import given, settings

from percolab import generators, oracles
from percolab.errors import OracleLimitError
from percolab.graph import build, to_networkx

from .strategies import graphs


def _brute_longest_path(G) -> int:
    nxg = to_networkx(G)
    best = 0
    for source in nxg.nodes:
        for target in nxg.nodes:
            if source < target:
                for p in nx.all_simple_paths(nxg, source, target):
                    best = max(best, len(p) - 1)
    return best


def _brute_circumference(G) -> int:
    return max((len(c) for c in nx.simple_cycles(to_networkx(G))), default=0)


def test_known_values(k4, petersen):
    assert oracles.longest_path_length(k4) == 3
    assert oracles.circumference(k4) == 4
    assert oracles.circumference(petersen) == 9
    assert oracles.longest_path_length(petersen) == 9
    assert oracles.circumference(generators.path(7)) == 0
    assert oracles.longest_path_length(generators.path(7)) == 6
    assert oracles.longest_path_length(build(3, [])) == 0


def test_disconnected_cycles():
    G = generators.disjoint_copies(generators.cycle(5), 2)
    assert oracles.circumference(G) == 5
    assert oracles.longest_path_length(G) == 4


@settings(max_examples=120, deadline=None)
@given(graphs(max_n=7))
def test_oracles_match_enumeration(G):
    assert oracles.longest_path_length(G) == _brute_longest_path(G)
    assert oracles.circumference(G) == _brute_circumference(G)


@pytest.mark.parametrize("oracle", [oracles.longest_path_length, oracles.circumference])
def test_oracles_refuse_large_graphs(oracle):
    with pytest.raises(OracleLimitError):
        oracle(generators.cycle(13))


def test_circumference_of_complete_graphs():
    for n in range(3, 9):
        assert oracles.circumference(generators.complete(n)) == n
    assert all(oracles.circumference(generators.complete(n)) == 0 for n in (1, 2))


def test_bipartite_circumference():
    for a, b in itertools.product(range(2, 5), repeat=2):
        assert oracles.circumference(generators.complete_bipartite(a, b)) == 2 * min(a, b)
