import networkx as nx
import numpy as np
import pytest

from percolab import generators
from percolab.errors import GeneratorError, RetryBudgetExhausted
from percolab.generators import GenSpec, build_from_spec
from percolab.graph import components, degree_stats, excess, girth, is_bipartite, to_networkx


def test_complete():
    assert generators.complete(5).m == 10
    assert generators.complete(1).m == 0
    assert degree_stats(generators.complete(7)) == (6, 6.0, 6)


def test_complete_bipartite():
    G = generators.complete_bipartite(3, 3)
    assert G.m == 9
    assert girth(G).length == 4
    assert generators.complete_bipartite(1, 1).edge_list() == [(0, 1)]
    assert sorted(generators.complete_bipartite(2, 3).degrees.tolist()) == [2, 2, 2, 3, 3]


def test_random_regular():
    G = generators.random_regular(10, 3, 5)
    assert G.m == 15
    assert set(G.degrees.tolist()) == {3}


def test_random_regular_is_seeded():
    assert generators.random_regular(40, 4, 9) == generators.random_regular(40, 4, 9)
    assert generators.random_regular(40, 4, 9) != generators.random_regular(40, 4, 10)


@pytest.mark.parametrize("n, k", [(5, 3), (4, 5), (3, -1)])
def test_random_regular_infeasible(n, k):
    with pytest.raises(GeneratorError):
        generators.random_regular(n, k, 0)


def test_random_regular_dense():
    G = generators.random_regular(12, 10, 3)
    assert set(G.degrees.tolist()) == {10}


def test_retry_budget_exhausted(monkeypatch):
    assert issubclass(RetryBudgetExhausted, GeneratorError)
    calls = []
    monkeypatch.setattr(generators.config, "CONFIG_RETRY_FACTOR", 1)
    monkeypatch.setattr(generators, "_try_pairing", lambda n, k, rng: calls.append(n) or None)
    with pytest.raises(RetryBudgetExhausted, match="30 restarts"):
        generators.random_regular(10, 3, 0)
    assert len(calls) == 30


def test_stuck_pairing_is_retried(monkeypatch):
    real = generators._try_pairing
    calls = []

    def stuck_first(n, k, rng):
        calls.append(n)
        return None if len(calls) < 3 else real(n, k, rng)

    monkeypatch.setattr(generators, "_try_pairing", stuck_first)
    G = generators.random_regular(10, 3, 0)
    assert len(calls) == 3
    assert set(G.degrees.tolist()) == {3}


@pytest.mark.parametrize("q", [2, 3, 5, 7, 11, 13])
def test_pp_incidence(q):
    G = generators.pp_incidence(q)
    n, k = 2 * (q * q + q + 1), q + 1
    assert (G.n, G.m) == (n, n * k // 2)
    assert degree_stats(G) == (k, float(k), k)
    assert girth(G).length == 6
    assert is_bipartite(G)


def test_pp_incidence_two_is_heawood():
    assert nx.is_isomorphic(to_networkx(generators.pp_incidence(2)), nx.heawood_graph())


def test_pp_incidence_rejects_non_prime():
    with pytest.raises(GeneratorError):
        generators.pp_incidence(4)


def test_disjoint_copies(triangle, petersen):
    G = generators.disjoint_copies(triangle, 2)
    assert G.n == 6
    assert components(G).count == 2
    assert excess(G) == 2
    assert generators.disjoint_copies(petersen, 1) == petersen
    assert girth(generators.disjoint_copies(petersen, 3)).length == 5


def test_girth_repair_leaves_good_graphs_alone(petersen):
    result = generators.girth_repair(petersen, 4, seed=1)
    assert result.success
    assert result.iterations == 0
    assert result.graph is petersen


def test_girth_repair_random_regular():
    G = generators.random_regular(200, 4, 17)
    result = generators.girth_repair(G, 4, seed=17)
    assert result.success
    assert girth(result.graph).length >= 5
    assert set(result.graph.degrees.tolist()) == {4}
    assert result.graph.m == G.m


def test_girth_repair_fails_on_k4(k4):
    result = generators.girth_repair(k4, 3, seed=0, max_iters=200)
    assert not result.success
    assert result.iterations == 200
    assert set(result.graph.degrees.tolist()) == {3}


def test_build_from_spec_nested():
    spec = GenSpec("disjoint_copies", {"t": 3, "base": GenSpec("complete", {"n": 4})})
    G = build_from_spec(spec)
    assert (G.n, G.m) == (12, 18)
    assert spec.to_json() == {"kind": "disjoint_copies", "t": 3,
                              "base": {"kind": "complete", "n": 4, "seed": 0}, "seed": 0}


def test_build_from_spec_unknown_kind():
    with pytest.raises(GeneratorError):
        build_from_spec(GenSpec("lattice", {"n": 3}))


def test_cycle_and_path():
    assert girth(generators.cycle(7)).length == 7
    assert np.array_equal(generators.path(4).edges, [[0, 1], [1, 2], [2, 3]])


def test_failed_girth_repair_is_an_error():
    spec = GenSpec("girth_repair", {"g": 3, "max_iters": 50, "base": GenSpec("complete", {"n": 4})})
    with pytest.raises(GeneratorError, match="girth is 3"):
        build_from_spec(spec)


def test_girth_repair_spec():
    spec = GenSpec("girth_repair", {"g": 4, "base": GenSpec("random_regular", {"n": 200, "k": 4}, 17)}, 17)
    G = build_from_spec(spec)
    assert girth(G).length >= 5
    assert G.m == 400


@pytest.mark.parametrize(
    "spec, size",
    [
        (GenSpec("complete", {"n": 200_000}), (200_000, 19_999_900_000)),
        (GenSpec("complete_bipartite", {"a": 3, "b": 4}), (7, 12)),
        (GenSpec("random_regular", {"n": 5000, "k": 100}), (5000, 250_000)),
        (GenSpec("pp_incidence", {"q": 13}), (366, 2562)),
        (GenSpec("cycle", {"n": 9}), (9, 9)),
        (GenSpec("path", {"n": 9}), (9, 8)),
        (GenSpec("disjoint_copies", {"t": 3, "base": GenSpec("complete", {"n": 4})}), (12, 18)),
        (GenSpec("girth_repair", {"g": 4, "base": GenSpec("cycle", {"n": 9})}), (9, 9)),
    ],
)
def test_declared_size(spec, size):
    assert generators.declared_size(spec) == size


@pytest.mark.parametrize("spec", [
    GenSpec("complete_bipartite", {"a": 3, "b": 4}),
    GenSpec("random_regular", {"n": 60, "k": 4}, 2),
    GenSpec("pp_incidence", {"q": 3}),
    GenSpec("path", {"n": 9}),
    GenSpec("disjoint_copies", {"t": 2, "base": GenSpec("cycle", {"n": 5})}),
])
def test_declared_size_matches_build(spec):
    G = build_from_spec(spec)
    assert generators.declared_size(spec) == (G.n, G.m)
