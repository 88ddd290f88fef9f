import dataclasses
import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from percolab import explorer, generators, oracles, percolation
from percolab.errors import BaseMismatchError, PercolabError, TraceLengthError
from percolab.explorer import POP, PUSH, ROOT, BitTrace
from percolab.graph import build, components, excess, with_edges
from percolab.percolation import from_mask

from .strategies import graphs_with_masks


def test_triangle_fully_kept(triangle, full):
    run = explorer.run(triangle, full(triangle))
    assert run.round_kind.tolist() == [ROOT, PUSH, PUSH, POP, POP, POP]
    assert run.round_vertex.tolist() == [0, 1, 2, 2, 1, 0]
    assert run.round_query_end.tolist() == [0, 1, 2, 2, 2, 2]
    assert run.sut_timeline.tolist() == [[0, 1, 2], [0, 2, 1], [0, 3, 0], [1, 2, 0], [2, 1, 0], [3, 0, 0]]
    assert run.query_edges.tolist() == [0, 2, 1]
    assert run.trace().to_string() == "111"
    assert run.max_u == 3
    assert explorer.longest_path_certificate(run) == (0, 1, 2)
    assert run.unqueried.tolist() == [[0, 2, 2]]
    assert explorer.certified_cycle_length(run) == 3
    assert run.roots == (0,)


def test_triangle_with_nothing_kept(triangle, none):
    run = explorer.run(triangle, none(triangle))
    assert run.round_kind.tolist() == [ROOT, POP, ROOT, POP, ROOT, POP]
    assert run.roots == (0, 1, 2)
    assert run.query_edges.tolist() == [0, 1, 2]
    assert run.trace().to_string() == "000"
    assert run.max_u == 1
    assert run.unqueried.shape == (0, 3)
    assert explorer.longest_cycle_certificate(run) is None
    assert explorer.certified_cycle_length(run) == 0


def test_k4_fully_kept(k4, full):
    run = explorer.run(k4, full(k4))
    assert run.phase1_query_count == 3
    assert run.query_edges.tolist() == [0, 3, 5, 1, 4, 2]
    assert run.unqueried.tolist() == [[0, 2, 2], [1, 3, 2], [0, 3, 3]]
    assert explorer.long_unqueried_count(run, 3) == 1
    assert explorer.long_unqueried_count(run, 2) == 3
    assert explorer.certified_cycle_length(run) == 4
    cert = explorer.longest_cycle_certificate(run)
    assert cert.vertices == (0, 1, 2, 3, 0)
    assert cert.back_edge == (0, 3)
    assert cert.length == 4
    assert explorer.check_properties(run) == []


def test_query_log(triangle, full):
    run = explorer.run(triangle, full(triangle))
    assert list(explorer.query_log(run)) == [
        (0, 1, True, explorer.PHASE1),
        (1, 2, True, explorer.PHASE1),
        (0, 2, True, explorer.PHASE2),
    ]


def test_decode_extremes(petersen):
    assert explorer.decode(petersen, BitTrace.from_bits([1] * 15)) == frozenset(petersen.edge_list())
    assert explorer.decode(petersen, BitTrace.from_bits([0] * 15)) == frozenset()


def test_k4_encoding_is_a_bijection(k4):
    traces = set()
    for bits in itertools.product([False, True], repeat=k4.m):
        mask = np.array(bits)
        trace = explorer.encode(k4, from_mask(k4, mask))
        assert trace.length == 6
        assert np.array_equal(explorer.decode_mask(k4, trace), mask)
        traces.add(trace.to_string())
    assert len(traces) == 64


@settings(max_examples=300, deadline=None)
@given(graphs_with_masks(max_n=9))
def test_decode_inverts_encode(case):
    G, mask = case
    sample = from_mask(G, mask)
    trace = explorer.encode(G, sample)
    assert trace.ones == sample.kept_count
    assert explorer.decode(G, trace) == frozenset(with_edges(G, sample.kept).edge_list())


@settings(max_examples=300, deadline=None)
@given(graphs_with_masks(max_n=10))
def test_random_runs_pass_replay(case):
    G, mask = case
    run = explorer.run(G, from_mask(G, mask))
    assert explorer.check_properties(run) == []
    sub = with_edges(G, run.kept)
    assert run.phase1_positive_count == G.n - components(sub).count
    assert run.phase2_positive_count == excess(sub)


@settings(max_examples=150, deadline=None)
@given(graphs_with_masks(max_n=9))
def test_certificates_are_bounded_by_oracles(case):
    G, mask = case
    run = explorer.run(G, from_mask(G, mask))
    sub = with_edges(G, run.kept)
    assert run.max_u - 1 <= oracles.longest_path_length(sub)
    assert explorer.certified_cycle_length(run) <= oracles.circumference(sub)
    cert = explorer.longest_cycle_certificate(run)
    if cert is not None:
        assert cert.vertices[0] == cert.vertices[-1]
        assert len(set(cert.vertices)) == cert.length
        for a, b in zip(cert.vertices, cert.vertices[1:]):
            assert sub.has_edge(a, b)


def test_flipped_answers_are_caught(petersen):
    run = explorer.run(petersen, percolation.sample(petersen, 0.6, 3))
    flipped = run.query_answers.copy()
    flipped[0] = not flipped[0]
    assert explorer.check_properties(dataclasses.replace(run, query_answers=flipped))


def test_shuffled_phase_two_is_caught(k4, full):
    run = explorer.run(k4, full(k4))
    edges = run.query_edges.copy()
    edges[3], edges[5] = edges[5], edges[3]
    report = explorer.check_properties(dataclasses.replace(run, query_edges=edges))
    assert any("phase 2" in line for line in report)


def test_wrong_round_count_is_caught(triangle, full):
    run = explorer.run(triangle, full(triangle))
    broken = dataclasses.replace(run, round_kind=run.round_kind[:-1])
    assert any("rounds" in line for line in explorer.check_properties(broken))


def test_base_mismatch(k4, petersen):
    with pytest.raises(BaseMismatchError):
        explorer.run(k4, percolation.sample(petersen, 0.5, 0))


def test_equal_base_is_accepted(k4):
    sample = percolation.sample(generators.complete(4), 1.0, 0)
    assert explorer.run(k4, sample).kept.all()


@pytest.mark.parametrize("bits", ["", "10101", "1010101"])
def test_trace_length_is_checked(k4, bits):
    with pytest.raises(TraceLengthError):
        explorer.decode(k4, BitTrace.from_string(bits))


def test_bit_trace_strings():
    t = BitTrace.from_string("0110\n")
    assert t.length == 4
    assert t.ones == 2
    assert t.to_string() == "0110"
    assert t == BitTrace.from_bits([0, 1, 1, 0])
    assert len({t, BitTrace.from_bits([0, 1, 1, 0])}) == 1
    with pytest.raises(PercolabError):
        BitTrace.from_string("01x0")


def test_stack_size_at_explored(triangle, full):
    run = explorer.run(triangle, full(triangle))
    assert explorer.stack_size_at_explored(run, 2) == 2
    assert explorer.stack_size_at_explored(run, 3) == 3
    assert explorer.stack_size_at_explored(run, 4) is None


def test_long_unqueried_needs_positive_ell(k4, full):
    with pytest.raises(PercolabError):
        explorer.long_unqueried_count(explorer.run(k4, full(k4)), 0)


def test_path_graph_has_no_phase_two():
    G = generators.path(6)
    run = explorer.run(G, percolation.sample(G, 1.0, 0))
    assert run.max_u == 6
    assert run.phase1_query_count == 5
    assert run.unqueried.shape == (0, 3)


def test_isolated_vertices_become_roots():
    G = build(5, [(1, 3)])
    run = explorer.run(G, percolation.sample(G, 1.0, 0))
    assert run.roots == (0, 1, 2, 4)
    assert explorer.check_properties(run) == []
