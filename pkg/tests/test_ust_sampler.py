import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ustlocal import graph_core as g
from ustlocal import oracles
from ustlocal.errors import CycleInA, DisconnectsGraph, InvalidParams
from ustlocal.ust_sampler import (
    InvalidTree,
    SpanningTree,
    aldous_broder,
    conditioned_counts,
    edge_probability_check,
    iter_trees,
    negative_correlation_check,
    sample_conditioned,
    tree_counts,
    tree_to_text,
    trees_to_json,
    wilson,
)

from test_graph_core import connected_networks


def uniform_within(tally, law, samples, nsigma=4.0):
    stray = sum(c for t, c in tally.items() if t not in law)
    if stray:
        return False
    return all(abs(tally[t] / samples - p) <= nsigma * math.sqrt(p * (1 - p) / samples) for t, p in law.items())


@pytest.mark.parametrize("method", ["wilson", "aldous_broder"])
@pytest.mark.parametrize("net", [g.complete(3), g.cycle(4), g.complete_bipartite(2, 3)], ids=["k3", "c4", "k23"])
def test_uniform_small(net, method):
    N = 100_000
    tally = tree_counts(net, N, 17, method)
    assert uniform_within(tally, oracles.tree_law(net), N)


def test_weighted_two_vertex():
    net = g.build_network([(0, 1, 2.0), (0, 1, 1.0)], 2)
    t = wilson(net, 0)
    assert t.edges() == [(0, 1)]


def test_weighted_law_matches_oracle():
    net = g.build_network([(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 3.0), (1, 3, 1.0)], 4)
    N = 100_000
    law = oracles.tree_law(net)
    for method in ("wilson", "aldous_broder"):
        assert uniform_within(tree_counts(net, N, 3, method), law, N)


def test_path_unique_tree():
    t = aldous_broder(g.path(5), 1)
    assert t.edges() == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_root_choice_does_not_matter():
    net = g.complete(4)
    N = 60_000
    rnd = g.as_pyrandom(2)
    tally = Counter(wilson(net, rnd, root=3).key() for _ in range(N))
    assert uniform_within(tally, oracles.tree_law(net), N)


@settings(max_examples=30)
@given(connected_networks(max_n=12), st.integers(0, 2**32))
def test_samples_are_spanning_trees(net, seed):
    for t in iter_trees(net, 3, seed):
        t.validate(net)
    aldous_broder(net, seed).validate(net)


def test_validate_catches_bad_trees():
    net = g.complete(4)
    with pytest.raises(InvalidTree):
        SpanningTree([-1, 2, 1, 0]).validate(net)  # cycle 1-2
    with pytest.raises(InvalidTree):
        SpanningTree([-1, 0, 0]).validate(net)
    with pytest.raises(InvalidTree):
        SpanningTree([-1, 0, 1, 2]).validate(g.star(4))  # (2,1) not an edge


def test_determinism():
    net = g.random_regular(50, 4, 1)
    a = [t.parent for t in iter_trees(net, 5, 42)]
    b = [t.parent for t in iter_trees(net, 5, 42)]
    assert a == b


def test_kirchhoff_examples():
    chk = edge_probability_check(g.complete(4), (0, 1), 50_000, 3)
    assert chk.predicted == pytest.approx(0.5) and chk.passed()
    chk = edge_probability_check(g.chained_cliques(2, 4), (4, 5), 2_000, 3)
    assert chk.observed == 1 and chk.predicted == pytest.approx(1)
    chk = edge_probability_check(g.complete(10), (2, 7), 50_000, 3)
    assert chk.predicted == pytest.approx(0.2) and chk.passed()


def test_sample_conditioned_examples():
    net = g.complete(4)
    N = 80_000
    for A, B in (([(0, 1)], []), ([], [(0, 1)]), ([(0, 1)], [(2, 3)])):
        law = oracles.conditional_law(net, A, B)
        assert len(law) in (8, 4)
        assert uniform_within(conditioned_counts(net, A, B, N, 5), law, N)
    t = sample_conditioned(g.path(4), [(0, 1), (1, 2), (2, 3)], [], 0)
    assert t.edges() == [(0, 1), (1, 2), (2, 3)]


def test_sample_conditioned_weighted_lift():
    # after contracting (0,1), the edges (0,2) c=3 and (1,2) c=1 merge; lifting splits 3:1
    net = g.build_network([(0, 1, 1.0), (0, 2, 3.0), (1, 2, 1.0)], 3)
    N = 40_000
    tally = conditioned_counts(net, [(0, 1)], [], N, 8)
    law = oracles.conditional_law(net, [(0, 1)], [])
    assert law[((0, 1), (0, 2))] == pytest.approx(0.75)
    assert uniform_within(tally, law, N)


def test_sample_conditioned_errors():
    with pytest.raises(CycleInA):
        sample_conditioned(g.complete(3), [(0, 1), (1, 2), (0, 2)], [], 0)
    with pytest.raises(DisconnectsGraph):
        sample_conditioned(g.path(3), [], [(1, 2)], 0)


@settings(max_examples=25)
@given(connected_networks(max_n=9), st.data())
def test_sample_conditioned_contains_A_avoids_B(net, data):
    edges = net.edge_list()
    A = data.draw(st.lists(st.sampled_from(edges), max_size=3, unique=True))
    B = data.draw(st.lists(st.sampled_from([e for e in edges if e not in A] or [None]), max_size=2, unique=True))
    B = [e for e in B if e is not None]
    try:
        t = sample_conditioned(net, A, B, data.draw(st.integers(0, 1000)))
    except (CycleInA, DisconnectsGraph):
        return
    t.validate(net)
    es = set(t.edges())
    assert set(A) <= es and not (set(B) & es)


def test_negative_correlation_examples():
    net = g.complete(4)
    adj = negative_correlation_check(net, (0, 1), (1, 2), 50_000, 1)
    assert adj.exact_joint == pytest.approx(3 / 16) and adj.product == pytest.approx(0.25)
    assert adj.passed()
    dis = negative_correlation_check(net, (0, 1), (2, 3), 50_000, 1)
    assert dis.exact_joint == pytest.approx(0.25)
    assert dis.passed()
    bridge = negative_correlation_check(g.chained_cliques(2, 3), (3, 4), (0, 1), 20_000, 1)
    assert bridge.exact_joint == pytest.approx(bridge.product)
    with pytest.raises(InvalidParams):
        negative_correlation_check(net, (0, 1), (1, 0), 10, 1)


def test_outputs():
    t = SpanningTree.from_edges(3, [(0, 1), (1, 2)])
    assert tree_to_text(t) == "3 2\n0 1\n1 2\n"
    assert '"parent":[-1,0,1]' in trees_to_json([t])
    assert t.diameter() == 2
    assert list(t.degrees()) == [1, 2, 1]


def test_exact_negative_correlation_all_pairs():
    for net in (g.complete(5), g.complete_bipartite(3, 3), g.hypercube(3)):
        law = oracles.tree_law(net)
        pe = oracles.edge_probabilities(net)
        edges = net.edge_list()
        for i, e in enumerate(edges):
            for f in edges[i + 1 :]:
                joint = sum(p for t, p in law.items() if e in t and f in t)
                assert joint <= pe[e] * pe[f] + 1e-12
