import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ustlocal import graph_core as g
from ustlocal.electric import resistance_pair
from ustlocal.errors import (
    CycleInA,
    DisconnectedGraph,
    DisconnectsGraph,
    InvalidParams,
    NonPositiveConductance,
    VertexOutOfRange,
)
from ustlocal.local_stats import path_shape, star_shape


def assert_consistent(net):
    for u in range(net.n):
        for v, c in zip(net.nbrs[u], net.conds[u]):
            assert u in net.nbrs[v]
            assert net.conductance(v, u) == c
        assert net.pi[u] == pytest.approx(sum(net.conds[u]))


@st.composite
def connected_networks(draw, max_n=12, weighted=True):
    n = draw(st.integers(2, max_n))
    edges = [(i, draw(st.integers(0, i - 1))) for i in range(1, n)]  # random spanning tree
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=2 * n))
    edges += [e for e in extra if e[0] != e[1]]
    if weighted:
        cs = draw(st.lists(st.sampled_from([0.5, 1.0, 2.0, 3.0]), min_size=len(edges), max_size=len(edges)))
        return g.build_network([(u, v, c) for (u, v), c in zip(edges, cs)], n)
    return g.build_network(edges, n)


def test_build_network_examples():
    net = g.build_network([(0, 1, 1.0)], 2)
    assert net.num_edges == 1
    with pytest.raises(DisconnectedGraph):
        g.build_network([(0, 1, 1), (2, 3, 1)], 4)
    with pytest.raises(NonPositiveConductance):
        g.build_network([(0, 1, 0.0)], 2)
    with pytest.raises(VertexOutOfRange):
        g.build_network([(0, 5)], 2)
    assert np.all(g.complete(4).pi == 3)


def test_parallel_edges_merge_and_loops_drop():
    net = g.build_network([(0, 1, 2.0), (1, 0, 1.0), (1, 1, 5.0)], 2)
    assert net.edges == [(0, 1, 3.0)]


@pytest.mark.parametrize(
    "family,params,n,m",
    [
        ("complete", {"n": 4}, 4, 6),
        ("complete_bipartite", {"a": 3, "b": 3}, 6, 9),
        ("hypercube", {"dim": 3}, 8, 12),
        ("torus", {"side": 4}, 16, 32),
        ("chained_cliques", {"m": 3, "d": 4}, 15, 3 * 9 + 2),
        ("star_of_cliques", {"d": 6}, 19, 3 * 14 + 6),
        ("path", {"n": 5}, 5, 4),
        ("cycle", {"n": 5}, 5, 5),
    ],
)
def test_family_sizes(family, params, n, m):
    net = g.generate(family, params)
    assert (net.n, net.num_edges) == (n, m)
    assert net.unit
    assert_consistent(net)


def test_star_of_cliques_hub():
    net = g.star_of_cliques(6)
    assert net.degree(net.n - 1) == 6


def test_chained_cliques_structure():
    net = g.chained_cliques(3, 4)
    assert not net.has_edge(0, 4)  # (x_0, y_0) removed
    assert net.has_edge(4, 5)  # (y_0, x_1) added
    degs = net.degrees()
    assert degs[0] == 3 and degs[14] == 3  # chain ends
    assert np.all(degs[1:4] == 4)


@pytest.mark.parametrize("n,d,seed", [(100, 10, 1), (50, 3, 2), (200, 20, 3), (30, 29, 4)])
def test_random_regular_simple(n, d, seed):
    net = g.random_regular(n, d, seed)
    assert np.all(net.degrees() == d)
    assert net.num_edges == n * d // 2
    assert len(set(net.edge_list())) == net.num_edges
    assert all(u != v for u, v in net.edge_list())


def test_random_regular_deterministic():
    a = g.random_regular(60, 6, 11)
    b = g.random_regular(60, 6, 11)
    assert a.edges == b.edges


def test_generate_rejects_bad_params():
    with pytest.raises(InvalidParams):
        g.random_regular(5, 3, 0)
    with pytest.raises(InvalidParams):
        g.star_of_cliques(5)
    with pytest.raises(InvalidParams):
        g.generate("petersen", {})
    with pytest.raises(InvalidParams):
        g.generate("complete", {})


def test_contract_delete_examples():
    con = g.contract_delete(g.complete(4), [(0, 1)])
    net = con.network
    a, b, c = con.merge[0], con.merge[2], con.merge[3]
    assert con.merge[1] == a and net.n == 3
    assert net.conductance(a, b) == 2 and net.conductance(a, c) == 2 and net.conductance(b, c) == 1
    deleted = g.contract_delete(g.complete(4), [], [(0, 1)]).network
    assert deleted.num_edges == 5 and not deleted.has_edge(0, 1)
    full = g.contract_delete(g.path(3), [(0, 1), (1, 2)]).network
    assert full.n == 1 and full.num_edges == 0


def test_contract_delete_errors():
    with pytest.raises(CycleInA):
        g.contract_delete(g.complete(3), [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(DisconnectsGraph):
        g.contract_delete(g.path(3), [], [(0, 1)])
    with pytest.raises(InvalidParams):
        g.contract_delete(g.complete(3), [(0, 1)], [(0, 1)])


@given(connected_networks(max_n=10), st.data())
def test_contract_preserves_resistance(net, data):
    # contracting an edge set merges vertices; resistances between the classes
    # equal those of the network with A shorted, i.e. conductance -> infinity.
    u, v = data.draw(st.sampled_from(net.edge_list()))
    con = g.contract_delete(net, [(u, v)])
    assert_consistent(con.network)
    if con.network.n < 2:
        return
    # compare with a huge-conductance stand-in
    big = g.build_network([(a, b, 1e8 if (a, b) == (u, v) else c) for a, b, c in net.edges], net.n)
    x = data.draw(st.integers(0, net.n - 1))
    y = data.draw(st.integers(0, net.n - 1))
    if con.merge[x] == con.merge[y]:
        return
    r_con = resistance_pair(con.network, con.merge[x], con.merge[y]).value
    r_big = resistance_pair(big, x, y).value
    assert r_con == pytest.approx(r_big, rel=1e-6, abs=1e-6)


def test_random_walk(rng):
    assert g.random_walk(g.path(3), 0, 1, rng).vertices == [0, 1]
    walk = g.random_walk(g.complete(5), 2, 50, rng)
    assert walk.steps == 50
    net = g.complete(5)
    assert all(net.has_edge(a, b) for a, b in zip(walk.vertices, walk.vertices[1:]))


def test_walk_transition_frequencies():
    net = g.build_network([(0, 1, 1.0), (0, 2, 2.0), (0, 3, 3.0)], 4)
    rnd = g.as_pyrandom(5)
    N = 100_000
    counts = np.bincount([net.neighbor(0, rnd) for _ in range(N)], minlength=4)
    for v, c in ((1, 1), (2, 2), (3, 3)):
        p = c / 6
        assert abs(counts[v] / N - p) <= 4 * math.sqrt(p * (1 - p) / N)


def test_k4_one_step_uniform():
    rnd = g.as_pyrandom(9)
    N = 100_000
    counts = np.bincount([g.random_walk(g.complete(4), 0, 1, rnd).vertices[1] for _ in range(N)], minlength=4)
    assert counts[0] == 0
    p = 1 / 3
    assert np.all(np.abs(counts[1:] / N - p) <= 4 * math.sqrt(p * (1 - p) / N))


def test_stationary_vertex_uniform_on_regular():
    from scipy.stats import chisquare

    net = g.cycle(6)
    rnd = g.as_pyrandom(3)
    counts = np.bincount([g.stationary_vertex(net, rnd) for _ in range(60_000)], minlength=6)
    assert chisquare(counts).pvalue > 1e-4


def test_stationary_vertex_weighted():
    net = g.star(4)  # pi = (3, 1, 1, 1)
    rnd = g.as_pyrandom(1)
    N = 60_000
    hits = sum(g.stationary_vertex(net, rnd) == 0 for _ in range(N))
    assert abs(hits / N - 0.5) <= 4 * math.sqrt(0.25 / N)


def test_walk_hitting_times():
    w = g.WalkPath([0, 1, 0, 2, 0])
    assert w.hitting_time(2) == 3
    assert w.return_time(0) == 2
    assert w.hitting_time(7) is None


def test_t_compatible_examples():
    rnd = g.as_pyrandom(4)
    assert all(g.t_compatible_sample(g.complete(4), path_shape(2), rnd)[1] for _ in range(200))
    N = 40_000
    ok = sum(g.t_compatible_sample(g.complete(3), path_shape(3), rnd)[1] for _ in range(N))
    assert abs(ok / N - 0.5) <= 4 * math.sqrt(0.25 / N)
    n = 10
    bad = sum(not g.t_compatible_sample(g.complete(n), star_shape(2), rnd)[1] for _ in range(N))
    p = 1 / (n - 1)
    assert abs(bad / N - p) <= 4 * math.sqrt(p * (1 - p) / N)


def test_almost_regular_examples():
    assert g.check_almost_regular(g.complete(11), 10).delta == 0
    k11 = g.build_network([e for e in g.complete(11).edge_list() if e != (0, 1)], 11)
    rep = g.check_almost_regular(k11, 10)
    assert rep.delta == pytest.approx(0.1)
    assert rep.degree_sum_deviation == pytest.approx(1 / 55)
    assert g.check_almost_regular(g.star(20), 1).delta >= 0.9


@given(connected_networks(max_n=9, weighted=False), st.floats(1.0, 8.0))
def test_almost_regular_delta_zero_iff_regular(net, d):
    rep = g.check_almost_regular(net, d)
    regular = net.is_regular() and net.degrees()[0] == d
    assert (rep.delta == 0) == regular


@given(connected_networks())
def test_text_roundtrip(net):
    back = g.parse_graph(g.format_graph(net))
    assert back.n == net.n and back.edges == net.edges


def test_parse_errors():
    with pytest.raises(InvalidParams):
        g.parse_graph("3 2\n0 1\n")
    with pytest.raises(InvalidParams):
        g.parse_graph("")


def test_as_pyrandom_deterministic():
    a = g.as_pyrandom(np.random.default_rng(3)).random()
    b = g.as_pyrandom(np.random.default_rng(3)).random()
    assert a == b
