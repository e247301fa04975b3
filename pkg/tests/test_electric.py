import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ustlocal import graph_core as g
from ustlocal import oracles
from ustlocal.electric import (
    LaplacianSystem,
    commute_time_check,
    default_good_threshold,
    escape_probability_check,
    foster_sum,
    good_vertices,
    green_function,
    grounded_green_matrix,
    high_resistance_edges,
    high_resistance_cap,
    lemma_lower_bound,
    nash_williams_bound,
    product_resistance,
    reduced_network,
    resistance_pair,
    resistance_to_set,
    tuple_band,
    tuple_resistance_experiment,
    tuple_success_floor,
)
from ustlocal.errors import InvalidParams
from ustlocal.local_stats import path_shape

from test_graph_core import connected_networks


def R(net, u, v):
    return resistance_pair(net, u, v).value


def test_pair_examples():
    assert R(g.complete(4), 0, 3) == pytest.approx(0.5)
    assert R(g.path(3), 0, 2) == pytest.approx(2)
    assert R(g.cycle(4), 0, 1) == pytest.approx(0.75)
    assert R(g.complete(4), 2, 2) == 0


def test_k4_pair_matches_enumeration():
    # 8 of the 16 spanning trees contain a given edge
    probs = oracles.exact_edge_probabilities_fraction(g.complete(4))
    assert all(p == 0.5 for p in probs.values())


def test_set_examples():
    assert resistance_to_set(g.path(3), 1, {0, 2}).value == pytest.approx(0.5)
    assert resistance_to_set(g.complete(4), 0, {1}).value == pytest.approx(0.5)
    assert resistance_to_set(g.complete(4), 0, {1, 2, 3}).value == pytest.approx(1 / 3)


def test_k4_tuple_set_resistance():
    # R(2 <-> {0,1}) on K_4: both solver routes and the tree count give 3/8
    net = g.complete(4)
    sys_ = LaplacianSystem(net)
    assert resistance_to_set(net, 2, {0, 1}).value == pytest.approx(3 / 8)
    assert sys_.resistance_to_set(2, [0, 1]) == pytest.approx(3 / 8)
    p = oracles.pattern_probability(net, [(0, 1), (1, 2)])
    assert p == pytest.approx(0.5 * 3 / 8)  # 3 of 16 trees


def test_set_errors():
    with pytest.raises(InvalidParams):
        resistance_to_set(g.complete(4), 0, set())
    with pytest.raises(InvalidParams):
        resistance_to_set(g.complete(4), 0, {0, 1})


def test_green_examples():
    p3 = g.path(3)
    assert green_function(p3, 0, 2, 2) == pytest.approx(2)
    assert green_function(p3, 0, 1, 2) == pytest.approx(1)
    assert green_function(g.complete(4), 0, 1, 2) == pytest.approx(0.25)
    assert green_function(g.complete(4), 0, 1, 2, method="matrix") == pytest.approx(0.25)


def test_reduced_examples():
    red = reduced_network(g.path(3), [0, 2])
    assert red.edges == [(0, 1, pytest.approx(0.5))]
    tri = reduced_network(g.star(4), [1, 2, 3])
    assert [c for *_, c in tri.edges] == pytest.approx([1 / 3] * 3)
    assert reduced_network(g.complete(4), [0, 1]).edges[0][2] == pytest.approx(2)


def test_foster_examples():
    assert foster_sum(g.complete(4)) == pytest.approx(3, abs=1e-12)
    assert foster_sum(g.cycle(5)) == pytest.approx(4, abs=1e-12)
    tree = g.path(7)
    assert foster_sum(tree) == pytest.approx(6, abs=1e-12)
    assert np.allclose(LaplacianSystem(tree).resistances(tree.edge_list()), 1)


def test_nash_williams_examples():
    assert nash_williams_bound(g.complete(4), 0, 1) == pytest.approx(0.5)
    assert lemma_lower_bound(3, 3) == pytest.approx(0.5)
    assert lemma_lower_bound(1, 1, adjacent=False) == pytest.approx(2)
    net = g.random_regular(40, 6, 3)
    for u, v in net.edge_list():
        assert R(net, u, v) >= 2 / 7 - 1e-12


def test_high_resistance_examples():
    assert high_resistance_edges(g.complete(8), 0.6) == []
    net = g.chained_cliques(3, 10)
    bridges = {(10, 11), (21, 22)}
    found = high_resistance_edges(net, 0.5)
    assert {(u, v) for u, v, _ in found} == bridges
    assert all(r == pytest.approx(1) for *_, r in found)
    assert good_vertices(g.complete(10), math.log(9) / 9) == set(range(10))
    assert default_good_threshold(9) == pytest.approx(math.log(9) / 9)


def test_high_resistance_cap_on_regular():
    for n, d, seed in [(200, 10, 1), (100, 6, 2)]:
        net = g.random_regular(n, d, seed)
        sys_ = LaplacianSystem(net)
        for eps in (2.5 / d, 3 / d, 5 / d):
            assert len(high_resistance_edges(net, eps, sys_)) <= high_resistance_cap(n, d, eps)
    with pytest.raises(InvalidParams):
        high_resistance_cap(10, 4, 0.5)


def test_commute_time(rng):
    chk = commute_time_check(g.path(2), 0, 1, 50, rng)
    assert chk.observed == 2 and chk.predicted == pytest.approx(2)
    chk = commute_time_check(g.complete(4), 0, 1, 20_000, rng)
    assert chk.predicted == pytest.approx(6)
    assert chk.passed()
    chk = commute_time_check(g.cycle(4), 0, 1, 20_000, rng)
    assert chk.predicted == pytest.approx(6)
    assert chk.passed()


def test_escape_probability(rng):
    e = escape_probability_check(g.path(2), 0, 1, 100, rng)
    assert e.probability.observed == 1 and e.resistance == pytest.approx(1)
    e = escape_probability_check(g.complete(4), 0, 1, 50_000, rng)
    assert e.probability.predicted == pytest.approx(2 / 3)
    assert e.passed()
    # on C_4 the escape probability is 2/3, giving R = 1/(2 * 2/3) = 3/4
    e = escape_probability_check(g.cycle(4), 0, 1, 50_000, rng)
    assert e.probability.predicted == pytest.approx(2 / 3)
    assert e.resistance == pytest.approx(0.75)
    assert e.passed()


def test_tuple_experiment_k101(rng):
    net = g.complete(101)
    centre, half = tuple_band(3, 100)
    assert centre == pytest.approx(0.015)
    recs = tuple_resistance_experiment(net, path_shape(3), 500, rng)
    assert all(r["centre"] == pytest.approx(0.015) for r in recs)
    bad = [r for r in recs if not r["compatible"]]
    assert all(r["resistance"] is None for r in bad)
    assert len(set(recs[0]["tuple"])) == 3 or not recs[0]["compatible"]
    assert tuple_success_floor(3, 500) == pytest.approx(1 - 54 / math.log(500) ** 3)


def test_product_resistance_matches_enumeration():
    net = g.complete(4)
    sys_ = LaplacianSystem(net)
    assert product_resistance(sys_, (0, 1, 2)) == pytest.approx(3 / 16)
    net = g.complete_bipartite(2, 3)
    sys_ = LaplacianSystem(net)
    x = (0, 2, 1)
    assert product_resistance(sys_, x) == pytest.approx(oracles.pattern_probability(net, [(0, 2), (1, 2)]))


def test_large_sparse_path_uses_cg():
    net = g.torus(64)  # 4096 vertices > dense limit
    sys_ = LaplacianSystem(net)
    assert not sys_.dense
    r = sys_.resistance(0, 1)
    # every torus edge is equivalent, so Foster gives R = (n-1)/m
    assert r == pytest.approx((net.n - 1) / net.num_edges, rel=1e-7)


# ---------------------------------------------------------------------------
# properties


@given(connected_networks())
def test_foster_identity(net):
    assert abs(foster_sum(net) - (net.n - 1)) <= 1e-9 * net.n


@settings(max_examples=40)
@given(connected_networks())
def test_metric_axioms(net):
    G = LaplacianSystem(net).green_matrix()
    d = np.diag(G)
    M = d[:, None] + d[None, :] - 2 * G
    n = net.n
    assert np.allclose(M, M.T, atol=1e-12)
    assert np.allclose(np.diag(M), 0, atol=1e-12)
    assert np.all(M[~np.eye(n, dtype=bool)] > 0)
    assert (M[:, :, None] - M[:, None, :] - M.T[None, :, :]).max() <= 1e-9


@settings(max_examples=40)
@given(connected_networks(max_n=10), st.data())
def test_rayleigh_deleting_edge(net, data):
    removable = []
    for e in net.edge_list():
        try:
            g.contract_delete(net, [], [e])
            removable.append(e)
        except Exception:
            pass
    if not removable:
        return
    e = data.draw(st.sampled_from(removable))
    smaller = g.contract_delete(net, [], [e]).network
    G1 = LaplacianSystem(net).green_matrix()
    G2 = LaplacianSystem(smaller).green_matrix()
    R1 = np.diag(G1)[:, None] + np.diag(G1)[None, :] - 2 * G1
    R2 = np.diag(G2)[:, None] + np.diag(G2)[None, :] - 2 * G2
    assert (R1 - R2).max() <= 1e-9


@settings(max_examples=40)
@given(connected_networks(max_n=10), st.data())
def test_reduced_network_preserves_resistance(net, data):
    K = data.draw(st.lists(st.integers(0, net.n - 1), min_size=2, max_size=net.n, unique=True))
    red = reduced_network(net, K)
    S = LaplacianSystem(net)
    Sr = LaplacianSystem(red)
    for i in range(len(K)):
        for j in range(i + 1, len(K)):
            assert Sr.resistance(i, j) == pytest.approx(S.resistance(K[i], K[j]), abs=1e-9, rel=1e-9)
    L = red.laplacian()
    assert np.allclose(L.sum(axis=1), 0, atol=1e-9)


@settings(max_examples=40)
@given(connected_networks(max_n=9), st.data())
def test_green_cross_method(net, data):
    if net.n < 3:
        return
    a = data.draw(st.integers(0, net.n - 1))
    others = [v for v in range(net.n) if v != a]
    i = data.draw(st.sampled_from(others))
    j = data.draw(st.sampled_from(others))
    closed = green_function(net, a, i, j, "closed")
    matrix = green_function(net, a, i, j, "matrix")
    assert closed == pytest.approx(matrix, abs=1e-8)
    assert LaplacianSystem(net).green(a, i, j) == pytest.approx(matrix, abs=1e-8)
    assert green_function(net, a, i, i) == pytest.approx(R(net, a, i), abs=1e-8)
    gm, index = grounded_green_matrix(net, a)
    keep = [v for v in range(net.n) if v != a]
    L = net.laplacian()[np.ix_(keep, keep)]
    assert np.allclose(L @ gm, np.eye(len(keep)), atol=1e-8)


@settings(max_examples=40)
@given(connected_networks(max_n=10))
def test_nash_williams_is_lower_bound(net):
    S = LaplacianSystem(net)
    for u, v in net.edge_list():
        assert nash_williams_bound(net, u, v) <= S.resistance(u, v) + 1e-12


@settings(max_examples=30)
@given(connected_networks(max_n=9), st.data())
def test_set_resistance_monotone(net, data):
    v = data.draw(st.integers(0, net.n - 1))
    rest = [w for w in range(net.n) if w != v]
    S = data.draw(st.lists(st.sampled_from(rest), min_size=1, unique=True))
    S = list(S)
    sys_ = LaplacianSystem(net)
    vals = [sys_.resistance_to_set(v, S[: i + 1]) for i in range(len(S))]
    assert all(b <= a + 1e-10 for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(resistance_to_set(net, v, S).value, abs=1e-9)


def test_walk_mean_resistance_bound():
    net = g.random_regular(300, 20, 5)
    sys_ = LaplacianSystem(net)
    rnd = g.as_pyrandom(7)
    d, k, N = 20, 3, 5000
    vals = []
    for _ in range(N):
        x0 = int(rnd.random() * net.n)
        vals.append(sys_.resistance(x0, g.random_walk(net, x0, k, rnd).vertices[-1]))
    vals = np.array(vals)
    assert vals.mean() <= 2 / d + 2 * (k - 1) / d**2 + 4 * vals.std() / math.sqrt(N)
