"""Exact samplers for the (conductance-weighted) uniform spanning tree."""
from __future__ import annotations

import json
import os
from bisect import bisect_right
from collections import Counter, deque
from dataclasses import dataclass
from itertools import count as _count
from typing import Iterable, Iterator

import numpy as np

from .electric import resistance_pair
from .errors import InvalidParams
from .graph_core import Edge, Network, as_pyrandom, contract_delete, edge_key
from .mc import MonteCarloCheck, binomial_check

# every sampled tree is validated under USTLOCAL_DEBUG=1, otherwise one in a hundred
AUDIT_EVERY = 1 if os.environ.get("USTLOCAL_DEBUG") else 100
_audit_counter = _count()


class InvalidTree(AssertionError):
    pass


@dataclass
class SpanningTree:
    """Spanning tree stored as a parent array; ``parent[root] == -1``."""

    parent: list[int]
    root: int = 0

    @property
    def n(self) -> int:
        return len(self.parent)

    def edges(self) -> list[Edge]:
        return sorted(edge_key(v, p) for v, p in enumerate(self.parent) if p >= 0)

    def key(self) -> tuple[Edge, ...]:
        """Hashable identity of the unrooted edge set."""
        return tuple(self.edges())

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(self.parent):
            if p >= 0:
                adj[v].append(p)
                adj[p].append(v)
        return adj

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for v, p in enumerate(self.parent):
            if p >= 0:
                deg[v] += 1
                deg[p] += 1
        return deg

    def validate(self, net: Network) -> None:
        n = self.n
        if n != net.n:
            raise InvalidTree(f"tree has {n} vertices, network {net.n}")
        if self.parent[self.root] != -1:
            raise InvalidTree("root must have no parent")
        if sum(p >= 0 for p in self.parent) != n - 1:
            raise InvalidTree("a spanning tree has n - 1 edges")
        for v, p in enumerate(self.parent):
            if p >= 0 and not net.has_edge(v, p):
                raise InvalidTree(f"({v}, {p}) is not an edge of the network")
        # every parent chain must reach the root within n steps
        state = [0] * n
        state[self.root] = 2
        for v in range(n):
            chain = []
            while state[v] == 0:
                state[v] = 1
                chain.append(v)
                v = self.parent[v]
                if v < 0:
                    raise InvalidTree("parent chain ends away from the root")
            if state[v] == 1:
                raise InvalidTree("parent pointers contain a cycle")
            for w in chain:
                state[w] = 2

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], root: int = 0) -> "SpanningTree":
        adj: list[list[int]] = [[] for _ in range(n)]
        m = 0
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
            m += 1
        if m != n - 1:
            raise InvalidTree(f"{m} edges cannot span {n} vertices as a tree")
        parent = [-2] * n
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if parent[w] == -2:
                    parent[w] = u
                    queue.append(w)
        if -2 in parent:
            raise InvalidTree("edge set does not span")
        return cls(parent, root)

    def to_json(self) -> dict:
        return {"root": self.root, "parent": self.parent}

    def diameter(self) -> int:
        adj = self.adjacency()

        def farthest(s: int) -> tuple[int, int]:
            dist = [-1] * self.n
            dist[s] = 0
            queue = deque([s])
            last = s
            while queue:
                u = queue.popleft()
                last = u
                for w in adj[u]:
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        queue.append(w)
            return last, dist[last]

        far, _ = farthest(self.root)
        return farthest(far)[1]


def _audit(tree: SpanningTree, net: Network) -> SpanningTree:
    if next(_audit_counter) % AUDIT_EVERY == 0:
        tree.validate(net)
    return tree


def _wilson_parents(net: Network, rnd, root: int) -> list[int]:
    n = net.n
    nbrs = net.nbrs
    random = rnd.random
    in_tree = [False] * n
    in_tree[root] = True
    nxt = [-1] * n
    if net.unit:
        for i in range(n):
            u = i
            while not in_tree[u]:
                nb = nbrs[u]
                w = nb[int(random() * len(nb))]
                nxt[u] = w
                u = w
            u = i
            while not in_tree[u]:
                in_tree[u] = True
                u = nxt[u]
    else:
        cum = net.cumulative()
        for i in range(n):
            u = i
            while not in_tree[u]:
                c = cum[u]
                j = bisect_right(c, random() * c[-1])
                nb = nbrs[u]
                w = nb[j if j < len(nb) else len(nb) - 1]
                nxt[u] = w
                u = w
            u = i
            while not in_tree[u]:
                in_tree[u] = True
                u = nxt[u]
    return nxt


def _aldous_broder_parents(net: Network, rnd, start: int) -> list[int]:
    n = net.n
    parent = [-2] * n
    parent[start] = -1
    remaining = n - 1
    u = start
    step = net.neighbor
    while remaining:
        w = step(u, rnd)
        if parent[w] == -2:
            parent[w] = u
            remaining -= 1
        u = w
    return parent


def wilson(net: Network, rng, root: int = 0) -> SpanningTree:
    """Loop-erased-random-walk sampler (cycle popping with successor pointers)."""
    if not 0 <= root < net.n:
        raise InvalidParams(f"root {root} outside 0..{net.n - 1}")
    return _audit(SpanningTree(_wilson_parents(net, as_pyrandom(rng), root), root), net)


def aldous_broder(net: Network, rng, start: int = 0) -> SpanningTree:
    """First-entrance edges of a random walk run until cover."""
    if not 0 <= start < net.n:
        raise InvalidParams(f"start {start} outside 0..{net.n - 1}")
    return _audit(SpanningTree(_aldous_broder_parents(net, as_pyrandom(rng), start), start), net)


SAMPLERS = {"wilson": _wilson_parents, "aldous_broder": _aldous_broder_parents}


def iter_trees(net: Network, count: int, rng, method: str = "wilson", root: int = 0) -> Iterator[SpanningTree]:
    """``count`` independent trees from one stream (one conversion of ``rng``)."""
    try:
        draw = SAMPLERS[method]
    except KeyError:
        raise InvalidParams(f"unknown sampler {method!r}") from None
    rnd = as_pyrandom(rng)
    for _ in range(count):
        yield _audit(SpanningTree(draw(net, rnd, root), root), net)


def tree_counts(net: Network, count: int, rng, method: str = "wilson") -> Counter:
    """Tally of edge-set keys over ``count`` samples."""
    draw = SAMPLERS[method]
    rnd = as_pyrandom(rng)
    # with the root fixed the parent array identifies the tree, so tally those
    raw = Counter(tuple(draw(net, rnd, 0)) for _ in range(count))
    tally: Counter = Counter()
    for p, k in raw.items():
        tally[tuple(sorted(edge_key(v, q) for v, q in enumerate(p) if q >= 0))] += k
    return tally


def edge_probability_check(net: Network, e: Edge, samples: int, rng, method: str = "wilson") -> MonteCarloCheck:
    """Empirical P(e in UST) against c(e) * R_eff(e) (Kirchhoff)."""
    u, v = edge_key(*e)
    if not net.has_edge(u, v):
        raise InvalidParams(f"{e} is not an edge")
    hits = 0
    for t in iter_trees(net, samples, rng, method):
        p = t.parent
        hits += p[u] == v or p[v] == u
    predicted = net.conductance(u, v) * resistance_pair(net, u, v).value
    return binomial_check(hits, samples, min(predicted, 1.0))


def _lift(con, A: list[Edge], rnd) -> list[Edge]:
    """One conditioned draw as an edge list: UST of G/A - B lifted back to G."""
    chosen = list(A)
    small = con.network
    if small.n > 1:
        parents = _wilson_parents(small, rnd, 0)
        for x, p in enumerate(parents):
            if p < 0:
                continue
            group = con.originals[edge_key(x, p)]
            if len(group) == 1:
                u, v, _ = group[0]
            else:
                total = sum(c for _, _, c in group)
                target, acc = rnd.random() * total, 0.0
                for u, v, c in group:
                    acc += c
                    if target < acc:
                        break
            chosen.append(edge_key(u, v))
    return chosen


def sample_conditioned(net: Network, A: Iterable[Edge], B: Iterable[Edge], rng) -> SpanningTree:
    """UST of ``net`` conditioned on containing ``A`` and avoiding ``B``.

    Samples the weighted UST of G/A - B and lifts each merged edge back to one
    of its original edges with probability proportional to conductance.
    """
    A = [edge_key(*e) for e in A]
    con = contract_delete(net, A, B)
    return _audit(SpanningTree.from_edges(net.n, _lift(con, A, as_pyrandom(rng))), net)


def conditioned_counts(net: Network, A: Iterable[Edge], B: Iterable[Edge], count: int, rng) -> Counter:
    """Tally of edge-set keys over ``count`` conditioned draws (contraction built once)."""
    A = [edge_key(*e) for e in A]
    con = contract_delete(net, A, B)
    rnd = as_pyrandom(rng)
    tally: Counter = Counter(tuple(sorted(_lift(con, A, rnd))) for _ in range(count))
    for key in list(tally)[:1]:
        _audit(SpanningTree.from_edges(net.n, key), net)
    return tally


@dataclass
class CorrelationCheck:
    """Joint inclusion frequency of two edges against the product of marginals."""

    joint: MonteCarloCheck
    exact_joint: float

    @property
    def product(self) -> float:
        return self.joint.predicted

    def passed(self, nsigma: float = 4.0) -> bool:
        return self.joint.upper_passed(nsigma)


def negative_correlation_check(net: Network, e: Edge, f: Edge, samples: int, rng) -> CorrelationCheck:
    e, f = edge_key(*e), edge_key(*f)
    if e == f:
        raise InvalidParams("e and f must differ")
    pe = net.conductance(*e) * resistance_pair(net, *e).value
    pf = net.conductance(*f) * resistance_pair(net, *f).value
    con = contract_delete(net, [e])
    a, b = con.merge[f[0]], con.merge[f[1]]
    pf_given_e = 0.0 if a == b else net.conductance(*f) * resistance_pair(con.network, a, b).value
    both = 0
    for t in iter_trees(net, samples, rng):
        p = t.parent
        both += (p[e[0]] == e[1] or p[e[1]] == e[0]) and (p[f[0]] == f[1] or p[f[1]] == f[0])
    check = binomial_check(both, samples, pe * pf)
    return CorrelationCheck(check, pe * pf_given_e)


def trees_to_json(trees: Iterable[SpanningTree]) -> str:
    return json.dumps({"trees": [t.to_json() for t in trees]}, separators=(",", ":"))


def tree_to_text(tree: SpanningTree) -> str:
    edges = tree.edges()
    return f"{tree.n} {len(edges)}\n" + "".join(f"{u} {v}\n" for u, v in edges)
