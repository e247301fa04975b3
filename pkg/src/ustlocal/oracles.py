"""Brute-force references used to check the fast code paths on small inputs."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction

import numpy as np

from .errors import LimitExceeded
from .graph_core import Edge, Network

MAX_ORACLE_VERTICES = 12


class _RollbackDSU:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.history: list[tuple[int, int]] = []

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.size[a] < self.size[b]:
            a, b = b, a
        self.parent[b] = a
        self.size[a] += self.size[b]
        self.history.append((a, b))
        return True

    def undo(self) -> None:
        a, b = self.history.pop()
        self.parent[b] = b
        self.size[a] -= self.size[b]


def spanning_trees(net: Network) -> list[tuple[Edge, ...]]:
    """Every spanning tree as a sorted edge tuple (include/exclude backtracking)."""
    if net.n > MAX_ORACLE_VERTICES:
        raise LimitExceeded(f"enumeration is limited to {MAX_ORACLE_VERTICES} vertices")
    edges = net.edge_list()
    need = net.n - 1
    dsu = _RollbackDSU(net.n)
    out: list[tuple[Edge, ...]] = []
    chosen: list[Edge] = []

    def rec(i: int) -> None:
        if len(chosen) == need:
            out.append(tuple(chosen))
            return
        if len(edges) - i < need - len(chosen):
            return
        u, v = edges[i]
        if dsu.union(u, v):
            chosen.append((u, v))
            rec(i + 1)
            chosen.pop()
            dsu.undo()
        rec(i + 1)

    if net.n == 1:
        return [()]
    rec(0)
    return out


def tree_weight(net: Network, tree) -> float:
    return math.prod(net.conductance(u, v) for u, v in tree)


def tree_law(net: Network, trees=None) -> dict[tuple[Edge, ...], float]:
    """Exact UST law: weight of each tree over the total weight."""
    trees = spanning_trees(net) if trees is None else trees
    if net.unit:
        p = 1.0 / len(trees)
        return {t: p for t in trees}
    w = {t: tree_weight(net, t) for t in trees}
    tot = math.fsum(w.values())
    return {t: x / tot for t, x in w.items()}


def matrix_tree_count(net: Network) -> float:
    """Weighted spanning-tree count det(Delta[0])."""
    if net.n == 1:
        return 1.0
    L = net.laplacian()[1:, 1:]
    sign, logdet = np.linalg.slogdet(L)
    return float(sign * math.exp(logdet))


def edge_probabilities(net: Network) -> dict[Edge, float]:
    law = tree_law(net)
    out: Counter = Counter()
    for t, p in law.items():
        for e in t:
            out[e] += p
    return {e: out[e] for e in net.edge_list()}


def conditional_law(net: Network, A, B) -> dict[tuple[Edge, ...], float]:
    """UST law restricted to trees containing ``A`` and avoiding ``B``."""
    A, B = set(A), set(B)
    law = {t: p for t, p in tree_law(net).items() if A <= set(t) and not (B & set(t))}
    tot = math.fsum(law.values())
    return {t: p / tot for t, p in law.items()}


def pattern_probability(net: Network, tree_edges) -> float:
    """P(all of ``tree_edges`` lie in the UST), summed over enumerated trees."""
    need = set(tree_edges)
    return math.fsum(p for t, p in tree_law(net).items() if need <= set(t))


def automorphism_count(parents: list[int]) -> int:
    """Root-preserving automorphisms of a rooted tree (root 0) by trying every
    permutation of the other vertices."""
    n = len(parents)
    edges = {frozenset((v, parents[v])) for v in range(1, n)}
    count = 0
    for perm in itertools.permutations(range(1, n)):
        img = (0,) + perm
        if all(frozenset((img[v], img[parents[v]])) in edges for v in range(1, n)):
            count += 1
    return count


def exact_edge_probabilities_fraction(net: Network) -> dict[Edge, Fraction]:
    """Rational edge probabilities for unit networks."""
    trees = spanning_trees(net)
    cnt: Counter = Counter(e for t in trees for e in t)
    return {e: Fraction(cnt[e], len(trees)) for e in net.edge_list()}
