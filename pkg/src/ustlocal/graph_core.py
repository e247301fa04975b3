"""Networks, graph families, contraction/deletion and random-walk primitives.

Vertices are dense integers ``0..n-1``.  A :class:`Network` is an undirected
multigraph with positive conductances where parallel edges have already been
merged (conductances summed) and loops dropped, so every unordered pair
carries at most one edge.
"""
from __future__ import annotations

import io
import math
import random
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    CycleInA,
    DisconnectedGraph,
    DisconnectsGraph,
    GenerationTimeout,
    InvalidParams,
    NonPositiveConductance,
    VertexOutOfRange,
)

Edge = tuple[int, int]

FAMILIES = (
    "complete",
    "complete_bipartite",
    "random_regular",
    "hypercube",
    "torus",
    "chained_cliques",
    "star_of_cliques",
    "path",
    "cycle",
    "star",
)

RESTART_CAP = 10_000


def as_pyrandom(rng) -> random.Random:
    """Return a ``random.Random`` driven by ``rng``.

    Hot loops draw from the stdlib generator; a numpy ``Generator`` (or an
    integer seed) is converted deterministically by drawing one 63-bit seed.
    """
    if isinstance(rng, random.Random):
        return rng
    if rng is None or isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(rng)
    return random.Random(int(rng.integers(0, 2**63 - 1)))


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, random.Random):
        return np.random.default_rng(rng.getrandbits(63))
    return np.random.default_rng(rng)


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Network:
    """Immutable weighted graph with cached adjacency and total conductances.

    Build instances with :func:`build_network`; the constructor trusts its
    input.
    """

    __slots__ = ("n", "edges", "nbrs", "conds", "pi", "unit", "_index", "_cum")

    def __init__(self, n: int, edges: list[tuple[int, int, float]]):
        self.n = n
        self.edges = edges
        self.nbrs: list[list[int]] = [[] for _ in range(n)]
        self.conds: list[list[float]] = [[] for _ in range(n)]
        self._index: dict[Edge, int] = {}
        for i, (u, v, c) in enumerate(edges):
            self._index[(u, v)] = i
            self.nbrs[u].append(v)
            self.nbrs[v].append(u)
            self.conds[u].append(c)
            self.conds[v].append(c)
        self.pi = np.array([math.fsum(cs) for cs in self.conds], dtype=float)
        self.unit = all(c == 1.0 for _, _, c in edges)
        self._cum: list[list[float]] | None = None

    def __repr__(self) -> str:
        return f"Network(n={self.n}, m={len(self.edges)}, unit={self.unit})"

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.nbrs[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.nbrs], dtype=np.int64)

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._index

    def edge_index(self, u: int, v: int) -> int:
        return self._index[edge_key(u, v)]

    def conductance(self, u: int, v: int) -> float:
        i = self._index.get(edge_key(u, v))
        return 0.0 if i is None else self.edges[i][2]

    def edge_list(self) -> list[Edge]:
        return [(u, v) for u, v, _ in self.edges]

    def is_regular(self) -> bool:
        degs = self.degrees()
        return bool(np.all(degs == degs[0]))

    def cumulative(self) -> list[list[float]]:
        """Per-vertex cumulative conductances, for weighted neighbour draws."""
        if self._cum is None:
            self._cum = [list(accumulate(cs)) for cs in self.conds]
        return self._cum

    def laplacian(self) -> np.ndarray:
        L = np.zeros((self.n, self.n))
        for u, v, c in self.edges:
            L[u, v] -= c
            L[v, u] -= c
        L[np.diag_indices(self.n)] = self.pi
        return L

    def laplacian_sparse(self):
        from scipy import sparse

        if not self.edges:
            return sparse.csr_matrix((self.n, self.n))
        e = np.array([(u, v) for u, v, _ in self.edges], dtype=np.int64)
        c = np.array([c for _, _, c in self.edges])
        rows = np.concatenate([e[:, 0], e[:, 1], np.arange(self.n)])
        cols = np.concatenate([e[:, 1], e[:, 0], np.arange(self.n)])
        vals = np.concatenate([-c, -c, self.pi])
        return sparse.csr_matrix((vals, (rows, cols)), shape=(self.n, self.n))

    def neighbor(self, u: int, rnd: random.Random) -> int:
        """One network-random-walk step from ``u``: P(v) = c(u,v)/pi(u)."""
        nb = self.nbrs[u]
        if self.unit:
            return nb[int(rnd.random() * len(nb))]
        cum = self.cumulative()[u]
        i = bisect_right(cum, rnd.random() * cum[-1])
        return nb[min(i, len(nb) - 1)]


def _components(n: int, adj: Sequence[Iterable[int]]) -> int:
    seen = [False] * n
    count = 0
    for s in range(n):
        if seen[s]:
            continue
        count += 1
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def build_network(edges: Iterable[Sequence], vertex_count: int) -> Network:
    """Validate an edge list and build a connected :class:`Network`.

    Each edge is ``(u, v)`` or ``(u, v, c)``.  Parallel edges are merged by
    summing conductances; loops are dropped (they change neither spanning
    trees nor resistances).
    """
    n = int(vertex_count)
    if n < 1:
        raise InvalidParams("vertex_count must be positive")
    merged: dict[Edge, float] = {}
    for e in edges:
        u, v = int(e[0]), int(e[1])
        c = float(e[2]) if len(e) > 2 else 1.0
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside 0..{n - 1}")
        if not (c > 0 and math.isfinite(c)):
            raise NonPositiveConductance(f"edge ({u}, {v}) has conductance {c}")
        if u == v:
            continue
        k = edge_key(u, v)
        merged[k] = merged.get(k, 0.0) + c
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in merged:
        adj[u].append(v)
        adj[v].append(u)
    if _components(n, adj) != 1:
        raise DisconnectedGraph("network must be connected")
    return Network(n, [(u, v, merged[(u, v)]) for u, v in sorted(merged)])


# ---------------------------------------------------------------------------
# generators


def complete(n: int) -> Network:
    if n < 1:
        raise InvalidParams("complete graph needs n >= 1")
    return build_network([(i, j) for i in range(n) for j in range(i + 1, n)], n)


def complete_bipartite(a: int, b: int) -> Network:
    if a < 1 or b < 1:
        raise InvalidParams("complete_bipartite needs a, b >= 1")
    return build_network([(i, a + j) for i in range(a) for j in range(b)], a + b)


def path(n: int) -> Network:
    if n < 1:
        raise InvalidParams("path needs n >= 1")
    return build_network([(i, i + 1) for i in range(n - 1)], n)


def cycle(n: int) -> Network:
    if n < 3:
        raise InvalidParams("cycle needs n >= 3")
    return build_network([(i, (i + 1) % n) for i in range(n)], n)


def star(n: int) -> Network:
    """Star with centre 0 and ``n - 1`` leaves."""
    if n < 2:
        raise InvalidParams("star needs n >= 2")
    return build_network([(0, i) for i in range(1, n)], n)


def hypercube(dim: int) -> Network:
    if dim < 1:
        raise InvalidParams("hypercube needs dim >= 1")
    n = 1 << dim
    return build_network([(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)], n)


def torus(side: int, dim: int = 2) -> Network:
    """Discrete torus (Z/side)^dim; side >= 3 keeps it simple."""
    if side < 3 or dim < 1:
        raise InvalidParams("torus needs side >= 3 and dim >= 1")
    n = side**dim
    edges = []
    for v in range(n):
        stride = 1
        for _ in range(dim):
            coord = (v // stride) % side
            w = v - coord * stride + ((coord + 1) % side) * stride
            edges.append((v, w))
            stride *= side
    return build_network(edges, n)


def chained_cliques(m: int, d: int) -> Network:
    """``m`` copies of K_{d+1}, each missing edge (x_i, y_i), chained by (y_i, x_{i+1}).

    In copy ``i`` the vertices are ``i*(d+1) .. i*(d+1)+d``; x_i is the first
    and y_i the last of them.
    """
    if m < 1 or d < 2:
        raise InvalidParams("chained_cliques needs m >= 1 and d >= 2")
    s = d + 1
    edges = []
    for i in range(m):
        base = i * s
        x, y = base, base + d
        for a in range(base, base + s):
            for b in range(a + 1, base + s):
                if (a, b) != (x, y):
                    edges.append((a, b))
        if i + 1 < m:
            edges.append((y, (i + 1) * s))
    return build_network(edges, m * s)


def star_of_cliques(d: int) -> Network:
    """``d/2`` copies of K_d minus an edge, with a hub (vertex ``n-1``) joined to
    both endpoints of each removed edge.  The hub has degree ``d``."""
    if d < 4 or d % 2:
        raise InvalidParams("star_of_cliques needs even d >= 4")
    copies = d // 2
    hub = copies * d
    edges = []
    for i in range(copies):
        base = i * d
        a, b = base, base + 1
        for u in range(base, base + d):
            for v in range(u + 1, base + d):
                if (u, v) != (a, b):
                    edges.append((u, v))
        edges += [(hub, a), (hub, b)]
    return build_network(edges, hub + 1)


def _pairing_exact(n: int, d: int, gen: np.random.Generator) -> list[Edge] | None:
    stubs = np.repeat(np.arange(n), d)
    gen.shuffle(stubs)
    pairs = stubs.reshape(-1, 2)
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    if np.any(lo == hi):
        return None
    keys = lo.astype(np.int64) * n + hi
    if np.unique(keys).size != keys.size:
        return None
    return list(zip(lo.tolist(), hi.tolist()))


def _pairing_incremental(n: int, d: int, rnd: random.Random) -> list[Edge] | None:
    # Steger-Wormald style: keep the good pairs, re-pair only the leftovers.
    edges: set[Edge] = set()
    stubs = [v for v in range(n) for _ in range(d)]
    while stubs:
        rnd.shuffle(stubs)
        leftover: list[int] = []
        it = iter(stubs)
        for a, b in zip(it, it):
            k = edge_key(a, b)
            if a != b and k not in edges:
                edges.add(k)
            else:
                leftover += [a, b]
        if len(leftover) == len(stubs):
            verts = sorted(set(leftover))
            if not any(
                verts[i] != verts[j] and edge_key(verts[i], verts[j]) not in edges
                for i in range(len(verts))
                for j in range(i + 1, len(verts))
            ):
                return None
        stubs = leftover
    return sorted(edges)


def random_regular(n: int, d: int, seed=None) -> Network:
    """Simple connected d-regular graph from the configuration model.

    Small ``d`` uses whole-pairing rejection (exactly uniform over simple
    graphs); otherwise the acceptance rate ``~exp(-(d^2-1)/4)`` is hopeless and
    pairs are accepted incrementally, which is asymptotically uniform.
    """
    if d < 1 or d >= n or (n * d) % 2:
        raise InvalidParams("random_regular needs 1 <= d < n and n*d even")
    gen = as_generator(seed)
    exact = (d * d - 1) / 4 <= 5.0
    rnd = None if exact else as_pyrandom(gen)
    for _ in range(RESTART_CAP):
        edges = _pairing_exact(n, d, gen) if exact else _pairing_incremental(n, d, rnd)
        if edges is None:
            continue
        try:
            return build_network(edges, n)
        except DisconnectedGraph:
            continue
    raise GenerationTimeout(f"random_regular({n}, {d}) exceeded {RESTART_CAP} restarts")


_PARAM_NAMES = {
    "complete": ("n",),
    "complete_bipartite": ("a", "b"),
    "random_regular": ("n", "d"),
    "hypercube": ("dim",),
    "torus": ("side", "dim"),
    "chained_cliques": ("m", "d"),
    "star_of_cliques": ("d",),
    "path": ("n",),
    "cycle": ("n",),
    "star": ("n",),
}


def generate(family: str, params: dict, seed=None) -> Network:
    """Build a member of a named graph family; ``params`` keyed as in ``_PARAM_NAMES``."""
    if family not in _PARAM_NAMES:
        raise InvalidParams(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    names = _PARAM_NAMES[family]
    args = []
    for k in names:
        if k in params:
            args.append(int(params[k]))
        elif not (family == "torus" and k == "dim"):
            raise InvalidParams(f"{family} needs parameters {names}")
    if family == "random_regular":
        return random_regular(*args, seed=seed)
    return globals()[family](*args)


# ---------------------------------------------------------------------------
# contraction / deletion


class _DSU:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


@dataclass
class Contraction:
    """Result of :func:`contract_delete`.

    ``merge[v]`` is the contracted id of original vertex ``v``; ``originals``
    lists, per contracted edge, the original edges (with conductances) that
    were merged into it.
    """

    network: Network
    merge: list[int]
    originals: dict[Edge, list[tuple[int, int, float]]] = field(repr=False)


def contract_delete(net: Network, A: Iterable[Edge] = (), B: Iterable[Edge] = ()) -> Contraction:
    """Contract the edges of ``A`` and erase those of ``B`` (the graph G/A - B)."""
    A = {edge_key(*e) for e in A}
    B = {edge_key(*e) for e in B}
    for e in A | B:
        if not net.has_edge(*e):
            raise InvalidParams(f"{e} is not an edge of the network")
    if A & B:
        raise InvalidParams("A and B must be disjoint")
    dsu = _DSU(net.n)
    for u, v in A:
        if not dsu.union(u, v):
            raise CycleInA(f"A contains a cycle through {(u, v)}")
    kept = [(u, v, c) for u, v, c in net.edges if (u, v) not in B]
    adj: list[list[int]] = [[] for _ in range(net.n)]
    for u, v, _ in kept:
        adj[u].append(v)
        adj[v].append(u)
    if _components(net.n, adj) != 1:
        raise DisconnectsGraph("removing B disconnects the network")
    label: dict[int, int] = {}
    merge = []
    for v in range(net.n):
        r = dsu.find(v)
        if r not in label:
            label[r] = len(label)
        merge.append(label[r])
    originals: dict[Edge, list[tuple[int, int, float]]] = {}
    for u, v, c in kept:
        a, b = merge[u], merge[v]
        if a != b:
            originals.setdefault(edge_key(a, b), []).append((u, v, c))
    edges = [(a, b, math.fsum(c for _, _, c in group)) for (a, b), group in originals.items()]
    return Contraction(build_network(edges, len(label)), merge, originals)


# ---------------------------------------------------------------------------
# random walks


@dataclass
class WalkPath:
    vertices: list[int]

    @property
    def steps(self) -> int:
        return len(self.vertices) - 1

    def hitting_time(self, v: int) -> int | None:
        """First t >= 0 with X_t = v (None if never)."""
        try:
            return self.vertices.index(v)
        except ValueError:
            return None

    def return_time(self, v: int) -> int | None:
        """First t >= 1 with X_t = v."""
        try:
            return self.vertices.index(v, 1)
        except ValueError:
            return None


def random_walk(net: Network, start: int, steps: int, rng) -> WalkPath:
    if not 0 <= start < net.n:
        raise VertexOutOfRange(f"start {start} outside 0..{net.n - 1}")
    if steps < 0:
        raise InvalidParams("steps must be >= 0")
    rnd = as_pyrandom(rng)
    out = [start]
    u = start
    for _ in range(steps):
        u = net.neighbor(u, rnd)
        out.append(u)
    return WalkPath(out)


def stationary_vertex(net: Network, rng) -> int:
    """Vertex drawn with probability pi(v) / sum(pi)."""
    rnd = as_pyrandom(rng)
    cum = np.cumsum(net.pi)
    return int(min(np.searchsorted(cum, rnd.random() * cum[-1], side="right"), net.n - 1))


def t_compatible_sample(net: Network, tree, rng, start: str = "uniform") -> tuple[tuple[int, ...], bool]:
    """Draw (X_1..X_k) along a BFS-labelled rooted tree and test distinctness.

    ``tree`` is either a parent list (``parents[0] == -1``, ``parents[i] < i``)
    or any object with a ``bfs_parents()`` method.  X_1 is uniform (or
    stationary with ``start="stationary"``); X_i is a random-walk step from the
    image of its parent.
    """
    parents = tree.bfs_parents() if hasattr(tree, "bfs_parents") else list(tree)
    rnd = as_pyrandom(rng)
    if start == "uniform":
        x = [int(rnd.random() * net.n)]
    elif start == "stationary":
        x = [stationary_vertex(net, rnd)]
    else:
        raise InvalidParams(f"unknown start mode {start!r}")
    for i in range(1, len(parents)):
        x.append(net.neighbor(x[parents[i]], rnd))
    ok = len(set(x)) == len(x) and all(net.has_edge(x[i], x[parents[i]]) for i in range(1, len(x)))
    return tuple(x), ok


# ---------------------------------------------------------------------------
# almost-regularity


@dataclass
class AlmostRegularReport:
    d: float
    delta: float
    fraction_within: float
    degree_sum_deviation: float


def check_almost_regular(net: Network, d: float) -> AlmostRegularReport:
    """Smallest delta with both degree conditions holding at tolerance delta.

    (1) at least (1-delta)n vertices have |deg - d| <= delta*d;
    (2) |sum deg - d*n| <= delta*d*n.
    Both conditions are monotone in delta, so the minimum is attained at one of
    finitely many breakpoints, which are evaluated exactly.
    """
    n = net.n
    degs = net.degrees().astype(float)
    dev = np.sort(np.abs(degs - d) / d)
    sum_dev = abs(degs.sum() - d * n) / (d * n)

    def cond1(delta: float) -> bool:
        inside = np.searchsorted(dev, delta * (1 + 1e-12), side="right")
        return inside >= (1 - delta) * n - 1e-9

    candidates = sorted({0.0, *dev.tolist(), *(1 - j / n for j in range(n + 1))})
    delta1 = next(c for c in candidates if cond1(c))
    delta = max(delta1, sum_dev)
    inside = np.searchsorted(dev, delta * (1 + 1e-12), side="right") / n
    return AlmostRegularReport(float(d), float(delta), float(inside), float(sum_dev))


# ---------------------------------------------------------------------------
# text format: "n m" then m lines "u v [c]"


def format_graph(net: Network) -> str:
    buf = io.StringIO()
    buf.write(f"{net.n} {net.num_edges}\n")
    for u, v, c in net.edges:
        buf.write(f"{u} {v}\n" if c == 1.0 else f"{u} {v} {c!r}\n")
    return buf.getvalue()


def parse_graph(text: str) -> Network:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise InvalidParams("graph text must start with a 'n m' header")
    n, m = int(lines[0][0]), int(lines[0][1])
    body = lines[1:]
    if len(body) != m:
        raise InvalidParams(f"header announces {m} edges, found {len(body)}")
    edges = []
    for parts in body:
        if len(parts) not in (2, 3):
            raise InvalidParams(f"bad edge line {' '.join(parts)!r}")
        edges.append((int(parts[0]), int(parts[1]), float(parts[2]) if len(parts) == 3 else 1.0))
    return build_network(edges, n)


def write_graph(net: Network, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_graph(net))


def read_graph(path) -> Network:
    with open(path) as fh:
        return parse_graph(fh.read())
