"""Effective resistances, Green's functions, reduced networks and the
Foster-type identities and bounds built on them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.sparse import linalg as spla

from .errors import InvalidParams, SingularSystem, VertexOutOfRange
from .graph_core import Network, as_pyrandom, build_network, t_compatible_sample
from .mc import MonteCarloCheck, binomial_check

DENSE_LIMIT = 4000
CG_RTOL = 1e-10


@dataclass(frozen=True)
class ResistanceValue:
    value: float
    method: str = "solve"

    def __float__(self) -> float:
        return self.value


class LaplacianSystem:
    """Grounded Laplacian Delta[a] with a reusable factorization.

    The ground ``a`` defaults to the highest-degree vertex.  Up to
    ``DENSE_LIMIT`` vertices a Cholesky factor is kept (and, on demand, the
    full grounded Green's matrix); above it each solve runs Jacobi-
    preconditioned CG.
    """

    def __init__(self, net: Network, ground: int | None = None):
        self.net = net
        self.n = net.n
        self.ground = int(np.argmax(net.pi)) if ground is None else int(ground)
        keep = np.ones(self.n, dtype=bool)
        keep[self.ground] = False
        self._keep = keep
        self._green: np.ndarray | None = None
        self.dense = self.n <= DENSE_LIMIT
        if self.n == 1:
            self._factor = None
            return
        if self.dense:
            L = net.laplacian()[np.ix_(keep, keep)]
            try:
                self._factor = sla.cho_factor(L, lower=True, check_finite=False)
            except np.linalg.LinAlgError as exc:
                raise SingularSystem("grounded Laplacian is not positive definite") from exc
        else:
            L = net.laplacian_sparse()[keep][:, keep].tocsr()
            self._L = L
            inv_diag = 1.0 / L.diagonal()
            self._precond = spla.LinearOperator(L.shape, matvec=lambda x: inv_diag * x)

    def solve(self, b: np.ndarray) -> np.ndarray:
        """Potentials x with x[ground] = 0 and Delta[a] x = b off the ground."""
        b = np.asarray(b, dtype=float)
        out = np.zeros(b.shape)
        if self.n == 1:
            return out
        rhs = b[self._keep]
        if self.dense:
            out[self._keep] = sla.cho_solve(self._factor, rhs, check_finite=False)
            return out
        cols = rhs if rhs.ndim == 2 else rhs[:, None]
        sol = np.empty_like(cols)
        for j in range(cols.shape[1]):
            x, info = spla.cg(self._L, cols[:, j], rtol=CG_RTOL, atol=0.0, M=self._precond, maxiter=20 * self.n)
            res = np.linalg.norm(self._L @ x - cols[:, j]) / max(np.linalg.norm(cols[:, j]), 1e-300)
            if info != 0 or res > 10 * CG_RTOL:
                raise SingularSystem(f"CG did not reach relative residual {CG_RTOL} (got {res:.2e})")
            sol[:, j] = x
        out[self._keep] = sol if rhs.ndim == 2 else sol[:, 0]
        return out

    def green_matrix(self) -> np.ndarray:
        """n x n matrix G with G[i, j] = g_ground(i, j) and zero ground row/column."""
        if self._green is None:
            if not self.dense:
                raise SingularSystem("full Green's matrix only available in the dense regime")
            G = np.zeros((self.n, self.n))
            if self.n > 1:
                m = self.n - 1
                G[np.ix_(self._keep, self._keep)] = sla.cho_solve(self._factor, np.eye(m), check_finite=False)
            self._green = G
        return self._green

    def resistance(self, u: int, v: int) -> float:
        if u == v:
            return 0.0
        if self.dense:
            G = self.green_matrix()
            return float(G[u, u] + G[v, v] - 2 * G[u, v])
        b = np.zeros(self.n)
        b[u], b[v] = 1.0, -1.0
        x = self.solve(b)
        return float(x[u] - x[v])

    def resistances(self, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
        if len(pairs) == 0:
            return np.zeros(0)
        if not self.dense:
            return np.array([self.resistance(u, v) for u, v in pairs])
        G = self.green_matrix()
        p = np.asarray(pairs, dtype=np.int64)
        u, v = p[:, 0], p[:, 1]
        return G[u, u] + G[v, v] - 2 * G[u, v]

    def green(self, a: int, i: int, j: int) -> float:
        """g_a(i, j) for an arbitrary ground ``a``, re-based from this system."""
        G = self.green_matrix()
        return float(G[i, j] - G[i, a] - G[a, j] + G[a, a])

    def resistance_to_set(self, v: int, S: Iterable[int]) -> float:
        """R_eff(v <-> S): ground one vertex of S, condition on the rest."""
        S = list(dict.fromkeys(S))
        if not S:
            raise InvalidParams("S must be nonempty")
        if v in S:
            return 0.0
        a, rest = S[0], S[1:]
        G = self.green_matrix()
        idx = np.array([v, *rest])
        M = G[np.ix_(idx, idx)] - G[idx, a][:, None] - G[a, idx][None, :] + G[a, a]
        if not rest:
            return float(M[0, 0])
        return float(M[0, 0] - M[0, 1:] @ np.linalg.solve(M[1:, 1:], M[1:, 0]))


def _check_vertex(net: Network, *vs: int) -> None:
    for v in vs:
        if not 0 <= v < net.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{net.n - 1}")


def resistance_pair(net: Network, u: int, v: int, system: LaplacianSystem | None = None) -> ResistanceValue:
    _check_vertex(net, u, v)
    if u == v:
        return ResistanceValue(0.0)
    if system is None:
        # ground at v: R = x_u where Delta[v] x = e_u
        system = LaplacianSystem(net, ground=v)
        b = np.zeros(net.n)
        b[u] = 1.0
        return ResistanceValue(float(system.solve(b)[u]))
    return ResistanceValue(system.resistance(u, v))


def identify_vertices(net: Network, S: Iterable[int]) -> tuple[Network, list[int]]:
    """Glue the vertices of ``S`` into one (parallel edges merged, loops dropped)."""
    S = set(S)
    first = min(S)
    merge, label = [], {}
    for v in range(net.n):
        key = first if v in S else v
        if key not in label:
            label[key] = len(label)
        merge.append(label[key])
    edges = [(merge[u], merge[v], c) for u, v, c in net.edges]
    return build_network(edges, len(label)), merge


def resistance_to_set(net: Network, v: int, S: Iterable[int]) -> ResistanceValue:
    S = set(S)
    _check_vertex(net, v, *S)
    if not S:
        raise InvalidParams("S must be nonempty")
    if v in S:
        raise InvalidParams("v must not belong to S")
    glued, merge = identify_vertices(net, S)
    return ResistanceValue(resistance_pair(glued, merge[v], merge[min(S)]).value)


def green_function(net: Network, a: int, i: int, j: int, method: str = "closed") -> float:
    """g_a(i, j): voltage at i when unit current enters at j and exits at a.

    ``closed`` combines three pairwise resistances; ``matrix`` inverts Delta[a]
    directly.
    """
    _check_vertex(net, a, i, j)
    if a in (i, j):
        raise InvalidParams("i and j must differ from the ground a")
    if method == "closed":
        R = lambda x, y: resistance_pair(net, x, y).value  # noqa: E731
        return (R(a, j) + R(a, i) - R(i, j)) / 2
    if method == "matrix":
        g, index = grounded_green_matrix(net, a)
        return float(g[index[i], index[j]])
    raise InvalidParams(f"unknown method {method!r}")


def grounded_green_matrix(net: Network, a: int) -> tuple[np.ndarray, dict[int, int]]:
    """[g_a(., .)] = Delta[a]^{-1}, with the vertex -> row index map."""
    keep = [v for v in range(net.n) if v != a]
    L = net.laplacian()[np.ix_(keep, keep)]
    try:
        g = np.linalg.inv(L)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem("Delta[a] is singular") from exc
    return g, {v: k for k, v in enumerate(keep)}


def reduced_network(net: Network, K: Sequence[int]) -> Network:
    """Schur complement of the Laplacian onto ``K``, read back as a network.

    Vertex ``i`` of the result is ``K[i]``.
    """
    K = list(dict.fromkeys(K))
    _check_vertex(net, *K)
    if len(K) < 2:
        raise InvalidParams("K needs at least two vertices")
    inner = [v for v in range(net.n) if v not in set(K)]
    L = net.laplacian()
    S = L[np.ix_(K, K)]
    if inner:
        try:
            X = sla.solve(L[np.ix_(inner, inner)], L[np.ix_(inner, K)], assume_a="pos")
        except np.linalg.LinAlgError as exc:
            raise SingularSystem("interior block is singular") from exc
        S = S - L[np.ix_(K, inner)] @ X
    scale = np.abs(S).max()
    edges = []
    for i in range(len(K)):
        for j in range(i + 1, len(K)):
            c = -S[i, j]
            if c > 1e-13 * scale:
                edges.append((i, j, float(c)))
    return build_network(edges, len(K))


def foster_sum(net: Network, system: LaplacianSystem | None = None) -> float:
    """Sum over edges of c(e) * R_eff(e); equals n - 1 on every connected network."""
    system = system or LaplacianSystem(net)
    R = system.resistances(net.edge_list())
    c = np.array([c for _, _, c in net.edges])
    return float(math.fsum(c * R))


def lemma_lower_bound(deg_u: float, deg_v: float, adjacent: bool = True) -> float:
    """Degree form of the cutset bound on a simple unit network."""
    if adjacent:
        return 1 / (deg_u + 1) + 1 / (deg_v + 1)
    return 1 / deg_u + 1 / deg_v


def nash_williams_bound(net: Network, u: int, v: int) -> float:
    """Lower bound on R_eff(u <-> v) from the two disjoint stars around u and v.

    When u ~ v the shared edge of conductance c is split into two edges of
    conductance 2c, so each star gains c.
    """
    _check_vertex(net, u, v)
    if u == v:
        raise InvalidParams("u and v must differ")
    c = net.conductance(u, v)
    return 1 / (net.pi[u] + c) + 1 / (net.pi[v] + c)


def high_resistance_cap(n: int, d: float, eps: float) -> float:
    """Maximum number of edges with R_eff >= eps on a d-regular graph (eps > 2/d)."""
    if eps * d <= 2:
        raise InvalidParams("the cap needs eps > 2/d")
    return n / (eps * d - 2)


def high_resistance_edges(net: Network, eps: float, system: LaplacianSystem | None = None) -> list[tuple[int, int, float]]:
    if eps <= 0:
        raise InvalidParams("eps must be positive")
    system = system or LaplacianSystem(net)
    R = system.resistances(net.edge_list())
    return [(u, v, float(r)) for (u, v, _), r in zip(net.edges, R) if r >= eps]


def default_good_threshold(d: float) -> float:
    return math.log(d) / d


def good_vertices(net: Network, threshold: float, system: LaplacianSystem | None = None) -> set[int]:
    """Vertices touching no edge whose endpoint resistance is >= threshold."""
    bad = set()
    for u, v, _ in high_resistance_edges(net, threshold, system):
        bad.update((u, v))
    return set(range(net.n)) - bad


# ---------------------------------------------------------------------------
# Monte Carlo checks of the probabilistic identities


def _hit(net: Network, start: int, target: int, rnd) -> int:
    steps, u = 0, start
    while u != target:
        u = net.neighbor(u, rnd)
        steps += 1
    return steps


def commute_time_check(net: Network, u: int, v: int, samples: int, rng) -> MonteCarloCheck:
    """Empirical E_u tau_v + E_v tau_u against 2 * (total conductance) * R_eff."""
    if samples < 1:
        raise InvalidParams("samples must be >= 1")
    rnd = as_pyrandom(rng)
    times = np.array([_hit(net, u, v, rnd) + _hit(net, v, u, rnd) for _ in range(samples)], dtype=float)
    predicted = float(net.pi.sum()) * resistance_pair(net, u, v).value
    stderr = float(times.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return MonteCarloCheck(float(times.mean()), predicted, stderr, samples)


@dataclass
class EscapeCheck:
    """Escape probability P_u(tau_v < tau_u^+) and the resistances it implies."""

    probability: MonteCarloCheck
    resistance_estimate: float
    resistance: float

    @property
    def z(self) -> float:
        return self.probability.z

    def passed(self, nsigma: float = 4.0) -> bool:
        return self.probability.passed(nsigma)


def escape_probability_check(net: Network, u: int, v: int, samples: int, rng) -> EscapeCheck:
    if samples < 1:
        raise InvalidParams("samples must be >= 1")
    if u == v:
        raise InvalidParams("u and v must differ")
    rnd = as_pyrandom(rng)
    hits = 0
    for _ in range(samples):
        w = net.neighbor(u, rnd)
        while w != u and w != v:
            w = net.neighbor(w, rnd)
        hits += w == v
    R = resistance_pair(net, u, v).value
    pi_u = float(net.pi[u])
    check = binomial_check(hits, samples, 1 / (pi_u * R))
    estimate = math.inf if hits == 0 else samples / (pi_u * hits)
    return EscapeCheck(check, estimate, R)


# ---------------------------------------------------------------------------
# tuple resistances along a rooted tree pattern


def nominal_degree(net: Network) -> float:
    degs = net.degrees()
    return float(degs[0]) if net.is_regular() else float(degs.mean())


def tuple_band(k: int, d: float, constant: float = 72.0) -> tuple[float, float]:
    """(centre, half-width) of the concentration band for R_eff(X_k <-> rest)."""
    logd = math.log(d)
    return k / ((k - 1) * d), constant * k * logd**k / d**2


def tuple_success_floor(k: int, d: float) -> float:
    return 1 - 2 * k**3 / math.log(d) ** k


def tuple_resistance_experiment(
    net: Network,
    tree,
    tuples: int,
    rng,
    start: str = "uniform",
    system: LaplacianSystem | None = None,
    band_constant: float = 72.0,
) -> list[dict]:
    """Draw ``tuples`` tree-patterned tuples and record R_eff(X_k <-> {X_1..X_{k-1}}).

    Incompatible tuples (a repeated vertex) are kept as records with
    ``resistance=None``.
    """
    parents = tree.bfs_parents() if hasattr(tree, "bfs_parents") else list(tree)
    k = len(parents)
    if k < 2:
        raise InvalidParams("the tree needs at least two vertices")
    rnd = as_pyrandom(rng)
    system = system or LaplacianSystem(net)
    d = nominal_degree(net)
    centre, half = tuple_band(k, d, band_constant)
    records = []
    for _ in range(tuples):
        x, ok = t_compatible_sample(net, parents, rnd, start=start)
        rec = {"tuple": list(x), "compatible": ok, "resistance": None, "centre": centre, "half_width": half, "in_band": False}
        if ok:
            r = system.resistance_to_set(x[-1], x[:-1])
            rec["resistance"] = r
            rec["in_band"] = abs(r - centre) <= half
        records.append(rec)
    return records


def product_resistance(system: LaplacianSystem, tuple_: Sequence[int]) -> float:
    """prod_{i>=2} R_eff(v_i <-> {v_1..v_{i-1}}) -- the probability that the
    tree pattern's edges all lie in the UST."""
    out = 1.0
    for i in range(1, len(tuple_)):
        out *= system.resistance_to_set(tuple_[i], tuple_[:i])
    return out

