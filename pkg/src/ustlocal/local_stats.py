"""Rooted tree shapes, their limit laws under the Poisson(1) branching
process, and the census machinery comparing UST balls against those laws.

Canonical codes are nested-parenthesis strings with children sorted
lexicographically: ``"()"`` is a single vertex, ``"(())"`` a single edge
rooted at an end, ``"(()())"`` the cherry.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidParams, LimitExceeded
from .graph_core import as_pyrandom
from .mc import bonferroni_sigma

MAX_ENUMERATION = 16
POISSON_TABLE_SIZE = 30


class RootedShape:
    """Unlabelled rooted tree; equality and hashing go through the canonical code.

    Build with :meth:`of`, :meth:`from_code` or the helpers below, which keep
    the children in canonical order.
    """

    __slots__ = ("children", "code", "size", "height", "last_level")

    def __init__(self, children: tuple["RootedShape", ...], code: str, size: int, height: int, last_level: int):
        self.children = children
        self.code = code
        self.size = size
        self.height = height
        self.last_level = last_level

    @classmethod
    def of(cls, children: Iterable["RootedShape"] = ()) -> "RootedShape":
        kids = tuple(sorted(children, key=lambda c: c.code))
        if not kids:
            return cls((), "()", 1, 0, 1)
        height = 1 + max(c.height for c in kids)
        last = sum(c.last_level for c in kids if c.height == height - 1)
        code = "(" + "".join(c.code for c in kids) + ")"
        return cls(kids, code, 1 + sum(c.size for c in kids), height, last)

    @classmethod
    def from_code(cls, code: str) -> "RootedShape":
        return _from_code(code)

    @classmethod
    def from_nested(cls, nested) -> "RootedShape":
        """From nested child lists in any order, e.g. ``[[], [[]]]``."""
        return cls.of(cls.from_nested(c) for c in nested)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootedShape) and other.code == self.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        return f"RootedShape({self.code!r})"

    @property
    def degree(self) -> int:
        return len(self.children)

    def to_nested(self) -> list:
        return [c.to_nested() for c in self.children]

    def bfs_parents(self) -> list[int]:
        """Parent indices of a breadth-first labelling (root is 0, parent -1).

        Every prefix of the labelling spans a subtree and vertices at maximal
        depth come last.
        """
        parents = [-1]
        queue = [(self, 0)]
        i = 0
        while i < len(queue):
            node, idx = queue[i]
            i += 1
            for c in node.children:
                parents.append(idx)
                queue.append((c, len(parents) - 1))
        return parents

    def depths(self) -> list[int]:
        parents = self.bfs_parents()
        depth = [0] * len(parents)
        for i in range(1, len(parents)):
            depth[i] = depth[parents[i]] + 1
        return depth

    def truncate(self, r: int) -> "RootedShape":
        """Ball of radius ``r`` around the root."""
        if r <= 0:
            return LEAF
        return RootedShape.of(c.truncate(r - 1) for c in self.children)


@lru_cache(maxsize=200_000)
def _from_code(code: str) -> RootedShape:
    if not code or code[0] != "(" or code[-1] != ")":
        raise InvalidParams(f"malformed shape code {code!r}")
    kids, depth, start = [], 0, 1
    for i in range(1, len(code) - 1):
        ch = code[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        else:
            raise InvalidParams(f"malformed shape code {code!r}")
        if depth < 0:
            raise InvalidParams(f"malformed shape code {code!r}")
        if depth == 0:
            kids.append(_from_code(code[start : i + 1]))
            start = i + 1
    if depth != 0:
        raise InvalidParams(f"malformed shape code {code!r}")
    return RootedShape.of(kids)


LEAF = RootedShape.of()


def path_shape(k: int) -> RootedShape:
    """Path on ``k`` vertices rooted at an end."""
    s = LEAF
    for _ in range(k - 1):
        s = RootedShape.of([s])
    return s


def star_shape(leaves: int) -> RootedShape:
    return RootedShape.of([LEAF] * leaves)


def canonize(shape) -> str:
    """Canonical code of a shape, a code string, or nested child lists."""
    if isinstance(shape, RootedShape):
        return shape.code
    if isinstance(shape, str):
        return RootedShape.from_code(shape).code
    return RootedShape.from_nested(shape).code


@lru_cache(maxsize=200_000)
def _stab(code: str) -> int:
    shape = RootedShape.from_code(code)
    out = 1
    for child_code, k in Counter(c.code for c in shape.children).items():
        out *= math.factorial(k) * _stab(child_code) ** k
    return out


def stab_order(shape) -> int:
    """Number of root-preserving automorphisms (exact integer)."""
    return _stab(canonize(shape))


def _shape(shape) -> RootedShape:
    return shape if isinstance(shape, RootedShape) else RootedShape.from_code(canonize(shape))


def limit_log_prob_conditioned(shape, r: int | None = None) -> float:
    s = _shape(shape)
    r = s.height if r is None else r
    if r < 1:
        raise InvalidParams("the conditioned law needs radius >= 1")
    if s.height != r:
        return -math.inf
    t = s.last_level
    return math.log(t) - s.size + t - math.log(stab_order(s))


def limit_prob_conditioned(shape, r: int | None = None) -> float:
    """|T_r| e^{-|V|+|T_r|} / |Stab_T|: the ball law of the Poisson(1) tree
    conditioned to survive.  Shapes whose height is not ``r`` get 0."""
    return math.exp(limit_log_prob_conditioned(shape, r))


def limit_log_prob_unconditional(shape, r: int) -> float:
    s = _shape(shape)
    if r < 0:
        raise InvalidParams("radius must be >= 0")
    if s.height > r:
        return -math.inf
    t = s.last_level if s.height == r else 0
    return -s.size + t - math.log(stab_order(s))


def limit_prob_unconditional(shape, r: int) -> float:
    """e^{-|V|+|T_r|} / |Stab_T| for the radius-``r`` ball of an unconditioned
    Poisson(1) tree; |T_r| = 0 when the shape dies out before depth ``r``."""
    return math.exp(limit_log_prob_unconditional(shape, r))


# ---------------------------------------------------------------------------
# Poisson(1) Galton-Watson sampling

_POISSON_CDF = list(np.cumsum([math.exp(-1) / math.factorial(k) for k in range(POISSON_TABLE_SIZE + 1)]))


def poisson1(rnd) -> int:
    u = rnd.random()
    for k, c in enumerate(_POISSON_CDF):
        if u < c:
            return k
    # tail beyond the table: keep accumulating exact terms
    k, c, term = POISSON_TABLE_SIZE, _POISSON_CDF[-1], math.exp(-1) / math.factorial(POISSON_TABLE_SIZE)
    while u >= c and term > 0:
        k += 1
        term /= k
        c += term
    return k


def _pgw_code(rnd, depth: int) -> str:
    if depth <= 0:
        return "()"
    kids = sorted(_pgw_code(rnd, depth - 1) for _ in range(poisson1(rnd)))
    return "(" + "".join(kids) + ")"


def _pgw_conditioned_code(rnd, r: int) -> str:
    code = "()"  # the spine vertex at depth r
    for remaining in range(1, r + 1):
        kids = [code] + [_pgw_code(rnd, remaining - 1) for _ in range(poisson1(rnd))]
        code = "(" + "".join(sorted(kids)) + ")"
    return code


def sample_pgw(rng, truncate_depth: int) -> RootedShape:
    """Unconditioned Poisson(1) Galton-Watson tree cut at ``truncate_depth``."""
    if truncate_depth < 0:
        raise InvalidParams("truncate_depth must be >= 0")
    return RootedShape.from_code(_pgw_code(as_pyrandom(rng), truncate_depth))


def sample_pgw_conditioned(rng, r: int) -> RootedShape:
    """Radius-``r`` ball of the size-biased tree: an ``r``-step spine whose
    vertices each carry Poisson(1) independent unconditioned subtrees."""
    if r < 0:
        raise InvalidParams("r must be >= 0")
    return RootedShape.from_code(_pgw_conditioned_code(as_pyrandom(rng), r))


def pgw_codes(rng, depth: int, count: int, conditioned: bool = False) -> Counter:
    """Tally of ``count`` sampled ball codes (fast path for large samples)."""
    rnd = as_pyrandom(rng)
    draw = _pgw_conditioned_code if conditioned else _pgw_code
    return Counter(draw(rnd, depth) for _ in range(count))


def survival_prob(n: int) -> float:
    """P(Poisson(1) tree survives n generations): p_0 = 1, p_n = 1 - e^{-p_{n-1}}."""
    if n < 0:
        raise InvalidParams("n must be >= 0")
    p = 1.0
    for _ in range(n):
        p = -math.expm1(-p)
    return p


def survival_curve(n: int) -> np.ndarray:
    out = np.empty(n + 1)
    p = 1.0
    out[0] = p
    for i in range(1, n + 1):
        p = -math.expm1(-p)
        out[i] = p
    return out


# ---------------------------------------------------------------------------
# exhaustive enumeration


@lru_cache(maxsize=32)
def _enumerate(max_vertices: int, max_height: int) -> tuple[RootedShape, ...]:
    pool: list[RootedShape] = [LEAF]  # sizes nondecreasing
    for s in range(2, max_vertices + 1):
        cand = [t for t in pool if t.height <= max_height - 1]
        found: list[RootedShape] = []

        def rec(start: int, remaining: int, chosen: list[RootedShape]) -> None:
            if remaining == 0:
                found.append(RootedShape.of(chosen))
                return
            for i in range(start, len(cand)):
                t = cand[i]
                if t.size > remaining:
                    break
                chosen.append(t)
                rec(i, remaining - t.size, chosen)
                chosen.pop()

        rec(0, s - 1, [])
        pool.extend(sorted(found, key=lambda t: t.code))
    return tuple(pool)


def enumerate_shapes(max_vertices: int, exact_height: int | None = None, max_height: int | None = None) -> list[RootedShape]:
    """Every rooted shape with at most ``max_vertices`` vertices, once each."""
    if max_vertices > MAX_ENUMERATION:
        raise LimitExceeded(f"enumeration is capped at {MAX_ENUMERATION} vertices")
    if max_vertices < 1:
        return []
    h = max_vertices - 1
    if max_height is not None:
        h = min(h, max_height)
    if exact_height is not None:
        h = min(h, exact_height)
    shapes = _enumerate(max_vertices, h)
    if exact_height is not None:
        return [t for t in shapes if t.height == exact_height]
    return list(shapes)


@lru_cache(maxsize=32)
def _law_table(r: int, conditioned: bool, max_vertices: int) -> dict[str, float]:
    shapes = enumerate_shapes(max_vertices, max_height=r)
    if conditioned:
        return {t.code: limit_prob_conditioned(t, r) for t in shapes if t.height == r}
    return {t.code: limit_prob_unconditional(t, r) for t in shapes}


def law_table(r: int, conditioned: bool = True, max_vertices: int = 14) -> dict[str, float]:
    """Limit law at radius ``r`` over all shapes with at most ``max_vertices``
    vertices (mass beyond the cut is left to the residual)."""
    return dict(_law_table(r, conditioned, max_vertices))


# ---------------------------------------------------------------------------
# balls and censuses


def ball_code(adj: Sequence[Sequence[int]], v: int, r: int) -> str:
    """Canonical code of the radius-``r`` ball around ``v`` in a tree."""
    if r < 0:
        raise InvalidParams("r must be >= 0")
    order = [v]
    parent = {v: -1}
    depth = {v: 0}
    i = 0
    while i < len(order):
        u = order[i]
        i += 1
        if depth[u] < r:
            du = depth[u] + 1
            pu = parent[u]
            for w in adj[u]:
                if w != pu:
                    parent[w] = u
                    depth[w] = du
                    order.append(w)
    kids: dict[int, list[str]] = {}
    for u in reversed(order):
        ks = kids.get(u)
        code = "(" + "".join(sorted(ks)) + ")" if ks else "()"
        p = parent[u]
        if p < 0:
            return code
        kids.setdefault(p, []).append(code)
    raise AssertionError("unreachable")


def extract_ball(tree, v: int, r: int) -> RootedShape:
    """Rooted shape of B_tree(v, r); ``tree`` is a SpanningTree or an adjacency list."""
    adj = tree.adjacency() if hasattr(tree, "adjacency") else tree
    return RootedShape.from_code(ball_code(adj, v, r))


@dataclass
class BallCensus:
    """Counts of ball codes over a batch of sampled trees."""

    radius: int
    counts: Counter = field(default_factory=Counter)
    samples: int = 0
    per_sample: int = 0
    graph: str = ""
    seed: int | None = None
    mode: str = "all"

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def frequencies(self) -> dict[str, float]:
        tot = self.total
        return {c: k / tot for c, k in self.counts.items()} if tot else {}

    def merge(self, other: "BallCensus") -> "BallCensus":
        if other.radius != self.radius or other.mode != self.mode:
            raise InvalidParams("can only merge censuses of the same radius and mode")
        return BallCensus(
            self.radius,
            self.counts + other.counts,
            self.samples + other.samples,
            self.per_sample,
            self.graph,
            self.seed,
            self.mode,
        )

    def to_json(self) -> str:
        meta = {
            "graph": self.graph,
            "radius": self.radius,
            "samples": self.samples,
            "per_sample": self.per_sample,
            "seed": self.seed,
            "mode": self.mode,
        }
        return json.dumps({"meta": meta, "counts": dict(sorted(self.counts.items()))}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "BallCensus":
        raw = json.loads(text)
        m = raw["meta"]
        return cls(m["radius"], Counter(raw["counts"]), m["samples"], m["per_sample"], m["graph"], m["seed"], m["mode"])


def census(trees: Iterable, r: int, selection: str = "all", rng=None, graph: str = "", seed=None) -> BallCensus:
    """Tally radius-``r`` ball shapes over a stream of spanning trees.

    ``selection="all"`` counts every vertex of every tree (quenched counts);
    ``"uniform"`` counts one uniformly chosen vertex per tree (annealed law).
    """
    if r < 0:
        raise InvalidParams("r must be >= 0")
    if selection not in ("all", "uniform"):
        raise InvalidParams(f"unknown selection {selection!r}")
    rnd = as_pyrandom(rng) if selection == "uniform" else None
    out = BallCensus(r, Counter(), 0, 0, graph, seed, selection)
    for t in trees:
        adj = t.adjacency() if hasattr(t, "adjacency") else t
        n = len(adj)
        if selection == "all":
            out.counts.update(ball_code(adj, v, r) for v in range(n))
            out.per_sample = n
        else:
            out.counts[ball_code(adj, int(rnd.random() * n), r)] += 1
            out.per_sample = 1
        out.samples += 1
    return out


def _freqs(obj) -> dict[str, float]:
    if isinstance(obj, BallCensus):
        return obj.frequencies()
    tot = sum(obj.values())
    return {c: v / tot for c, v in obj.items()} if tot else {}


def tv_distance(observed, law: Mapping[str, float], min_mass: float = 1e-4) -> float:
    """Total variation between an empirical census and a tabulated law.

    Shapes with theoretical mass below ``min_mass`` and every code absent from
    ``law`` are pooled into one residual bucket on both sides.
    """
    emp = _freqs(observed)
    kept = {c: p for c, p in law.items() if p >= min_mass}
    tv = math.fsum(abs(emp.get(c, 0.0) - p) for c, p in kept.items())
    resid_emp = max(0.0, 1.0 - math.fsum(emp.get(c, 0.0) for c in kept))
    resid_th = max(0.0, 1.0 - math.fsum(kept.values()))
    return 0.5 * (tv + abs(resid_emp - resid_th))


@dataclass
class ShapeDeviation:
    code: str
    observed: float
    predicted: float
    z: float


def shape_zscores(observed: BallCensus, law: Mapping[str, float], min_mass: float = 1e-4) -> list[ShapeDeviation]:
    """Binomial z-score of each well-populated shape's frequency."""
    N = observed.total
    emp = observed.frequencies()
    out = []
    for c, p in sorted(law.items(), key=lambda kv: -kv[1]):
        if p < min_mass:
            continue
        sd = math.sqrt(p * (1 - p) / N)
        out.append(ShapeDeviation(c, emp.get(c, 0.0), p, (emp.get(c, 0.0) - p) / sd))
    return out


def bonferroni_threshold(deviations: Sequence[ShapeDeviation], nsigma: float = 4.0) -> float:
    return bonferroni_sigma(len(deviations), nsigma)
