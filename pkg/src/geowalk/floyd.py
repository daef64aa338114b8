"""Floyd metrics on Cayley graphs of free groups.

Every edge {a, b} is rescaled to length min(F(|a|), F(|b|)) for a summable
decreasing scaling function F.  Distances are shortest weighted paths, found
with Dijkstra on a finite region of the Cayley graph and certified by
recomputing on a larger region.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.special import zeta

from .tree import IDENTITY, FreeGroup, ReducedWord, distance as tree_distance, geodesic, gromov_product
from .walks import ResourceError

__all__ = [
    "ScalingFunction",
    "FloydBall",
    "FloydResult",
    "edge_weight",
    "floyd_distance",
    "karlsson_bound",
    "CERTIFY_TOL",
]

CERTIFY_TOL = 1e-12


@dataclass(frozen=True)
class ScalingFunction:
    """F(r) = lam**r ("geom") or (1 + r)**(-p) ("poly")."""

    kind: str
    parameter: float

    def __post_init__(self):
        if self.kind == "geom":
            if not 0 < self.parameter < 1:
                raise ValueError(f"geometric rate must lie in (0, 1), got {self.parameter}")
        elif self.kind == "poly":
            if not self.parameter > 1:
                raise ValueError(f"polynomial exponent must exceed 1, got {self.parameter}")
        else:
            raise ValueError(f"unknown scaling kind {self.kind!r}; use 'geom' or 'poly'")

    @classmethod
    def geometric(cls, rate: float) -> "ScalingFunction":
        return cls("geom", float(rate))

    @classmethod
    def polynomial(cls, exponent: float) -> "ScalingFunction":
        return cls("poly", float(exponent))

    @classmethod
    def parse(cls, text: str) -> "ScalingFunction":
        kind, sep, value = text.strip().partition(":")
        if not sep:
            raise ValueError(f"scaling literal {text!r} must look like 'geom:0.5' or 'poly:2.0'")
        try:
            parameter = float(value)
        except ValueError:
            raise ValueError(f"bad scaling parameter in {text!r}") from None
        return cls(kind.strip(), parameter)

    def format(self) -> str:
        return f"{self.kind}:{self.parameter!r}"

    def __call__(self, r: float) -> float:
        if self.kind == "geom":
            return self.parameter ** r
        return (1.0 + r) ** (-self.parameter)

    def tail(self, r: int) -> float:
        """sum_{j >= r} F(j)."""
        if self.kind == "geom":
            return self.parameter ** r / (1.0 - self.parameter)
        return float(zeta(self.parameter, r + 1))


def edge_weight(a: ReducedWord, b: ReducedWord, F: ScalingFunction) -> float:
    if tree_distance(a, b) != 1:
        raise ValueError("edge_weight needs adjacent vertices")
    return min(F(a.length), F(b.length))


@dataclass(frozen=True)
class FloydResult:
    value: float
    certified: bool
    radius: int
    escape_bound: float

    def __float__(self) -> float:
        return self.value


def _escape_cost(length: int, radius: int, F: ScalingFunction) -> float:
    # Leaving the ball of the given radius climbs through every sphere once.
    return sum(F(j) for j in range(length + 1, radius + 2))


def _region(u: ReducedWord, v: ReducedWord, radius: int, corridor: int, gens: list[ReducedWord]) -> set[ReducedWord]:
    """Vertices of the radius-ball within ``corridor`` steps of the geodesic [u, v]."""
    region = set(p for p in geodesic(u, v) if p.length <= radius)
    frontier = list(region)
    for _ in range(corridor):
        nxt = []
        for p in frontier:
            for s in gens:
                q = p * s
                if q.length <= radius and q not in region:
                    region.add(q)
                    nxt.append(q)
        frontier = nxt
    return region


def _dijkstra(u: ReducedWord, v: ReducedWord, region: set, gens: list[ReducedWord], F: ScalingFunction) -> float:
    best = {u: 0.0}
    counter = itertools.count()
    heap = [(0.0, next(counter), u)]
    while heap:
        d, _, p = heapq.heappop(heap)
        if p is v:
            return d
        if d > best[p]:
            continue
        fp = F(p.length)
        for s in gens:
            q = p * s
            if q not in region:
                continue
            nd = d + min(fp, F(q.length))
            if nd < best.get(q, math.inf):
                best[q] = nd
                heapq.heappush(heap, (nd, next(counter), q))
    return math.inf


def floyd_distance(
    u: ReducedWord,
    v: ReducedWord,
    F: ScalingFunction,
    radius: int | None = None,
    group: FreeGroup | None = None,
    corridor: int = 1,
    budget: int = 2_000_000,
) -> FloydResult:
    """Floyd distance between two vertices of the Cayley tree.

    Dijkstra runs on the ball of ``radius`` restricted to a corridor around the
    word geodesic; ``certified`` means the value is unchanged (< 1e-12) when the
    radius and the corridor both grow by 2.  ``escape_bound`` is the cheapest
    possible cost of any path that leaves the ball.
    """
    group = group or FreeGroup(max([2, *map(abs, u.letters()), *map(abs, v.letters())]))
    if radius is None:
        radius = max(u.length, v.length) + 2
    if max(u.length, v.length) > radius - 2:
        raise ValueError(f"endpoints must lie within radius {radius - 2} of the identity")
    if u is v:
        return FloydResult(0.0, True, radius, _escape_cost(u.length, radius, F) * 2)
    gens = group.generators()
    region = _region(u, v, radius, corridor, gens)
    if len(region) > budget:
        raise ResourceError(f"Floyd region of {len(region)} vertices exceeds budget {budget}")
    value = _dijkstra(u, v, region, gens, F)
    wider = _region(u, v, radius + 2, corridor + 2, gens)
    if len(wider) > budget:
        raise ResourceError(f"Floyd region of {len(wider)} vertices exceeds budget {budget}")
    check = _dijkstra(u, v, wider, gens, F)
    escape = _escape_cost(u.length, radius, F) + _escape_cost(v.length, radius, F)
    return FloydResult(value, abs(value - check) < CERTIFY_TOL, radius, escape)


def karlsson_bound(u: ReducedWord, v: ReducedWord, F: ScalingFunction) -> float:
    """4 r F(r) + 2 sum_{j >= r} F(j) with r the distance from e to [u, v]."""
    r = round(gromov_product(IDENTITY, u, v))
    return 4 * r * F(r) + 2 * F.tail(r)


class FloydBall:
    """Weighted Cayley graph on the full ball of a given radius (small radii only)."""

    def __init__(self, group: FreeGroup, radius: int, F: ScalingFunction, budget: int = 2_000_000):
        self.group = group
        self.radius = radius
        self.F = F
        gens = group.generators()
        count = 1 + 2 * group.rank * sum((2 * group.rank - 1) ** (r - 1) for r in range(1, radius + 1))
        if count > budget:
            raise ResourceError(f"ball of radius {radius} has {count} vertices, budget {budget}")
        vertices = [IDENTITY]
        frontier = [IDENTITY]
        for _ in range(radius):
            frontier = [p.push(x.letter) for p in frontier for x in gens if p.length == 0 or x.letter != -p.letter]
            vertices.extend(frontier)
        self.vertices = vertices
        self.index = {p: i for i, p in enumerate(vertices)}
        rows, cols, weights = [], [], []
        for i, p in enumerate(vertices):
            if p.length:
                j = self.index[p.parent]
                w = F(p.length)
                rows += [i, j]
                cols += [j, i]
                weights += [w, w]
        n = len(vertices)
        self.adjacency = csr_matrix((np.array(weights), (rows, cols)), shape=(n, n))

    def distances_from(self, u: ReducedWord) -> np.ndarray:
        return dijkstra(self.adjacency, directed=False, indices=self.index[u])

    def distance(self, u: ReducedWord, v: ReducedWord) -> float:
        return float(self.distances_from(u)[self.index[v]])

    def edges(self) -> Iterable[tuple[ReducedWord, ReducedWord, float]]:
        coo = self.adjacency.tocoo()
        for i, j, w in zip(coo.row, coo.col, coo.data):
            if i < j:
                yield self.vertices[i], self.vertices[j], float(w)
