"""Pairing strategies for minimum-degree goals.

``PairingPlan`` orients a graph so that every vertex owns about half of its
edges: odd-degree vertices are joined to one auxiliary vertex, every
component of the result is Eulerian, and each vertex's pool is the set of
its out-edges that belong to the original graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PreconditionError
from ..graph import Graph
from .subgames import Subgame, SubgameStrategy


def euler_orientation(n_vertices: int, edges: list) -> list[tuple[int, int]]:
    """Orient every edge of a graph with all degrees even along Euler circuits.

    Circuits are traced per connected component (Hierholzer), starting from
    the smallest vertex and always leaving along the smallest unused edge.
    """
    incident = [[] for _ in range(n_vertices)]
    for idx, (u, v) in enumerate(edges):
        incident[u].append((v, idx))
        incident[v].append((u, idx))
    for lst in incident:
        lst.sort(reverse=True)  # pop() yields the smallest neighbour first
    used = [False] * len(edges)
    oriented = []
    for start in range(n_vertices):
        if not incident[start]:
            continue
        stack = [(start, None)]
        while stack:
            v, via = stack[-1]
            while incident[v] and used[incident[v][-1][1]]:
                incident[v].pop()
            if incident[v]:
                w, idx = incident[v].pop()
                used[idx] = True
                stack.append((w, (v, w, idx)))
            else:
                stack.pop()
                if via is not None:
                    oriented.append((via[0], via[1]))
    assert all(used)
    return oriented


@dataclass
class PairingPlan:
    n: int
    pools: list  # pools[v]: sorted list of edges (u < w) owned by v
    orientation: list  # arcs (tail, head), auxiliary vertex included
    aux: int | None  # id of the auxiliary vertex, or None when all degrees are even

    @classmethod
    def build(cls, h: Graph) -> "PairingPlan":
        odd = [v for v in range(h.n) if h.degree(v) % 2]
        edges = list(h.edges)
        aux = None
        if odd:
            aux = h.n
            edges = edges + [(v, aux) for v in odd]
        arcs = euler_orientation(h.n + (1 if aux is not None else 0), edges)
        pools = [[] for _ in range(h.n)]
        for tail, head in arcs:
            if tail == aux or head == aux:
                continue
            pools[tail].append((min(tail, head), max(tail, head)))
        for p in pools:
            p.sort()
        return cls(h.n, pools, arcs, aux)

    def owner_map(self) -> dict:
        return {e: v for v, pool in enumerate(self.pools) for e in pool}


class MinDegreePairing(Subgame):
    """Maker's answer-in-the-pool strategy for reaching minimum degree k.

    When Breaker claims an edge of pool E(v) and Maker has fewer than k
    edges at v, Maker claims the smallest free edge of E(v).  Otherwise Maker
    serves the smallest vertex still short of k that has a free pool edge.
    ``to_global`` maps local vertex ids to board ids.
    """

    label = "pairing"
    markov = True

    def __init__(self, h: Graph, k: int, to_global=None, allow_degenerate: bool = False):
        if k < 0:
            raise PreconditionError("k must be non-negative")
        if h.n and h.min_degree() < 5 * k and not allow_degenerate:
            raise PreconditionError(
                f"pairing needs min degree >= 5k = {5 * k}, graph has {h.min_degree()}"
            )
        self.h = h
        self.k = k
        self.degenerate = bool(h.n) and h.min_degree() < 5 * k
        self.to_global = tuple(range(h.n)) if to_global is None else tuple(to_global)
        g = self.to_global
        self.plan = PairingPlan.build(h)
        self.pools = [[_glob(e, g) for e in pool] for pool in self.plan.pools]
        self.owner = {e: v for v, pool in enumerate(self.pools) for e in pool}
        self.local = {gv: lv for lv, gv in enumerate(g)}
        self.maker_deg = [0] * h.n
        super().__init__([_glob(e, g) for e in h.edges])

    def on_claim(self, by_maker, elem):
        if by_maker:
            self.maker_deg[self.local[elem[0]]] += 1
            self.maker_deg[self.local[elem[1]]] += 1

    def _pool_free(self, v):
        for e in self.pools[v]:
            if e in self.free:
                return e
        return None

    def respond(self, trigger):
        if not self.free:
            return None
        v = self.owner.get(trigger)
        if v is not None and self.maker_deg[v] < self.k:
            e = self._pool_free(v)
            if e is not None:
                return e
        for u in range(self.h.n):
            if self.maker_deg[u] < self.k:
                e = self._pool_free(u)
                if e is not None:
                    return e
        return self.first_free()

    def goal_met(self) -> bool:
        return all(d >= self.k for d in self.maker_deg)

    def report(self):
        out = super().report()
        out.update({"k": self.k, "degenerate": self.degenerate})
        return out


def _glob(e, g):
    a, b = g[e[0]], g[e[1]]
    return (a, b) if a < b else (b, a)


def maker_min_degree_pairing(h: Graph, k: int, allow_degenerate: bool = False):
    return SubgameStrategy(MinDegreePairing(h, k, allow_degenerate=allow_degenerate),
                           "maker_min_degree_pairing")


class SmallDegreePairing(Subgame):
    """Pairing on the edges between low-degree vertices and the rest.

    A Breaker edge at a low-degree vertex v is answered by another free edge
    at v, unless Maker already has ``cap`` edges there (no cap when None).
    ``goal[v]`` is the Maker degree each such vertex should end with.
    """

    label = "small-pairing"
    markov = True

    def __init__(self, elements, small, goal: dict, cap: int | None = None):
        super().__init__(elements)
        self.small = sorted(small)
        self.small_set = frozenset(small)
        self.goal = dict(goal)
        self.cap = cap
        self.at = {v: [] for v in self.small}
        for e in self.order:
            for x in e:
                if x in self.small_set:
                    self.at[x].append(e)
        self.maker_deg = {v: 0 for v in self.small}

    def on_claim(self, by_maker, elem):
        if by_maker:
            for x in elem:
                if x in self.small_set:
                    self.maker_deg[x] += 1

    def _free_at(self, v):
        for e in self.at[v]:
            if e in self.free:
                return e
        return None

    def _short(self, v) -> bool:
        return self.cap is None or self.maker_deg[v] < self.cap

    def respond(self, trigger):
        if not self.free:
            return None
        if trigger is not None:
            for v in trigger:
                if v in self.small_set and self._short(v):
                    e = self._free_at(v)
                    if e is not None:
                        return e
        for v in self.small:
            if self.maker_deg[v] < self.goal[v]:
                e = self._free_at(v)
                if e is not None:
                    return e
        return self.first_free()

    def goal_met(self) -> bool:
        return all(self.maker_deg[v] >= self.goal[v] for v in self.small)

    def report(self):
        out = super().report()
        out.update({"small": self.small, "cap": self.cap})
        return out
