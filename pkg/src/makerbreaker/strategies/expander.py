"""Maker's expander game: a verified split of the board, a pairing game on
one part for minimum degree and the dual spoiler game on the other part
against every dense bipartite pair of r-sets."""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..errors import CapExceeded, InvalidInput
from ..graph import Graph
from ..verifiers import as_fraction, check_q1, is_rc_expander
from .pairing import MinDegreePairing, _glob
from .spoiler import SpoilerSubgame
from .split import eps_range, split_edges
from .subgames import Subgame, SubgameStrategy

L_CAP = 10**6


def family_size(n: int, r: int) -> int:
    """Number of unordered pairs of disjoint r-sets."""
    if 2 * r > n:
        return 0
    return math.comb(n, r) * math.comb(n - r, r) // 2


def largest_r_within(n: int, r_max: int, cap: int = L_CAP) -> int:
    r = max(1, r_max)
    while r > 1 and family_size(n, r) > cap:
        r -= 1
    return r


def bipartite_family(n: int, r: int, element_id: np.ndarray) -> np.ndarray:
    """Rows of element ids of the edges between U and W, for every
    unordered pair {U, W} of disjoint r-sets; -1 pads missing edges.
    ``element_id[u, v]`` is the id of edge uv on this sub-board or -1."""
    subsets = np.array(list(combinations(range(n), r)), dtype=np.int64).reshape(-1, r)
    masks = (np.int64(1) << subsets).sum(axis=1) if n < 63 else None
    blocks = []
    for i in range(len(subsets)):
        rest = np.arange(i + 1, len(subsets))
        if masks is not None:
            rest = rest[(masks[rest] & masks[i]) == 0]
        else:
            si = set(subsets[i].tolist())
            rest = np.array([j for j in rest if not si & set(subsets[j].tolist())], dtype=np.int64)
        if not len(rest):
            continue
        rows = element_id[subsets[i][None, :, None], subsets[rest][:, None, :]]
        rows = rows.reshape(len(rest), r * r)
        rows = -np.sort(-rows, axis=1)  # real ids first, -1 padding last
        blocks.append(rows)
    if not blocks:
        return np.full((0, r * r), -1, dtype=np.int64)
    return np.concatenate(blocks)


class ExpanderSubgame(Subgame):
    """Maker's play on a graph G' (local labels ``0..n'-1``, board ids via
    ``to_global``) aiming at an (R, c)-expander.

    The goal is certified only by the independent expansion verifier on
    Maker's graph; the internal bookkeeping never sets it.
    """

    label = "expander"

    def __init__(self, g: Graph, eps, c, r: int, R=None, seed=0, to_global=None,
                 max_retries: int = 50, require_q2: bool = False, q2_K=3,
                 l_cap: int = L_CAP, check_q1_first: bool = True):
        self.g = g
        self.to_global = tuple(range(g.n)) if to_global is None else tuple(to_global)
        self.c = as_fraction(c)
        self.r = r
        n = g.n
        if r < 1 or 2 * r > n:
            raise InvalidInput(f"r={r} needs 1 <= r <= n'/2 (n'={n})")
        self.R = Fraction(n - r) / (self.c + 1) if R is None else as_fraction(R)
        if self.R < 1:
            raise InvalidInput(f"expansion radius R={self.R} is below 1 on n'={n}")
        size = family_size(n, r)
        if size > l_cap:
            raise CapExceeded(f"|L| = {size} exceeds L_CAP={l_cap}")
        self.info = {"n_prime": n, "r": r, "c": float(self.c), "R": float(self.R),
                     "eps": float(as_fraction(eps)), "L": size}
        if check_q1_first:
            try:
                self.info["q1"] = check_q1(g, eps, self.c, r).ok
            except CapExceeded:
                self.info["q1"] = None
        split = split_edges(g, eps, r, max_retries, seed, q2_K=q2_K, require_q2=require_q2)
        self.split = split
        self.info.update({"split_retries": split.retries, "delta_G1": split.report["delta_G1"]})

        g1 = Graph._trusted(n, split.E1)
        k1 = g1.min_degree() // 5
        self.degenerate = k1 < 1
        self.k1 = max(1, k1)
        self.info.update({"k1": self.k1, "degenerate": self.degenerate})
        self.pairing = MinDegreePairing(g1, self.k1, self.to_global, allow_degenerate=True)
        self.pairing.label = "E1"

        e2_global = [_glob(e, self.to_global) for e in split.E2]
        order = sorted(range(len(e2_global)), key=lambda i: e2_global[i])
        element_id = np.full((n, n), -1, dtype=np.int64)
        for rank, i in enumerate(order):
            u, v = split.E2[i]
            element_id[u, v] = element_id[v, u] = rank
        members = bipartite_family(n, r, element_id)
        self.spoiler = SpoilerSubgame(e2_global, members)
        self.spoiler.label = "E2"
        self.info["es_guaranteed"] = self.spoiler.guaranteed

        self.parts = [self.pairing, self.spoiler]
        self.slack = [0, 0]
        self.log: list[dict] = []
        self.local = {gv: lv for lv, gv in enumerate(self.to_global)}
        self._cert_cache = (-1, False)
        super().__init__([_glob(e, self.to_global) for e in g.edges])

    def on_claim(self, by_maker, elem):
        for p in self.parts:
            p.observe(by_maker, elem)

    def respond(self, trigger):
        if not self.free:
            return None
        i = None
        if trigger is not None:
            i = 0 if self.pairing.owns(trigger) else 1
            elem = self.parts[i].respond(trigger)
            if elem is not None:
                self.log.append({"trigger": i, "response": i, "kind": "respond"})
                return elem
            self.slack[i] += 1
            kind = "slack"
        else:
            kind = "opening"
        for j in ([0, 1] if not self.pairing.goal_met() else [1, 0]):
            if j != i and self.parts[j].has_free():
                self.log.append({"trigger": i, "response": j, "kind": kind})
                return self.parts[j].respond(None)
        return None  # pragma: no cover - free is non-empty, so some part has room

    def maker_graph(self) -> Graph:
        return Graph._trusted(self.g.n, [
            tuple(sorted((self.local[a], self.local[b]))) for a, b in self.mine
        ])

    def certified(self) -> bool:
        """Maker's graph on this sub-board verified as an (R, c)-expander."""
        count = len(self.mine)
        if self._cert_cache[0] == count:
            return self._cert_cache[1]
        h = self.maker_graph()
        ok = False
        if h.min_degree() >= self.c:  # a single low-degree vertex already fails
            try:
                ok = is_rc_expander(h, self.R, self.c).ok
            except CapExceeded:
                ok = False
        self._cert_cache = (count, ok)
        return ok

    def goal_met(self) -> bool:
        return self.certified()

    def report(self):
        out = super().report()
        out.update(self.info)
        out.update({
            "pairing_met": self.pairing.goal_met(),
            "spoiler_blocked_all": not self.spoiler.lost(),
            "slack": list(self.slack),
            "certified": self.certified(),
        })
        return out


def default_eps(delta: int, preferred=None) -> Fraction:
    """``preferred`` when it lies in the valid window, else the window's midpoint."""
    lo, hi = eps_range(delta)
    if preferred is not None and lo < as_fraction(preferred) < hi:
        return as_fraction(preferred)
    return (lo + hi) / 2


def maker_expander(g: Graph, eps, c, r: int, seed=0, **kwargs):
    sg = ExpanderSubgame(g, eps, c, r, seed=seed, **kwargs)
    return SubgameStrategy(sg, "maker_expander")
