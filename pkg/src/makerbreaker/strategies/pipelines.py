"""Maker strategies for k-connectivity, perfect matching and Hamiltonicity
on a board graph G taken at the relevant minimum-degree hitting time.

All three share one layout: the low-degree set SMALL is split off, Maker
plays the expander game on the graph induced by the other vertices and a
pairing game on the edges leaving SMALL.  The asymptotic parameter choices
are defaults that can be overridden; at desk scale some of them leave their
valid range and the pipeline records which fallback it used.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from ..errors import CapExceeded, InvalidInput, PreconditionError, SplitFailed, ThinningFailed
from ..game import Strategy
from ..graph import (
    Graph,
    hamilton_cycle,
    longest_path_length,
    low_degree_set,
)
from ..verifiers import (
    as_fraction,
    has_perfect_matching,
    is_booster,
    is_rc_expander,
    no_common_neighbours,
)
from .expander import L_CAP, ExpanderSubgame, default_eps, largest_r_within
from .pairing import MinDegreePairing, SmallDegreePairing, _glob
from .split import ThinTargets, thin_subgraph
from .subgames import ParallelMaker

CONSTRUCTION_ERRORS = (SplitFailed, ThinningFailed, PreconditionError, CapExceeded, InvalidInput)


@dataclass
class PipelineConfig:
    small_t: float | None = None  # default ln^0.9 n
    eps: float | None = None  # default ln^-0.03 n when valid, else mid-window
    gamma: float | None = None  # thinning keep-probability, default ln^-0.03 n
    r: int | None = None  # default n'/ln^0.4 n', clamped to n'/(c+2) and L_CAP
    max_retries: int = 50
    require_q2: bool = False
    q2_K: float = 3
    l_cap: int = L_CAP
    exact_cap: int | None = None
    thin_edge_budget: int | None = None  # default 2 n' ln^0.97 n'
    thin_q1: bool = False
    thin_q2: bool = False
    phase1_target: str = "subgoals"  # or "expansion": stop once Maker's graph is an (n/5, 2)-expander
    seed: int = 0

    @classmethod
    def from_dict(cls, data: dict | None) -> "PipelineConfig":
        data = dict(data or {})
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InvalidInput(f"unknown pipeline options {sorted(unknown)}")
        return cls(**data)

    def as_dict(self) -> dict:
        return asdict(self)


def small_threshold(n: int) -> float:
    return math.log(n) ** 0.9


def thinning_gamma(n: int) -> float:
    return math.log(n) ** -0.03


def default_r(n_prime: int, c, cap: int = L_CAP) -> tuple[int, str]:
    c = as_fraction(c)
    asymptotic = int(n_prime / math.log(n_prime) ** 0.4) if n_prime > 2 else 1
    limit = math.floor(Fraction(n_prime) / (c + 2))
    r = max(1, min(asymptotic, limit))
    r2 = largest_r_within(n_prime, r, cap)
    source = "formula" if r2 == asymptotic else "clamped"
    return r2, source


class _ExpanderPlusSmall(ParallelMaker):
    """Shared construction: F1 = expander game on ``core`` (a subgraph of
    G - SMALL), F2 = pairing on edges between SMALL and the rest."""

    def __init__(self, g: Graph, c, R_of, small_goal, small_cap, config: PipelineConfig,
                 thin: bool = False, redirect_when_met: bool = False):
        self.g = g
        self.config = config
        n = g.n
        t = config.small_t if config.small_t is not None else small_threshold(n)
        self.small = sorted(low_degree_set(g, t))
        small_set = set(self.small)
        g_prime, to_global = g.remove_vertices(self.small)
        self.g_prime, self.to_global = g_prime, to_global
        n_prime = g_prime.n
        self.c = as_fraction(c)
        self.R = R_of(n_prime)
        self.info = {"n": n, "small_t": t, "small": self.small, "n_prime": n_prime,
                     "c": float(self.c), "R": float(self.R), "status": "ok"}

        core = g_prime
        if thin:
            gamma = config.gamma if config.gamma is not None else thinning_gamma(n)
            budget = config.thin_edge_budget
            if budget is None and n_prime > 1:
                budget = int(2 * n_prime * math.log(n_prime) ** 0.97)
            self.info["gamma"] = gamma
            try:
                r_t, _ = default_r(n_prime, self.c, config.l_cap) if n_prime >= 4 else (1, "")
                eps_t = float(default_eps(max(g_prime.min_degree(), 2), config.eps or gamma))
                targets = ThinTargets(
                    edge_budget=budget,
                    q1=(eps_t, self.c, r_t) if config.thin_q1 else None,
                    q2=(r_t, n_prime / (r_t * (1 - 2 * eps_t)), n_prime) if config.thin_q2 else None,
                )
                res = thin_subgraph(g_prime, gamma, targets, config.max_retries,
                                    (config.seed, 1))
                core = res.graph
                self.info["thinning"] = {"retries": res.retries, **res.report}
            except CONSTRUCTION_ERRORS as exc:
                self.info["status"] = "thinning-failed"
                self.info["thinning_error"] = str(exc)
        self.core = core

        f1 = None
        if self.info["status"] == "ok":
            try:
                delta = core.min_degree() if core.n else 0
                eps = default_eps(delta, config.eps if config.eps is not None else thinning_gamma(n))
                if config.r is not None:
                    r, r_source = config.r, "config"
                else:
                    r, r_source = default_r(core.n, self.c, config.l_cap)
                self.info.update({"eps": float(eps), "r": r, "r_source": r_source})
                f1 = ExpanderSubgame(core, eps, self.c, r, R=self.R, seed=(config.seed, 2),
                                     to_global=to_global, max_retries=config.max_retries,
                                     require_q2=config.require_q2, q2_K=config.q2_K,
                                     l_cap=config.l_cap)
            except SplitFailed as exc:
                self.info.update(status="split-failed", error=str(exc))
            except CONSTRUCTION_ERRORS as exc:
                self.info.update(status="construction-failed", error=str(exc))
        if f1 is None:
            # still play sensibly: pairing towards degree c on the same graph
            f1 = MinDegreePairing(core, max(1, math.ceil(self.c)), to_global, allow_degenerate=True)
        f1.label = "F1"
        self.f1 = f1

        f2_edges = [e for e in g.edges if (e[0] in small_set) != (e[1] in small_set)]
        goal = {v: small_goal(g.degree(v)) for v in self.small}
        f2 = SmallDegreePairing(f2_edges, self.small, goal, cap=small_cap)
        f2.label = "F2"
        self.f2 = f2
        super().__init__([f1, f2], redirect_when_met=redirect_when_met)

    def maker_core_graph(self, maker_edges) -> Graph:
        local = {gv: lv for lv, gv in enumerate(self.to_global)}
        return Graph._trusted(self.g_prime.n, [
            tuple(sorted((local[a], local[b])))
            for a, b in maker_edges if a in local and b in local
        ])

    def _certify(self, h: Graph, R, c):
        if R < 1:
            return None  # no valid expander parameters on a board this small
        try:
            return is_rc_expander(h, R, c).ok
        except CapExceeded:
            return None

    def report(self):
        out = super().report()
        out.update(self.info)
        out["config"] = self.config.as_dict()
        return out


class KConnMaker(_ExpanderPlusSmall):
    def __init__(self, g: Graph, k: int, config: PipelineConfig | None = None):
        self.k = k
        config = config or PipelineConfig()
        super().__init__(g, k + 2, lambda n1: Fraction(n1, k + 4), lambda d: d // 2, None, config)
        self.name = "maker_kconn"
        self._maker = set()

    def observe(self, role, elem, state):
        super().observe(role, elem, state)
        if role is self.role:
            self._maker.add(elem)

    def report(self):
        out = super().report()
        h1 = self.maker_core_graph(self._maker)
        c, R, k = self.c, self.R, self.k
        cert = self._certify(h1, R, c)
        small_ok = all(self.f2.maker_deg[v] >= k for v in self.small)
        cond = c >= k and R * c >= Fraction(h1.n + k, 2)
        out.update({"k": k, "core_expander": cert, "small_degree_ok": small_ok,
                    "parameter_conditions": bool(cond),
                    "chain": bool(cert) and small_ok and bool(cond)})
        return out


class PerfectMatchingMaker(_ExpanderPlusSmall):
    def __init__(self, g: Graph, config: PipelineConfig | None = None):
        config = config or PipelineConfig()
        super().__init__(g, 8, lambda n1: Fraction(n1, 10), lambda d: d // 2, None, config)
        self.name = "maker_pm"
        self._maker = set()

    def observe(self, role, elem, state):
        super().observe(role, elem, state)
        if role is self.role:
            self._maker.add(elem)

    def report(self):
        out = super().report()
        # cover SMALL by Maker edges with distinct partners T, remove T, certify the rest
        partners = {}
        for v in self.small:
            for e in sorted(self._maker):
                if v in e:
                    w = e[0] if e[1] == v else e[1]
                    if w not in partners.values() and w not in self.small:
                        partners[v] = w
                        break
        covered = len(partners) == len(self.small)
        h1 = self.maker_core_graph(self._maker)
        local = {gv: lv for lv, gv in enumerate(self.to_global)}
        t_local = [local[w] for w in partners.values()]
        spread = no_common_neighbours(h1, t_local)
        cert = self._certify(h1, self.R, 8)
        rest, _ = h1.remove_vertices(t_local)
        cert7 = self._certify(rest, self.R, 7) if cert else None
        R = self.R
        cond = 8 * R <= rest.n < 2 * R * 7 - 8 * 7
        out.update({"small_covered": covered, "partners_spread": spread,
                    "core_expander": cert, "reduced_expander": cert7,
                    "parameter_conditions": bool(cond),
                    "chain": covered and spread and bool(cert) and bool(cert7) and bool(cond)})
        return out


class HamiltonMaker(_ExpanderPlusSmall):
    """Two phases: build an expander plus degree 2 at SMALL, then claim
    boosters until Hamiltonian (or until no free booster is left)."""

    def __init__(self, g: Graph, config: PipelineConfig | None = None):
        config = config or PipelineConfig()
        super().__init__(g, 3, lambda n1: Fraction(9 * n1, 40), lambda d: min(2, d), 2,
                         config, thin=True, redirect_when_met=True)
        self.name = "maker_ham"
        self.exact_cap = config.exact_cap if config.exact_cap is not None else g.n
        self.phase = "expander-building"
        self.maker_edges: set = set()
        self.board_edges = set(g.edges)
        self.t1 = 0
        self.t2 = 0
        self.ell: list[int] = []
        self.cycle = None
        self.outcome = None
        self.phase1_graph = None
        self.phase1_expander = None
        self._consequence_cache = (-1, False)
        if config.phase1_target not in ("subgoals", "expansion"):
            raise InvalidInput(f"unknown phase1_target {config.phase1_target!r}")

    def observe(self, role, elem, state):
        super().observe(role, elem, state)
        if role is self.role:
            self.maker_edges.add(elem)
            if self.phase == "expander-building":
                self.t1 += 1
            elif self.phase == "booster-claiming":
                self.t2 += 1
                h = Graph._trusted(self.g.n, self.maker_edges)
                try:
                    cyc = hamilton_cycle(h, self.exact_cap)
                    # a Hamilton cycle counts as length n, beyond any path
                    self.ell.append(h.n if cyc else longest_path_length(h, self.exact_cap))
                except CapExceeded:
                    self._finish("cap-exceeded")
                    return
                if cyc:
                    self._finish("hamiltonian", cyc)

    def _finish(self, outcome, cycle=None):
        self.phase = "done"
        self.outcome = outcome
        self.cycle = cycle

    def _phase1_over(self, state) -> bool:
        if self.config.phase1_target == "expansion":
            if self.f2.goal_met() and self._consequence_met():
                return True
        elif self.f1.goal_met() and self.f2.goal_met():
            return True
        return not (self.f1.has_free() or self.f2.has_free())

    def _consequence_met(self) -> bool:
        key = len(self.maker_edges)
        if self._consequence_cache[0] != key:
            h = Graph._trusted(self.g.n, self.maker_edges)
            ok = h.min_degree() >= 2 and bool(self._certify(h, Fraction(self.g.n, 5), 2))
            self._consequence_cache = (key, ok)
        return self._consequence_cache[1]

    def _enter_phase2(self):
        self.phase = "booster-claiming"
        h = Graph._trusted(self.g.n, self.maker_edges)
        self.phase1_graph = sorted(self.maker_edges)
        try:
            self.phase1_expander = is_rc_expander(h, Fraction(self.g.n, 5), 2).ok
        except CapExceeded:
            self.phase1_expander = None
        try:
            cyc = hamilton_cycle(h, self.exact_cap)
            if cyc:
                self._finish("hamiltonian", cyc)
            else:
                self.ell.append(longest_path_length(h, self.exact_cap))
        except CapExceeded:
            self._finish("cap-exceeded")

    def choose(self, state):
        if self.phase == "expander-building" and self._phase1_over(state):
            self._enter_phase2()
        if self.phase == "expander-building":
            return super().choose(state)
        if self.phase == "booster-claiming":
            h = Graph._trusted(self.g.n, self.maker_edges)
            ell = self.ell[-1]
            try:
                for e in state.free_sorted():
                    if e in self.board_edges and is_booster(h, e, ell, self.exact_cap):
                        return e
                self._finish("stall")
            except CapExceeded:
                self._finish("cap-exceeded")
        return state.free_sorted()[0]

    def report(self):
        out = super().report()
        if self.outcome is None:
            outcome = "exhausted"
        else:
            outcome = self.outcome
        if self.info["status"] != "ok" and outcome != "hamiltonian":
            outcome = self.info["status"]
        out.update({
            "phase": self.phase, "outcome": outcome, "t1": self.t1, "t2": self.t2,
            "ell": list(self.ell), "cycle": self.cycle,
            "phase1_graph": self.phase1_graph, "phase1_expander": self.phase1_expander,
        })
        return out


def maker_kconn(g: Graph, k: int, config=None) -> Strategy:
    return KConnMaker(g, k, config if isinstance(config, PipelineConfig) else PipelineConfig.from_dict(config))


def maker_pm(g: Graph, config=None) -> Strategy:
    return PerfectMatchingMaker(g, config if isinstance(config, PipelineConfig) else PipelineConfig.from_dict(config))


def maker_ham(g: Graph, config=None) -> Strategy:
    return HamiltonMaker(g, config if isinstance(config, PipelineConfig) else PipelineConfig.from_dict(config))
