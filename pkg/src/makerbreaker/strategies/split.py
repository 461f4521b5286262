"""Verify-and-retry random constructions: board splits and thinned subgraphs.

Both only exist with high probability in the asymptotic setting, so each
attempt is checked exactly and the loop stops after ``max_retries``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..errors import CapExceeded, InvalidInput, PreconditionError, SplitFailed, ThinningFailed
from ..graph import Graph
from ..random_process import as_generator, thin_edges
from ..verifiers import as_fraction, check_q1, check_q2


@dataclass
class SplitResult:
    E1: tuple
    E2: tuple
    report: dict
    retries: int


def eps_range(delta: int) -> tuple[Fraction, Fraction]:
    if delta <= 1:
        raise PreconditionError(f"min degree {delta} leaves no valid eps in (1/(2 delta), 1/2)")
    return Fraction(1, 2 * delta), Fraction(1, 2)


def valid_eps(eps, delta: int) -> bool:
    lo, hi = eps_range(delta)
    return lo < as_fraction(eps) < hi


def split_edges(
    g: Graph,
    eps,
    r: int,
    max_retries: int = 50,
    seed=0,
    q2_K=3,
    require_q2: bool = True,
    check_input_q2: bool = False,
) -> SplitResult:
    """Put each edge in E1 with probability 2*eps until
    ``delta(G1) >= eps*delta(G)`` and (optionally) G2 = (V, E2) has Q2 with K = q2_K."""
    delta = g.min_degree()
    lo, hi = eps_range(delta)
    e = as_fraction(eps)
    if not lo < e < hi:
        raise PreconditionError(f"eps={eps} outside ({lo}, {hi}) for min degree {delta}")
    report = {"eps": float(e), "r": r, "delta": delta, "q2_K": float(q2_K),
              "require_q2": require_q2}
    if check_input_q2:
        K_in = Fraction(g.n) / (r * (1 - 2 * e))
        report["input_q2"] = check_q2(g, r, K_in).ok
    rng = as_generator(seed)
    need = e * delta
    for attempt in range(1, max_retries + 1):
        pick = rng.random(g.m) < float(2 * e)
        e1 = tuple(x for x, k in zip(g.edges, pick) if k)
        e2 = tuple(x for x, k in zip(g.edges, pick) if not k)
        g1 = Graph._trusted(g.n, e1)
        if g1.min_degree() < need:
            continue
        if require_q2:
            if not check_q2(Graph._trusted(g.n, e2), r, q2_K).ok:
                continue
            report["q2"] = True
        report["delta_G1"] = g1.min_degree()
        return SplitResult(e1, e2, report, attempt)
    raise SplitFailed(f"no verified split in {max_retries} attempts")


@dataclass
class ThinTargets:
    edge_budget: int | None = None
    q1: tuple | None = None  # (eps, c, r)
    q2: tuple | None = None  # (r, K, n_prime)

    def check(self, g: Graph) -> dict:
        out = {}
        if self.edge_budget is not None:
            out["edge_budget"] = g.m <= self.edge_budget
        if self.q1 is not None:
            out["q1"] = check_q1(g, *self.q1).ok
        if self.q2 is not None:
            out["q2"] = check_q2(g, *self.q2).ok
        return out


@dataclass
class ThinResult:
    graph: Graph
    report: dict = field(default_factory=dict)
    retries: int = 0


def thin_subgraph(g: Graph, gamma, targets: ThinTargets, max_retries: int = 50, seed=0) -> ThinResult:
    """Thin G with keep-probability gamma until every target verifies."""
    gamma = float(gamma)
    if not 0 < gamma <= 1:
        raise InvalidInput("gamma must lie in (0, 1]")
    rng = as_generator(seed)
    for attempt in range(1, max_retries + 1):
        h = thin_edges(g, gamma, rng)
        status = targets.check(h)
        if all(status.values()):
            return ThinResult(h, {"gamma": gamma, **status}, attempt)
    raise ThinningFailed(f"no thinned subgraph met the targets in {max_retries} attempts")
