"""Potential-function spoiler for hypergraph games.

The spoiler's potential is the sum, over winning sets it has not touched,
of 2^-(elements the claimer still lacks).  Each turn it claims the free
element carrying the most potential.  Weights are kept as integers scaled
by 2^S (S = largest set size) so ties are exact; ties go to the smallest
element.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import CapExceeded, PreconditionError
from ..game import Hypergraph, Strategy
from .subgames import Subgame

MAX_SET_SIZE = 40


class SpoilerCore:
    """Incremental potential bookkeeping over ``members`` (sets x S, padded with -1)."""

    def __init__(self, n_elements: int, members: np.ndarray):
        members = np.asarray(members, dtype=np.int64)
        if members.ndim != 2:
            members = members.reshape(len(members), -1)
        self.n_elements = n_elements
        self.members = members
        self.n_sets, self.width = members.shape
        if self.width > MAX_SET_SIZE:
            raise CapExceeded(f"winning sets of size {self.width} exceed {MAX_SET_SIZE}")
        self.sizes = (members >= 0).sum(axis=1)
        self.remaining = self.sizes.copy()
        self.alive = np.ones(self.n_sets, dtype=bool)
        self.weight = np.left_shift(np.int64(1), (self.width - self.sizes)).astype(np.int64)
        flat = members.ravel()
        valid = flat >= 0
        set_ids = np.repeat(np.arange(self.n_sets), self.width)[valid]
        elems = flat[valid]
        order = np.argsort(elems, kind="stable")
        self._inv_sets = set_ids[order]
        self._inv_start = np.searchsorted(elems[order], np.arange(n_elements + 1))
        self.score = np.zeros(n_elements, dtype=np.int64)
        np.add.at(self.score, elems, self.weight[set_ids])
        self.free = np.ones(n_elements, dtype=bool)

    def sets_with(self, x: int) -> np.ndarray:
        return self._inv_sets[self._inv_start[x]:self._inv_start[x + 1]]

    def _spread(self, sets: np.ndarray, amounts: np.ndarray) -> None:
        rows = self.members[sets]
        mask = rows >= 0
        np.add.at(self.score, rows[mask], np.broadcast_to(amounts[:, None], rows.shape)[mask])

    def claimer_took(self, x: int) -> None:
        self.free[x] = False
        sets = self.sets_with(x)
        sets = sets[self.alive[sets]]
        if len(sets):
            old = self.weight[sets].copy()
            self.remaining[sets] -= 1
            self.weight[sets] = old * 2
            self._spread(sets, old)

    def spoiler_took(self, x: int) -> None:
        self.free[x] = False
        sets = self.sets_with(x)
        sets = sets[self.alive[sets]]
        if len(sets):
            self._spread(sets, -self.weight[sets])
            self.alive[sets] = False
            self.weight[sets] = 0

    def best(self) -> int | None:
        if not self.free.any():
            return None
        masked = np.where(self.free, self.score, -1)
        return int(np.argmax(masked))

    def claimer_completed(self) -> bool:
        return bool(np.any(self.alive & (self.remaining == 0)))

    def potential_scaled(self) -> int:
        return int(self.weight[self.alive].sum())


def selfridge_sum(sizes) -> Fraction:
    return sum((Fraction(1, 2 ** int(s)) for s in sizes), Fraction(0))


def criterion_holds(sizes) -> bool:
    """Exact test of sum 2^-|A| < 1/2."""
    sizes = np.asarray(list(sizes), dtype=np.int64)
    if len(sizes) == 0:
        return True
    top = int(sizes.max())
    counts = np.bincount(top - sizes)
    total = sum(int(c) << i for i, c in enumerate(counts))
    return 2 * total < (1 << top)


def _pad(sets_as_indices) -> np.ndarray:
    width = max((len(a) for a in sets_as_indices), default=0)
    out = np.full((len(sets_as_indices), max(width, 1)), -1, dtype=np.int64)
    for i, a in enumerate(sets_as_indices):
        out[i, : len(a)] = sorted(a)
    return out


class ErdosSelfridgeSpoiler(Strategy):
    """Spoiler for an explicit hypergraph; refuses to be built when the
    potential criterion fails unless ``force`` is set."""

    name = "erdos_selfridge_spoiler"
    markov = True

    def __init__(self, hypergraph: Hypergraph, force: bool = False):
        sizes = [len(a) for a in hypergraph.sets]
        self.guaranteed = criterion_holds(sizes)
        if not self.guaranteed and not force:
            raise PreconditionError(
                f"sum of 2^-|A| is {float(selfridge_sum(sizes)):.4f}, not below 1/2"
            )
        self.h = hypergraph
        self.index = {x: i for i, x in enumerate(hypergraph.universe)}
        self.core = SpoilerCore(
            len(hypergraph.universe), _pad([[self.index[x] for x in a] for a in hypergraph.sets])
        )

    def observe(self, role, elem, state):
        i = self.index.get(elem)
        if i is None:
            return
        if role is self.role:
            self.core.spoiler_took(i)
        else:
            self.core.claimer_took(i)

    def choose(self, state):
        i = self.core.best()
        if i is not None:
            return self.h.universe[i]
        return state.free_sorted()[0]

    def report(self):
        return {"guaranteed": self.guaranteed, "sets": len(self.h.sets)}


class SpoilerSubgame(Subgame):
    """Maker as spoiler of a set family on its own sub-board (the dual game)."""

    label = "spoiler"
    markov = True

    def __init__(self, elements, members: np.ndarray, labels=None):
        super().__init__(elements)
        self.index = {e: i for i, e in enumerate(self.order)}
        self.core = SpoilerCore(len(self.order), members)
        self.guaranteed = criterion_holds(self.core.sizes)
        self.labels = labels

    def on_claim(self, by_maker, elem):
        i = self.index[elem]
        if by_maker:
            self.core.spoiler_took(i)
        else:
            self.core.claimer_took(i)

    def respond(self, trigger):
        i = self.core.best()
        return None if i is None else self.order[i]

    def goal_met(self) -> bool:
        # only final once the sub-board is exhausted
        return not self.free and not self.core.claimer_completed()

    def lost(self) -> bool:
        return self.core.claimer_completed()

    def report(self):
        out = super().report()
        out.update({"sets": int(self.core.n_sets), "guaranteed": self.guaranteed,
                    "claimer_completed": self.lost()})
        return out
