"""Sub-board games and the parallel-play composition used by the Maker pipelines.

A sub-board owns a fixed set of board elements and answers Breaker's moves
inside it.  ``ParallelMaker`` routes each Breaker move to the sub-board it
came from and records every response, so the "answer where Breaker played,
with at most one slack move per sub-board" rule can be audited afterwards.
"""

from __future__ import annotations

from ..game import Role, Strategy


class Subgame:
    label = "subgame"

    def __init__(self, elements, label: str | None = None):
        self.elements = frozenset(elements)
        self.order = sorted(self.elements)
        self.free = set(self.elements)
        self.mine: set = set()
        self.theirs: set = set()
        if label is not None:
            self.label = label

    def owns(self, elem) -> bool:
        return elem in self.elements

    def observe(self, by_maker: bool, elem) -> None:
        if elem not in self.elements:
            return
        self.free.discard(elem)
        (self.mine if by_maker else self.theirs).add(elem)
        self.on_claim(by_maker, elem)

    def on_claim(self, by_maker: bool, elem) -> None:
        pass

    def has_free(self) -> bool:
        return bool(self.free)

    def first_free(self):
        for e in self.order:
            if e in self.free:
                return e
        return None

    def respond(self, trigger):
        """A free element of this sub-board (``trigger`` is Breaker's move
        here, or None for an unprompted move); None only when it is full."""
        return self.first_free()

    def goal_met(self) -> bool:
        return False

    def report(self) -> dict:
        return {"label": self.label, "size": len(self.elements), "goal_met": self.goal_met()}


class ParallelMaker(Strategy):
    """Maker playing several sub-board games at once.

    A Breaker move inside sub-board i is answered inside i.  When i has no
    free element left the answer goes elsewhere and counts as i's slack
    move.  With ``redirect_when_met`` a sub-board whose goal is reached
    passes its answers on as well.  Breaker moves outside every sub-board
    are answered by the first sub-board (in priority order) whose goal is
    open, then by any sub-board with free elements.
    """

    name = "parallel_maker"

    def __init__(self, subgames, redirect_when_met: bool = False):
        self.subgames = list(subgames)
        self.redirect_when_met = redirect_when_met
        self.slack = [0] * len(self.subgames)
        self.log: list[dict] = []

    def owner(self, elem):
        for i, sg in enumerate(self.subgames):
            if sg.owns(elem):
                return i
        return None

    def observe(self, role, elem, state):
        for sg in self.subgames:
            sg.observe(role is self.role, elem)

    def _fallback(self, exclude=None):
        for j, sg in enumerate(self.subgames):
            if j != exclude and not sg.goal_met() and sg.has_free():
                return j, sg.respond(None)
        for j, sg in enumerate(self.subgames):
            if j != exclude and sg.has_free():
                return j, sg.respond(None)
        return None, None

    def choose(self, state):
        last = state.last
        trigger = last[1] if last is not None and last[0] is not self.role else None
        i = self.owner(trigger) if trigger is not None else None
        kind = "respond"
        j = elem = None
        if i is not None:
            sg = self.subgames[i]
            if self.redirect_when_met and sg.goal_met():
                kind = "redirect"
            else:
                elem = sg.respond(trigger)
                j = i
                if elem is None:
                    self.slack[i] += 1
                    kind = "slack"
        else:
            kind = "outside" if trigger is not None else "opening"
        if elem is None:
            j, elem = self._fallback()
        if elem is None:
            j, elem, kind = None, state.free_sorted()[0], kind + "-free"
        self.log.append({"trigger": i, "response": j, "kind": kind})
        return elem

    def report(self):
        return {
            "slack": list(self.slack),
            "subgames": [sg.report() for sg in self.subgames],
        }


def parallel_play_violations(log: list[dict], n_subgames: int) -> list[str]:
    """Audit a ParallelMaker log for the answer-in-place rule."""
    problems = []
    slack = [0] * n_subgames
    for step, rec in enumerate(log):
        i, j, kind = rec["trigger"], rec["response"], rec["kind"]
        if kind == "respond" and i != j:
            problems.append(f"move {step}: trigger {i} answered in {j}")
        if kind == "slack":
            slack[i] += 1
            if slack[i] > 1:
                problems.append(f"move {step}: second slack move for sub-board {i}")
    return problems


class SubgameStrategy(Strategy):
    """Plays a single sub-board as a whole-board Maker (or Breaker) strategy."""

    def __init__(self, subgame: Subgame, name: str):
        self.subgame = subgame
        self.name = name
        self.markov = getattr(subgame, "markov", False)

    def observe(self, role, elem, state):
        self.subgame.observe(role is self.role, elem)

    def choose(self, state):
        last = state.last
        trigger = last[1] if last is not None and last[0] is not self.role else None
        elem = self.subgame.respond(trigger if trigger in self.subgame.elements else None)
        return elem if elem is not None else state.free_sorted()[0]

    def report(self):
        return self.subgame.report()
