"""Reference players: random, lexicographic and the min-degree attack."""

from __future__ import annotations

from ..game import Strategy
from ..random_process import as_generator


class RandomPlayer(Strategy):
    def __init__(self, seed=0, name: str = "random"):
        self.rng = as_generator(seed)
        self.name = name

    def choose(self, state):
        free = state.free_sorted()
        return free[int(self.rng.integers(len(free)))]


def breaker_random(seed=0) -> Strategy:
    return RandomPlayer(seed, "breaker_random")


def maker_random(seed=0) -> Strategy:
    return RandomPlayer(seed, "maker_random")


class Lexicographic(Strategy):
    markov = True

    def __init__(self, name: str = "lexicographic"):
        self.name = name

    def choose(self, state):
        return state.free_sorted()[0]


def breaker_lexicographic() -> Strategy:
    return Lexicographic("breaker_lexicographic")


class MinDegreeAttack(Strategy):
    """Breaker isolating a vertex of smallest degree.

    The attacked vertex is the one minimising (Maker's degree + free degree),
    i.e. the most Maker could still reach there; ties go to the lowest id.
    Breaker keeps attacking it while it has free edges and nothing strictly
    weaker exists, claiming its free edges in lexicographic order.  A vertex
    of board degree d then ends with at most floor(d/2) Maker edges.
    """

    name = "breaker_min_degree_attack"

    def __init__(self):
        self.focus = None

    def setup(self, state, role):
        super().setup(state, role)
        self.graph_board = state.n is not None and all(
            isinstance(e, tuple) and len(e) == 2 for e in state.board
        )

    def _potentials(self, state):
        n = state.n
        reach = [0] * n
        free_at = [[] for _ in range(n)]
        for u, v in state.free_sorted():
            free_at[u].append((u, v))
            free_at[v].append((u, v))
            reach[u] += 1
            reach[v] += 1
        other = state.claimed_by(self.role.other)
        for u, v in other:
            reach[u] += 1
            reach[v] += 1
        return reach, free_at

    def choose(self, state):
        if not self.graph_board:
            return state.free_sorted()[0]
        reach, free_at = self._potentials(state)
        live = [v for v in range(state.n) if free_at[v]]
        if not live:
            return state.free_sorted()[0]
        weakest = min(reach[v] for v in live)
        f = self.focus
        if f is None or not free_at[f] or reach[f] > weakest:
            f = min(live, key=lambda v: (reach[v], v))
            self.focus = f
        return free_at[f][0]

    def report(self):
        return {"focus": self.focus}


def breaker_min_degree_attack() -> Strategy:
    return MinDegreeAttack()
