"""Maker-Breaker play loop, transcripts and exact game-tree searches.

Breaker always moves first in ``play``.  The searches accept either order.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Hashable, Iterable, Sequence

from .errors import CapExceeded, IllegalMove, InvalidInput
from .graph import Graph

SOLVE_CAP = 16


class Role(str, Enum):
    MAKER = "maker"
    BREAKER = "breaker"

    @property
    def other(self) -> "Role":
        return Role.BREAKER if self is Role.MAKER else Role.MAKER


def _sorted_board(board: Iterable) -> tuple:
    items = list(board)
    try:
        items.sort()
    except TypeError:
        items.sort(key=repr)
    if len(set(items)) != len(items):
        raise InvalidInput("board contains repeated elements")
    return tuple(items)


class GameState:
    """Board split into Maker's, Breaker's and free elements, plus the move history.

    ``n`` is set for graph boards; Maker's graph then spans ``0..n-1``.
    """

    def __init__(self, board: Iterable, n: int | None = None, first: Role = Role.BREAKER):
        self.board = _sorted_board(board)
        self.board_set = frozenset(self.board)
        self.n = n
        self.first = first
        self.maker: set = set()
        self.breaker: set = set()
        self.history: list[tuple[Role, Hashable]] = []
        self._free = set(self.board)

    @property
    def free(self) -> frozenset:
        return frozenset(self._free)

    def is_free(self, elem) -> bool:
        return elem in self._free

    def free_sorted(self) -> list:
        return [e for e in self.board if e in self._free]

    @property
    def to_move(self) -> Role:
        return self.first if len(self.history) % 2 == 0 else self.first.other

    @property
    def last(self):
        return self.history[-1] if self.history else None

    def claimed_by(self, role: Role) -> set:
        return self.maker if role is Role.MAKER else self.breaker

    def apply(self, role: Role, elem, offender: str | None = None) -> None:
        if role is not self.to_move:
            raise IllegalMove(offender or role.value, elem, f"it is {self.to_move.value}'s turn")
        if elem not in self._free:
            reason = "not on the board" if elem not in self.board_set else "already claimed"
            raise IllegalMove(offender or role.value, elem, reason)
        self._free.discard(elem)
        self.claimed_by(role).add(elem)
        self.history.append((role, elem))
        self._assert_invariants()

    def _assert_invariants(self) -> None:
        assert not (self.maker & self.breaker)
        assert len(self.maker) + len(self.breaker) + len(self._free) == len(self.board)
        lead = len(self.history) - 2 * len(self.claimed_by(self.first.other))
        assert lead in (0, 1), "alternation broken"

    def maker_graph(self) -> Graph:
        if self.n is None:
            raise InvalidInput("not a graph board")
        return Graph._trusted(self.n, self.maker)

    def breaker_graph(self) -> Graph:
        if self.n is None:
            raise InvalidInput("not a graph board")
        return Graph._trusted(self.n, self.breaker)

    def copy(self) -> "GameState":
        return copy.deepcopy(self)


class Strategy:
    """A player.  The engine calls ``setup`` once, ``observe`` after every
    move by either side (including its own), and ``choose`` on its turns.

    ``markov`` promises that ``choose`` depends only on the claimed sets and
    the opponent's last move, which lets exhaustive searches memoise.
    """

    name = "strategy"
    markov = False

    def setup(self, state: GameState, role: Role) -> None:
        self.role = role

    def observe(self, role: Role, elem, state: GameState) -> None:
        pass

    def choose(self, state: GameState):
        raise NotImplementedError

    def report(self) -> dict:
        return {}


class FirstFree(Strategy):
    """Claims the smallest free element; the simplest legal player."""

    name = "first_free"
    markov = True

    def choose(self, state):
        return state.free_sorted()[0]


@dataclass
class Transcript:
    board: list
    n: int | None
    breaker: str
    maker: str
    moves: list
    maker_claimed: list
    breaker_claimed: list
    stopped: bool
    stop: str | None
    reports: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        # field order is part of the documented schema
        return {
            "schema": "makerbreaker.transcript/1",
            "n": self.n,
            "board": [list(e) if isinstance(e, tuple) else e for e in self.board],
            "breaker": self.breaker,
            "maker": self.maker,
            "moves": [
                {"role": r.value, "element": list(e) if isinstance(e, tuple) else e}
                for r, e in self.moves
            ],
            "maker_graph": [list(e) if isinstance(e, tuple) else e for e in self.maker_claimed],
            "breaker_graph": [list(e) if isinstance(e, tuple) else e for e in self.breaker_claimed],
            "outcome": {
                "moves": len(self.moves),
                "maker_moves": len(self.maker_claimed),
                "breaker_moves": len(self.breaker_claimed),
                "stop": self.stop,
                "stopped": self.stopped,
            },
            "strategies": self.reports,
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, default=_json_default)

    def maker_graph(self) -> Graph:
        if self.n is None:
            raise InvalidInput("not a graph board")
        return Graph._trusted(self.n, self.maker_claimed)

    def replay(self) -> GameState:
        state = GameState(self.board, self.n)
        for role, elem in self.moves:
            state.apply(role, elem)
        return state


def _json_default(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, Enum):
        return obj.value
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def transcript_from_dict(data: dict) -> Transcript:
    def elem(x):
        return tuple(x) if isinstance(x, list) else x

    return Transcript(
        board=[elem(e) for e in data["board"]],
        n=data["n"],
        breaker=data["breaker"],
        maker=data["maker"],
        moves=[(Role(m["role"]), elem(m["element"])) for m in data["moves"]],
        maker_claimed=[elem(e) for e in data["maker_graph"]],
        breaker_claimed=[elem(e) for e in data["breaker_graph"]],
        stopped=data["outcome"]["stopped"],
        stop=data["outcome"]["stop"],
        reports=data.get("strategies", {}),
    )


def play(
    board: Iterable,
    breaker: Strategy,
    maker: Strategy,
    stop: Callable[[Graph], bool] | None = None,
    n: int | None = None,
    stop_name: str | None = None,
) -> Transcript:
    """Alternate moves, Breaker first, until the board is exhausted or
    ``stop`` holds for Maker's graph (checked after Maker's moves only).

    ``board`` may be a Graph, in which case ``n`` is taken from it.
    """
    if isinstance(board, Graph):
        n = board.n if n is None else n
        board = board.edges
    state = GameState(board, n)
    if not state.board:
        raise InvalidInput("board is empty")
    if stop is not None and n is None:
        raise InvalidInput("a stop condition needs a graph board (n)")
    players = {Role.BREAKER: breaker, Role.MAKER: maker}
    for role, strat in players.items():
        strat.setup(state, role)
    stopped = False
    while state.free:
        role = state.to_move
        strat = players[role]
        elem = strat.choose(state)
        if isinstance(elem, list):
            elem = tuple(elem)
        state.apply(role, elem, offender=f"{role.value} strategy {strat.name}")
        for s in players.values():
            s.observe(role, elem, state)
        if role is Role.MAKER and stop is not None and stop(state.maker_graph()):
            stopped = True
            break
    return Transcript(
        board=list(state.board),
        n=n,
        breaker=breaker.name,
        maker=maker.name,
        moves=list(state.history),
        maker_claimed=sorted(state.maker),
        breaker_claimed=sorted(state.breaker),
        stopped=stopped,
        stop=stop_name or (getattr(stop, "__name__", "custom") if stop else None),
        reports={"breaker": breaker.report(), "maker": maker.report()},
    )


# -- hypergraph games ----------------------------------------------------------

@dataclass(frozen=True)
class Hypergraph:
    universe: tuple
    sets: tuple

    def __init__(self, universe: Iterable, sets: Iterable[Iterable]):
        uni = _sorted_board(universe)
        fam = tuple(frozenset(a) for a in sets)
        uset = set(uni)
        for a in fam:
            if not a <= uset:
                raise InvalidInput("winning set outside the universe")
        object.__setattr__(self, "universe", uni)
        object.__setattr__(self, "sets", fam)

    def potential(self) -> float:
        return sum(2.0 ** -len(a) for a in self.sets)

    def masks(self) -> tuple[dict, list[int]]:
        index = {x: i for i, x in enumerate(self.universe)}
        return index, [sum(1 << index[x] for x in a) for a in self.sets]


def exhaustive_solve(h: Hypergraph, first_mover: Role) -> Role:
    """Winner under optimal play; Maker wins iff Maker can fully claim a winning set."""
    m = len(h.universe)
    if m > SOLVE_CAP:
        raise CapExceeded(f"universe of {m} elements exceeds SOLVE_CAP={SOLVE_CAP}")
    _, sets = h.masks()
    sets = sorted(set(sets))
    if 0 in sets:
        return Role.MAKER  # the empty set is already claimed
    if not sets:
        return Role.BREAKER

    @lru_cache(maxsize=None)
    def maker_wins(maker: int, breaker: int, maker_to_move: bool) -> bool:
        alive = [a for a in sets if not a & breaker]
        if not alive:
            return False
        if any(a & ~maker == 0 for a in alive):
            return True
        # only free elements of live sets matter; other moves are dominated
        relevant = 0
        for a in alive:
            relevant |= a
        relevant &= ~(maker | breaker)
        x = relevant
        while x:
            low = x & -x
            x ^= low
            if maker_to_move:
                if maker_wins(maker | low, breaker, False):
                    return True
            elif not maker_wins(maker, breaker | low, True):
                return False
        return not maker_to_move

    return Role.MAKER if maker_wins(0, 0, first_mover is Role.MAKER) else Role.BREAKER


def minimal_winning_sets(g: Graph, prop: Callable[[Graph], bool]) -> list[frozenset]:
    """Inclusion-minimal edge sets of G whose spanning subgraph has ``prop``."""
    m = g.m
    if m > SOLVE_CAP:
        raise CapExceeded(f"board of {m} edges exceeds SOLVE_CAP={SOLVE_CAP}")
    edges = g.edges
    found: list[int] = []
    for size in range(m + 1):
        for mask in _masks_of_size(m, size):
            if any(w & mask == w for w in found):
                continue
            chosen = [edges[i] for i in range(m) if (mask >> i) & 1]
            if prop(Graph._trusted(g.n, chosen)):
                found.append(mask)
    return [frozenset(edges[i] for i in range(m) if (w >> i) & 1) for w in found]


def _masks_of_size(m: int, k: int):
    if k == 0:
        yield 0
        return
    x = (1 << k) - 1
    while x < 1 << m:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def graph_game_winner(g: Graph, prop: Callable[[Graph], bool]) -> Role:
    """Exact winner of the Breaker-first game on E(G) for a monotone property."""
    wins = minimal_winning_sets(g, prop)
    return exhaustive_solve(Hypergraph(g.edges, wins), Role.BREAKER)


# -- verifying a fixed strategy against every opponent ----------------------------

@dataclass
class SearchResult:
    holds: bool
    counterexample: list | None
    nodes: int


def adversarial_search(
    board: Sequence,
    strategy: Strategy,
    role: Role,
    verdict: Callable[[GameState], bool | None],
    first_mover: Role = Role.BREAKER,
    n: int | None = None,
) -> SearchResult:
    """Play ``strategy`` against every possible opponent move sequence.

    ``verdict(state)`` is consulted after every move and returns True
    (strategy has succeeded), False (it has failed) or None (play on).  A
    full board with no verdict counts as failure.  Strategies marked
    ``markov`` are memoised on (claims, last move).
    """
    root = GameState(board, n, first=first_mover)
    strategy.setup(root, role)
    memo: dict = {}
    nodes = 0

    def key(state):
        return (frozenset(state.maker), frozenset(state.breaker), state.last)

    def search(state: GameState, strat: Strategy) -> list | None:
        nonlocal nodes
        nodes += 1
        v = verdict(state)
        if v is True:
            return None
        if v is False or not state.free:
            return list(state.history)
        k = key(state) if strategy.markov else None
        if k is not None and k in memo:
            return memo[k]
        if state.to_move is role:
            elem = strat.choose(state)
            if isinstance(elem, list):
                elem = tuple(elem)
            child = state.copy()
            child.apply(role, elem, offender=f"{role.value} strategy {strat.name}")
            s2 = copy.deepcopy(strat)
            s2.observe(role, elem, child)
            out = search(child, s2)
        else:
            out = None
            for elem in state.free_sorted():
                child = state.copy()
                child.apply(role.other, elem)
                s2 = copy.deepcopy(strat)
                s2.observe(role.other, elem, child)
                out = search(child, s2)
                if out is not None:
                    break
        if k is not None:
            memo[k] = out
        return out

    bad = search(root, strategy)
    return SearchResult(bad is None, bad, nodes)
