"""Random graph models, the random graph process and hitting times.

Randomness: every sampler takes a ``seed`` that is either a numpy
``Generator``, an integer, or a ``(master, index)`` pair.  Per-trial streams
are ``stream(master, index)``: a PCG64 generator seeded by
``SeedSequence(master, spawn_key=(index,))``.  That derivation is fixed and
platform independent, which is what makes report rows replayable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import InvalidInput, NoHittingTime
from .graph import Graph, canonical, pair_count

RNG_NAME = "numpy.PCG64+SeedSequence(master, spawn_key=(index,))"


def stream(master: int, index: int) -> np.random.Generator:
    if master < 0 or index < 0:
        raise InvalidInput("seeds and trial indices must be non-negative")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master, spawn_key=(index,))))


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, tuple):
        return stream(int(seed[0]), int(seed[1]))
    if isinstance(seed, (int, np.integer)):
        return stream(int(seed), 0)
    raise InvalidInput(f"unsupported seed {seed!r}")


def pair_arrays(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Endpoints of all pairs in lexicographic order; pair index i is ``(u[i], v[i])``."""
    return np.triu_indices(n, 1)


def pair_index(n: int, u: int, v: int) -> int:
    u, v = canonical(u, v)
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


@dataclass(frozen=True, eq=False)
class PairOrdering:
    """A permutation of the pairs of ``0..n-1``; ``order[t-1]`` is added at step t."""

    n: int
    order: np.ndarray

    def __post_init__(self):
        order = np.asarray(self.order, dtype=np.int64)
        total = pair_count(self.n)
        if order.shape != (total,) or not np.array_equal(np.sort(order), np.arange(total)):
            raise InvalidInput("order must be a permutation of all pair indices")
        order.setflags(write=False)
        object.__setattr__(self, "order", order)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable) -> "PairOrdering":
        return cls(n, np.array([pair_index(n, int(a), int(b)) for a, b in pairs], dtype=np.int64))

    def __len__(self) -> int:
        return len(self.order)

    def pairs(self, t: int | None = None) -> list[tuple[int, int]]:
        us, vs = pair_arrays(self.n)
        idx = self.order if t is None else self.order[:t]
        return list(zip(us[idx].tolist(), vs[idx].tolist()))

    def positions(self) -> np.ndarray:
        """``positions()[i]`` is the step at which pair index i arrives (1-based)."""
        pos = np.empty(len(self.order), dtype=np.int64)
        pos[self.order] = np.arange(1, len(self.order) + 1)
        return pos

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PairOrdering)
            and self.n == other.n
            and np.array_equal(self.order, other.order)
        )

    def __hash__(self):
        return hash((self.n, self.order.tobytes()))


def sample_process(n: int, seed) -> PairOrdering:
    if n < 2:
        raise InvalidInput("the graph process needs n >= 2")
    rng = as_generator(seed)
    return PairOrdering(n, rng.permutation(pair_count(n)))


def prefix_graph(pi: PairOrdering, t: int) -> Graph:
    if not (0 <= t <= len(pi)):
        raise InvalidInput(f"step {t} outside 0..{len(pi)}")
    return Graph._trusted(pi.n, pi.pairs(t))


def hitting_time(pi: PairOrdering, prop: Callable[[Graph], bool], monotone: bool = True) -> int:
    """``min{t : prop(G_t)}``.

    Binary search when ``monotone`` (valid for increasing properties),
    otherwise a linear scan from t = 0.  The predicate always sees the full
    prefix graph.
    """
    total = len(pi)
    if not prop(prefix_graph(pi, total)):
        raise NoHittingTime("property fails on the complete graph")
    if monotone:
        lo, hi = 0, total
        while lo < hi:
            mid = (lo + hi) // 2
            if prop(prefix_graph(pi, mid)):
                hi = mid
            else:
                lo = mid + 1
        return lo
    for t in range(total + 1):
        if prop(prefix_graph(pi, t)):
            return t
    raise NoHittingTime("property never holds")  # pragma: no cover


def min_degree_at_least(k: int) -> Callable[[Graph], bool]:
    def prop(g: Graph) -> bool:
        return g.min_degree() >= k

    prop.__name__ = f"mindeg_{k}"
    return prop


def min_degree_hitting_time(pi: PairOrdering, k: int) -> int:
    """Fast path for ``hitting_time(pi, min_degree_at_least(k))``.

    Each vertex reaches degree k when its k-th incident pair arrives; the
    hitting time is the latest of those arrivals.
    """
    n = pi.n
    if not (0 <= k <= n - 1):
        raise NoHittingTime(f"min degree {k} is impossible on {n} vertices")
    if k == 0:
        return 0
    us, vs = pair_arrays(n)
    pos = pi.positions()
    table = np.full((n, n), np.iinfo(np.int64).max, dtype=np.int64)
    table[us, vs] = pos
    table[vs, us] = pos
    kth = np.partition(table, k - 1, axis=1)[:, k - 1]
    return int(kth.max())


@dataclass(frozen=True)
class Thresholds:
    n: int
    k: int
    m_k: float
    M_k: float

    def strictly_between(self, t: float) -> bool:
        return self.m_k < t < self.M_k


def thresholds(n: int, k: int) -> Thresholds:
    """Edge counts just below and just above the min-degree-k hitting time."""
    if n < 16:
        raise InvalidInput("thresholds need n >= 16 so that ln ln ln n > 0")
    if k < 1:
        raise InvalidInput("k must be at least 1")
    ln = math.log(n)
    lln = math.log(ln)
    llln = math.log(lln)
    scale = pair_count(n) / n
    base = ln + (k - 1) * lln
    return Thresholds(n, k, scale * (base - llln), scale * (base + llln))


def sample_gnm(n: int, M: int, seed) -> Graph:
    total = pair_count(n)
    if not (0 <= M <= total):
        raise InvalidInput(f"M={M} outside 0..{total}")
    rng = as_generator(seed)
    chosen = rng.choice(total, size=M, replace=False)
    us, vs = pair_arrays(n)
    return Graph._trusted(n, zip(us[chosen].tolist(), vs[chosen].tolist()))


def _check_p(p: float) -> None:
    if not (0.0 <= p <= 1.0):
        raise InvalidInput(f"probability {p} outside [0, 1]")


def sample_gnp(n: int, p: float, seed) -> Graph:
    return sample_gnp_minus(n, p, (), seed)


def sample_gnp_minus(n: int, p: float, forbidden: Iterable, seed) -> Graph:
    _check_p(p)
    if n < 0:
        raise InvalidInput("negative vertex count")
    total = pair_count(n)
    mask = np.ones(total, dtype=bool)
    for pair in forbidden:
        try:
            a, b = int(pair[0]), int(pair[1])
        except (TypeError, ValueError, IndexError):
            raise InvalidInput(f"malformed forbidden pair {pair!r}") from None
        if not (0 <= a < n and 0 <= b < n) or a == b:
            raise InvalidInput(f"malformed forbidden pair {pair!r}")
        mask[pair_index(n, a, b)] = False
    rng = as_generator(seed)
    keep = (rng.random(total) < p) & mask
    us, vs = pair_arrays(n)
    return Graph._trusted(n, zip(us[keep].tolist(), vs[keep].tolist()))


def thin_edges(g: Graph, gamma: float, seed) -> Graph:
    """Spanning subgraph keeping each edge independently with probability gamma."""
    _check_p(gamma)
    rng = as_generator(seed)
    keep = rng.random(g.m) < gamma
    return Graph._trusted(g.n, (e for e, k in zip(g.edges, keep) if k))
