"""Immutable simple graphs on ``0..n-1`` and the exact primitives built on them.

Adjacency is stored as one integer bitmask per vertex, so neighbourhood
unions and intersections cost O(n / word) and the masks feed the search
kernels directly.
"""

from __future__ import annotations

import io
import os
from typing import Iterable, Iterator, Sequence

from . import kernels
from .errors import CapExceeded, InvalidInput

Edge = tuple[int, int]
VertexSet = frozenset

EXACT_CAP = 20
PATH_NODE_CAP = 10**7  # search-tree nodes per path or cycle query


def canonical(u: int, v: int) -> Edge:
    if u == v:
        raise InvalidInput(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


class Graph:
    """Undirected simple graph; edges are canonical ``(u, v)`` with ``u < v``."""

    __slots__ = ("n", "edges", "adj", "_edge_set")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InvalidInput(f"negative vertex count {n}")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInput(f"edge {(u, v)} has an endpoint outside 0..{n - 1}")
            ce = canonical(u, v)
            if ce in seen:
                raise InvalidInput(f"duplicate edge {ce}")
            seen.add(ce)
        self._init(n, seen)

    def _init(self, n: int, edge_set) -> None:
        self.n = n
        self._edge_set = frozenset(edge_set)
        self.edges = tuple(sorted(self._edge_set))
        adj = [0] * n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.adj = tuple(adj)

    @classmethod
    def _trusted(cls, n: int, edge_set) -> "Graph":
        g = cls.__new__(cls)
        g._init(n, edge_set)
        return g

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls._trusted(n, ((u, v) for u in range(n) for v in range(u + 1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls._trusted(n, ())

    # -- basic queries -------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return self._edge_set

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    def neighbors(self, v: int) -> frozenset:
        return vertices_of(self.adj[v])

    def non_edges(self) -> Iterator[Edge]:
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if not (self.adj[u] >> v) & 1:
                    yield (u, v)

    # -- derived graphs --------------------------------------------------
    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Graph":
        new = set(self._edge_set)
        for e in extra:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidInput(f"edge {(u, v)} outside 0..{self.n - 1}")
            new.add(canonical(u, v))
        return Graph._trusted(self.n, new)

    def without_edges(self, removed: Iterable[Sequence[int]]) -> "Graph":
        drop = {canonical(int(e[0]), int(e[1])) for e in removed}
        return Graph._trusted(self.n, self._edge_set - drop)

    def spanning(self, edges: Iterable[Edge]) -> "Graph":
        """Spanning subgraph on the same vertex set with the given edges."""
        return Graph(self.n, edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """``G[S]`` relabelled to ``0..|S|-1`` in increasing order, plus the map back."""
        keep = tuple(sorted(set(vertices)))
        _check_vertices(self, keep)
        local = {v: i for i, v in enumerate(keep)}
        sub = [
            (local[u], local[v])
            for u, v in self.edges
            if u in local and v in local
        ]
        return Graph._trusted(len(keep), sub), keep

    def remove_vertices(self, removed: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        drop = set(removed)
        _check_vertices(self, drop)
        return self.induced(v for v in range(self.n) if v not in drop)

    def complement(self) -> "Graph":
        return Graph._trusted(self.n, self.non_edges())

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    # -- dunder ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self._edge_set == other._edge_set

    def __hash__(self) -> int:
        return hash((self.n, self._edge_set))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_vertices(g: Graph, vertices: Iterable[int]) -> None:
    for v in vertices:
        if not (0 <= v < g.n):
            raise InvalidInput(f"vertex {v} outside 0..{g.n - 1}")


def _as_mask(g: Graph, s: Iterable[int]) -> int:
    s = list(s)
    _check_vertices(g, s)
    return mask_of(s)


def neighborhood(g: Graph, s: Iterable[int]) -> frozenset:
    """External neighbourhood ``N_G(S)``: vertices outside S adjacent to S."""
    sm = _as_mask(g, s)
    nb = 0
    for v in vertices_of(sm):
        nb |= g.adj[v]
    return vertices_of(nb & ~sm)


def neighborhood_size(g: Graph, s_mask: int) -> int:
    nb = 0
    x = s_mask
    while x:
        low = x & -x
        nb |= g.adj[low.bit_length() - 1]
        x ^= low
    return (nb & ~s_mask).bit_count()


def edges_within(g: Graph, u: Iterable[int]) -> int:
    um = _as_mask(g, u)
    return sum((g.adj[v] & um).bit_count() for v in vertices_of(um)) // 2


def edges_between(g: Graph, u: Iterable[int], w: Iterable[int]) -> int:
    um = _as_mask(g, u)
    wm = _as_mask(g, w)
    if um & wm:
        raise InvalidInput("edges_between needs disjoint vertex sets")
    return sum((g.adj[v] & wm).bit_count() for v in vertices_of(um))


def low_degree_set(g: Graph, t: float) -> frozenset:
    """Vertices of degree strictly below ``t``."""
    if t < 0:
        raise InvalidInput("degree threshold must be non-negative")
    return frozenset(v for v, d in enumerate(g.degrees()) if d < t)


def components(g: Graph, within: int | None = None) -> list[frozenset]:
    rest = (1 << g.n) - 1 if within is None else within
    out = []
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            new = 0
            x = frontier
            while x:
                b = x & -x
                new |= g.adj[b.bit_length() - 1]
                x ^= b
            new &= rest & ~comp
            comp |= new
            frontier = new
        out.append(vertices_of(comp))
        rest &= ~comp
    return out


def component_stats(g: Graph) -> tuple[int, int, list[frozenset]]:
    """``(c(G), o(G), components)``; components ordered by smallest vertex."""
    comps = components(g)
    return len(comps), sum(1 for c in comps if len(c) % 2), comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(components(g)) == 1


def _require_cap(g: Graph, exact_cap: int | None, what: str) -> None:
    cap = EXACT_CAP if exact_cap is None else exact_cap
    if g.n > cap:
        raise CapExceeded(f"{what} on n={g.n} exceeds EXACT_CAP={cap}")


def _budgeted(result, what: str, node_cap: int):
    status, value = result
    if status == 2:
        raise CapExceeded(f"{what} search exceeded {node_cap} nodes")
    return value


def longest_path(g: Graph, exact_cap: int | None = None, node_cap: int = PATH_NODE_CAP) -> list[int]:
    """Vertex sequence of a longest path (max over components)."""
    _require_cap(g, exact_cap, "longest path")
    return _budgeted(kernels.longest_path(list(g.adj), g.n, node_cap), "longest path", node_cap)


def longest_path_length(g: Graph, exact_cap: int | None = None, node_cap: int = PATH_NODE_CAP) -> int:
    """``l(G)`` in edges; 0 for an edgeless graph."""
    if g.m == 0:
        return 0
    return max(len(longest_path(g, exact_cap, node_cap)) - 1, 0)


def has_path_longer_than(g: Graph, length: int, exact_cap: int | None = None,
                         node_cap: int = PATH_NODE_CAP):
    """A path with more than ``length`` edges, or None."""
    _require_cap(g, exact_cap, "path search")
    return _budgeted(kernels.path_longer_than(list(g.adj), g.n, length, node_cap),
                     "path", node_cap)


def verify_hamilton_cycle(g: Graph, cycle: Sequence[int]) -> bool:
    """Linear-time check that ``cycle`` lists every vertex once along edges of G."""
    if g.n < 3 or len(cycle) != g.n or len(set(cycle)) != g.n:
        return False
    if any(not (0 <= v < g.n) for v in cycle):
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n))


def hamilton_cycle(g: Graph, exact_cap: int | None = None,
                   node_cap: int = PATH_NODE_CAP) -> list[int] | None:
    """A Hamilton cycle (vertex order from 0) or None.  Needs n >= 3."""
    _require_cap(g, exact_cap, "Hamiltonicity")
    return _budgeted(kernels.hamilton_cycle(list(g.adj), g.n, node_cap), "Hamilton cycle", node_cap)


def is_hamiltonian(
    g: Graph, certificate: Sequence[int] | None = None, exact_cap: int | None = None
) -> bool:
    """Exact Hamiltonicity.

    A valid ``certificate`` is accepted at any n.  Without one, n must be at
    most the exact cap; an invalid certificate above the cap is an error
    rather than a silent "no".
    """
    if certificate is not None:
        if verify_hamilton_cycle(g, certificate):
            return True
        cap = EXACT_CAP if exact_cap is None else exact_cap
        if g.n > cap:
            raise InvalidInput("supplied certificate is not a Hamilton cycle")
    return hamilton_cycle(g, exact_cap) is not None


# -- edge-list files ------------------------------------------------------

def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> Graph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise InvalidInput("edge list must start with 'n m'")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
    except ValueError as exc:
        raise InvalidInput(f"malformed edge list: {exc}") from None
    if len(edges) != m:
        raise InvalidInput(f"header promises {m} edges, found {len(edges)}")
    for u, v in edges:
        if u >= v:
            raise InvalidInput(f"edge line '{u} {v}' must have u < v")
    if edges != sorted(edges):
        raise InvalidInput("edge lines must be sorted lexicographically")
    return Graph(n, edges)


def write_edge_list(g: Graph, dest) -> None:
    text = format_edge_list(g)
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w") as fh:
            fh.write(text)
    else:
        dest.write(text)


def read_edge_list(src) -> Graph:
    if isinstance(src, (str, os.PathLike)):
        with open(src) as fh:
            return parse_edge_list(fh.read())
    if isinstance(src, io.TextIOBase) or hasattr(src, "read"):
        return parse_edge_list(src.read())
    raise InvalidInput(f"cannot read edge list from {src!r}")


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)
