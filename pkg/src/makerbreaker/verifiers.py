"""Exact decision procedures for target properties and expansion conditions.

Every check here is an exhaustive enumeration or an exact algorithm.  When a
search would exceed its cap the call raises ``CapExceeded``; nothing falls
back to sampling.  Real parameters (c, eps, R) are converted to fractions
from their decimal form so ``|N(U)| >= c|U|`` is compared exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

import networkx as nx

from . import kernels
from .errors import CapExceeded, InvalidInput, MakerBreakerError, PreconditionError
from .graph import (
    Graph,
    component_stats,
    components,
    edges_within,
    has_path_longer_than,
    hamilton_cycle,
    longest_path_length,
    mask_of,
    neighborhood_size,
    vertices_of,
)

ENUM_CAP = 10**7
BERGE_TUTTE_CAP = 14
SEPARATOR_CAP = 12


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidInput(f"non-finite parameter {x}")
        return Fraction(repr(x))
    return Fraction(str(x))


def subsets_up_to(n: int, smax: int) -> int:
    return sum(math.comb(n, i) for i in range(1, min(smax, n) + 1))


def largest_below(x: Fraction) -> int:
    """Largest integer strictly less than x."""
    return math.ceil(x) - 1


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: tuple = ()
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    def as_dict(self) -> dict:
        out = {"result": self.ok}
        if self.witness:
            out["certificate"] = list(self.witness)
        out.update(self.detail)
        return out


# -- simple properties ------------------------------------------------------

def has_min_degree(g: Graph, k: int) -> bool:
    if k < 0:
        raise InvalidInput("k must be non-negative")
    return g.n == 0 or g.min_degree() >= k


def _check_k(g: Graph, k: int) -> None:
    if not (1 <= k <= g.n - 1):
        raise InvalidInput(f"k={k} outside 1..n-1 for n={g.n}")


def _connected_without(g: Graph, removed_mask: int) -> bool:
    rest = ((1 << g.n) - 1) & ~removed_mask
    return rest == 0 or len(components(g, rest)) == 1


def vertex_separator(g: Graph, k: int) -> tuple | None:
    """A set of fewer than k vertices whose removal disconnects G, or None.

    Exhaustive over all candidate separators; only for small n.
    """
    if g.n > SEPARATOR_CAP:
        raise CapExceeded(f"separator enumeration on n={g.n} exceeds {SEPARATOR_CAP}")
    for size in range(0, k):
        for sep in combinations(range(g.n), size):
            if g.n - size >= 2 and not _connected_without(g, mask_of(sep)):
                return sep
    return None


def edge_cut(g: Graph, k: int) -> tuple | None:
    """A set of fewer than k edges whose removal disconnects G, or None."""
    if g.n > SEPARATOR_CAP or sum(math.comb(g.m, i) for i in range(k)) > ENUM_CAP:
        raise CapExceeded("edge-cut enumeration exceeds its cap")
    for size in range(0, k):
        for cut in combinations(g.edges, size):
            if len(components(g.without_edges(cut))) > 1:
                return cut
    return None


def is_k_vertex_connected(g: Graph, k: int, method: str = "auto") -> bool:
    """k-vertex-connectivity: n > k and no separator of fewer than k vertices.

    ``method`` is "flow" (Menger via max-flow), "separator" (exhaustive,
    n <= 12) or "auto", which runs both when n allows and insists they agree.
    """
    _check_k(g, k)
    flow = separator = None
    if method in ("flow", "auto"):
        flow = nx.node_connectivity(g.to_networkx()) >= k
    if method == "separator" or (method == "auto" and g.n <= SEPARATOR_CAP):
        separator = vertex_separator(g, k) is None
    if method not in ("flow", "separator", "auto"):
        raise InvalidInput(f"unknown method {method!r}")
    if flow is not None and separator is not None and flow != separator:
        raise MakerBreakerError("max-flow and separator enumeration disagree")
    return flow if flow is not None else separator


def is_k_edge_connected(g: Graph, k: int, method: str = "auto") -> bool:
    _check_k(g, k)
    flow = cut = None
    if method in ("flow", "auto"):
        flow = nx.edge_connectivity(g.to_networkx()) >= k
    if method == "cut" or (method == "auto" and g.n <= SEPARATOR_CAP and g.m <= 40):
        cut = edge_cut(g, k) is None
    if method not in ("flow", "cut", "auto"):
        raise InvalidInput(f"unknown method {method!r}")
    if flow is not None and cut is not None and flow != cut:
        raise MakerBreakerError("max-flow and cut enumeration disagree")
    return flow if flow is not None else cut


# -- matchings ----------------------------------------------------------------

def maximum_matching(g: Graph) -> set:
    return {tuple(sorted(e)) for e in nx.max_weight_matching(g.to_networkx(), maxcardinality=True)}


def max_matching_size(g: Graph) -> int:
    return len(maximum_matching(g))


@dataclass(frozen=True)
class DeficiencyCertificate:
    S: frozenset
    value: int


def berge_tutte_value(g: Graph) -> tuple[int, DeficiencyCertificate]:
    """``min_S (n + |S| - o(G - S))``: the number of vertices a maximum matching covers."""
    if g.n > BERGE_TUTTE_CAP:
        raise CapExceeded(f"Berge-Tutte enumeration on n={g.n} exceeds {BERGE_TUTTE_CAP}")
    if g.n == 0:
        return 0, DeficiencyCertificate(frozenset(), 0)
    value, s_mask = kernels.berge_tutte(list(g.adj), g.n)
    return value, DeficiencyCertificate(vertices_of(s_mask), value)


def deficiency_of(g: Graph, s: Iterable[int]) -> int:
    """``n + |S| - o(G - S)`` for one given S, recomputed from components."""
    s = set(s)
    rest, _ = g.remove_vertices(s)
    _, odd, _ = component_stats(rest)
    return g.n + len(s) - odd


def has_perfect_matching(g: Graph) -> bool:
    """Matching of size floor(n/2); odd n therefore means near-perfect."""
    return max_matching_size(g) == g.n // 2


# -- expansion ------------------------------------------------------------------

def _expander_inputs(g: Graph, R, c) -> tuple[int, Fraction]:
    R = as_fraction(R)
    c = as_fraction(c)
    if R < 1 or c <= 0:
        raise InvalidInput(f"expander parameters need R >= 1 and c > 0 (got R={R}, c={c})")
    return min(math.floor(R), g.n), c


def _coneighbourhood_cost(g: Graph, smax: int) -> int:
    return sum(subsets_up_to(g.n - 1 - g.degree(x), smax) for x in range(g.n))


def _first_violation_in_coneighbourhoods(g: Graph, smax: int, c: Fraction, cap: int):
    # A violator U with |U|(c+1) <= n misses some vertex x together with
    # N(U), so U avoids x and all of x's neighbours.  Enumerating U inside
    # each such co-neighbourhood is exhaustive and cheap for dense graphs.
    best = None
    examined = 0
    for x in range(g.n):
        inside = [v for v in range(g.n) if v != x and not g.has_edge(x, v)]
        if not inside:
            continue
        outside = [v for v in range(g.n) if v not in inside]
        order = inside + outside
        pos = {v: i for i, v in enumerate(order)}
        adj = [mask_of(pos[u] for u in vertices_of(g.adj[v])) for v in order]
        status, found, seen = kernels.expansion_violation(
            adj, len(inside), min(smax, len(inside)), c.numerator, c.denominator,
            cap - examined, width=g.n,
        )
        examined += seen
        if status == 2:
            raise CapExceeded("co-neighbourhood enumeration exceeds ENUM_CAP")
        if status == 1:
            u = tuple(sorted(order[i] for i in vertices_of(found)))
            key = (len(u), u)
            if best is None or key < best:
                best = key
    return None if best is None else best[1]


def is_rc_expander(g: Graph, R, c, enum_cap: int = ENUM_CAP) -> CheckResult:
    """Every U with 1 <= |U| <= R has ``|N(U)| >= c|U|``; a witness U on failure.

    Three exact routes, chosen by cost: plain enumeration of all small sets,
    the co-neighbourhood restriction above, or, when even that is too big,
    an enumeration that can still certify a failure but raises if it finds
    nothing within the cap.
    """
    smax, c = _expander_inputs(g, R, c)
    if g.n == 0:
        return CheckResult(True, detail={"mode": "empty"})
    full_cost = subsets_up_to(g.n, smax)
    if full_cost <= enum_cap:
        status, found, _ = kernels.expansion_violation(
            list(g.adj), g.n, smax, c.numerator, c.denominator, enum_cap
        )
        witness = tuple(sorted(vertices_of(found))) if status == 1 else ()
        return CheckResult(status == 0, witness, {"mode": "enumeration"})
    if smax * (c + 1) > g.n:
        u = tuple(range(smax))
        assert neighborhood_size(g, mask_of(u)) < c * smax
        return CheckResult(False, u, {"mode": "counting"})
    if _coneighbourhood_cost(g, smax) <= enum_cap:
        witness = _first_violation_in_coneighbourhoods(g, smax, c, enum_cap)
        return CheckResult(witness is None, witness or (), {"mode": "co-neighbourhood"})
    status, found, _ = kernels.expansion_violation(
        list(g.adj), g.n, smax, c.numerator, c.denominator, enum_cap
    )
    if status == 1:
        return CheckResult(False, tuple(sorted(vertices_of(found))), {"mode": "partial"})
    raise CapExceeded(f"(R={R}, c={c}) expansion check on n={g.n} exceeds ENUM_CAP={enum_cap}")


def largest_expanding_radius(g: Graph, c, limit: int | None = None) -> int:
    """Largest integer R (up to ``limit``) for which G is an (R, c)-expander; 0 if none."""
    best = 0
    top = g.n if limit is None else min(limit, g.n)
    for R in range(1, top + 1):
        if not is_rc_expander(g, R, c):
            break
        best = R
    return best


def _density_check(g: Graph, smax: int, bound: Fraction, what: str) -> tuple[bool, tuple]:
    """All U with 1 <= |U| <= smax satisfy ``e(U) <= bound * |U|``."""
    if smax < 1:
        return True, ()
    if subsets_up_to(g.n, smax) > ENUM_CAP:
        raise CapExceeded(f"{what} enumeration on n={g.n} exceeds ENUM_CAP")
    status, found, _ = kernels.density_violation(
        list(g.adj), g.n, min(smax, g.n), bound.numerator, bound.denominator, ENUM_CAP
    )
    return status == 0, tuple(sorted(vertices_of(found))) if status == 1 else ()


def denser_subset(g: Graph, bound) -> tuple | None:
    """A non-empty U with ``e(U) > bound * |U|``, or None if there is none.

    Exact for every size at once: with bound = p/q, a min s-t cut in the
    network s->v (cap mq), v->t (cap mq + 2p - q d(v)), u<->v (cap q) has
    value ``qmn + 2 min_U (p|U| - q e(U))``.
    """
    b = as_fraction(bound)
    if b < 0:
        raise InvalidInput("bound must be non-negative")
    if g.m == 0:
        return None
    p, q, m = b.numerator, b.denominator, g.m
    net = nx.DiGraph()
    for v in range(g.n):
        net.add_edge("s", v, capacity=m * q)
        net.add_edge(v, "t", capacity=m * q + 2 * p - q * g.degree(v))
    for u, v in g.edges:
        net.add_edge(u, v, capacity=q)
        net.add_edge(v, u, capacity=q)
    value, (side, _) = nx.minimum_cut(net, "s", "t")
    if value >= m * q * g.n:
        return None
    u = tuple(sorted(x for x in side if x != "s"))
    assert q * edges_within(g, u) > p * len(u)
    return u


def min_cross_for(g: Graph, u: Iterable[int], r: int) -> tuple[int, tuple]:
    """``min e(U, W)`` over r-sets W disjoint from the given U, with a minimiser."""
    um = mask_of(u)
    counts = sorted(
        ((g.adj[w] & um).bit_count(), w) for w in range(g.n) if not (um >> w) & 1
    )
    if len(counts) < r:
        raise InvalidInput(f"fewer than {r} vertices outside U")
    chosen = counts[:r]
    return sum(c for c, _ in chosen), tuple(sorted(w for _, w in chosen))


def min_cross_edges(g: Graph, r: int) -> tuple[int, tuple, tuple]:
    """``min e(U, W)`` over disjoint r-sets, with a minimising pair."""
    if r < 1 or 2 * r > g.n:
        raise InvalidInput(f"no disjoint pair of {r}-sets in {g.n} vertices")
    status, value, u, w = kernels.min_cross(list(g.adj), g.n, r, ENUM_CAP)
    if status == 2:
        raise CapExceeded(f"cross-edge enumeration C({g.n},{r}) exceeds ENUM_CAP")
    return value, tuple(sorted(vertices_of(u))), tuple(sorted(vertices_of(w)))


def check_m1_m2(g: Graph, r: int, c) -> CheckResult:
    """Sparse small sets (M1) plus an edge between every pair of disjoint r-sets (M2)."""
    c = as_fraction(c)
    if not isinstance(r, int) or r < 1 or c <= 0:
        raise InvalidInput("need a positive integer r and c > 0")
    if r > Fraction(g.n) / (c + 2):
        raise PreconditionError(f"r={r} exceeds n/(c+2) = {float(Fraction(g.n) / (c + 2)):.3f}")
    smax = largest_below((c + 1) * r)
    bound = Fraction(g.min_degree() if g.n else 0) / (2 * (c + 1))
    m1, w1 = _density_check(g, smax, bound, "M1")
    cross, u, w = min_cross_edges(g, r)
    m2 = cross > 0
    witness = w1 if not m1 else ((u, w) if not m2 else ())
    return CheckResult(m1 and m2, witness, {"m1": m1, "m2": m2, "min_cross": cross})


def check_q1(g: Graph, eps, c, r: int) -> CheckResult:
    """Every U with 1 <= |U| < (c+1)r spans at most ``eps*delta*|U|/(10(c+1))`` edges."""
    eps = as_fraction(eps)
    c = as_fraction(c)
    if r < 1 or c <= 0 or not (0 < eps < 1):
        raise InvalidInput("need r >= 1, c > 0 and 0 < eps < 1")
    smax = largest_below((c + 1) * r)
    bound = eps * (g.min_degree() if g.n else 0) / (10 * (c + 1))
    ok, witness = _density_check(g, smax, bound, "Q1")
    return CheckResult(ok, witness)


def q2_bound(r: int, K, n_prime: int) -> float:
    return float(K) * r * math.log(n_prime / r)


def check_q2(g: Graph, r: int, K, n_prime: int | None = None) -> CheckResult:
    """Every pair of disjoint r-sets has ``e(U, W) >= K r ln(n'/r)``."""
    n_prime = g.n if n_prime is None else n_prime
    if r < 1 or r >= n_prime:
        raise InvalidInput(f"Q2 needs 1 <= r < n' (r={r}, n'={n_prime})")
    if float(K) <= 0:
        raise InvalidInput("K must be positive")
    bound = q2_bound(r, K, n_prime)
    if 2 * r > g.n:
        return CheckResult(True, detail={"bound": bound, "vacuous": True})
    cross, u, w = min_cross_edges(g, r)
    ok = cross >= bound
    return CheckResult(ok, () if ok else (u, w), {"bound": bound, "min_cross": cross})


# -- sets with sparse surroundings -----------------------------------------------

def no_common_neighbours(g: Graph, u: Iterable[int]) -> bool:
    seen = 0
    for v in set(u):
        if g.adj[v] & seen:
            return False
        seen |= g.adj[v]
    return True


def no_short_paths(g: Graph, u: Iterable[int], length: int = 4) -> bool:
    """No path of at most ``length`` edges joins two vertices of U, and no
    cycle of at most ``length`` edges passes through a vertex of U."""
    um = mask_of(u)
    for s in vertices_of(um):
        # paths from s: (end, visited) states, extended edge by edge
        frontier = [(s, 1 << s)]
        for _ in range(length):
            nxt = []
            for v, seen in frontier:
                nb = g.adj[v]
                if v != s and (nb >> s) & 1 and seen.bit_count() >= 3:
                    return False  # closes a cycle through s
                x = nb & ~seen
                while x:
                    low = x & -x
                    w = low.bit_length() - 1
                    x ^= low
                    if (um >> w) & 1:
                        return False
                    nxt.append((w, seen | low))
            frontier = nxt
    return True


# -- boosters ----------------------------------------------------------------------

def is_booster(g: Graph, e, ell: int | None = None, exact_cap: int | None = None) -> bool:
    """Whether non-edge ``e`` makes G Hamiltonian or lengthens its longest path.

    ``ell`` may pass in an already computed longest-path length of G.
    """
    if g.has_edge(*e):
        raise InvalidInput(f"{e} is already an edge")
    if ell is None:
        ell = longest_path_length(g, exact_cap)
    if ell < g.n - 1:
        # any longer path in G + e runs through e; bound its two halves first
        u, v = e
        rest = ((1 << g.n) - 1) & ~(1 << u) & ~(1 << v)
        adj = list(g.adj)
        if kernels.path_bound(adj, g.n, u, rest) + 1 + kernels.path_bound(adj, g.n, v, rest) <= ell:
            return False
        h = g.with_edges([e])
        # a Hamiltonian G + e has a path on all vertices, so this covers both cases
        return has_path_longer_than(h, ell, exact_cap) is not None
    h = g.with_edges([e])
    return hamilton_cycle(h, exact_cap) is not None


def boosters(g: Graph, exact_cap: int | None = None) -> set:
    """Non-edges whose addition makes G Hamiltonian or lengthens its longest path."""
    non_edges = list(g.non_edges())
    if hamilton_cycle(g, exact_cap) is not None:
        return set(non_edges)
    ell = longest_path_length(g, exact_cap)
    return {e for e in non_edges if is_booster(g, e, ell, exact_cap)}


# -- property ids ----------------------------------------------------------------

def parse_property(prop_id: str) -> tuple[str, int | None]:
    """``"mindeg:2"`` -> ("mindeg", 2); ``"pm"`` -> ("pm", None)."""
    name, _, arg = prop_id.partition(":")
    name = name.strip().lower()
    if name in ("mindeg", "kconn", "kedge"):
        if not arg:
            raise InvalidInput(f"property {name} needs a parameter, e.g. {name}:2")
        try:
            k = int(arg)
        except ValueError:
            raise InvalidInput(f"bad parameter in property id {prop_id!r}") from None
        if k < 0:
            raise InvalidInput(f"negative parameter in property id {prop_id!r}")
        return name, k
    if name in ("pm", "ham") and not arg:
        return name, None
    raise InvalidInput(f"unknown property id {prop_id!r}")


def property_predicate(prop_id: str, exact_cap: int | None = None) -> Callable[[Graph], bool]:
    name, k = parse_property(prop_id)
    if name == "mindeg":
        return lambda g: has_min_degree(g, k)
    if name == "kconn":
        return lambda g: g.n > k and is_k_vertex_connected(g, k, method="flow")
    if name == "kedge":
        return lambda g: g.n > k and is_k_edge_connected(g, k, method="flow")
    if name == "pm":
        return has_perfect_matching
    return lambda g: hamilton_cycle(g, exact_cap) is not None


def degree_requirement(prop_id: str) -> int:
    """Minimum degree every graph with the property must have."""
    name, k = parse_property(prop_id)
    return {"mindeg": k, "kconn": k, "kedge": k, "pm": 1, "ham": 2}[name]
