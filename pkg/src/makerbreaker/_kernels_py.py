"""Pure-Python exhaustive-search kernels.

Graphs arrive as ``adj``: a sequence of ``n`` integer bitmasks where bit ``u``
of ``adj[v]`` is set iff ``{u, v}`` is an edge.  Every kernel here has a twin
in ``_kernels.pyx`` with identical enumeration order, so both backends return
the same witnesses, not just the same verdicts.
"""

from __future__ import annotations

from math import comb

NAME = "python"
MAX_N = None  # arbitrary-precision ints, no width limit


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _k_subsets(n: int, k: int):
    # Gosper's hack: k-subsets of n bits in increasing integer order
    x = (1 << k) - 1
    limit = 1 << n
    while x < limit:
        yield x
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def _neighbours_of(adj, x: int) -> int:
    nb = 0
    for v in _bits(x):
        nb |= adj[v]
    return nb & ~x


def _component_sizes(adj, n: int, within: int):
    rest = within
    sizes = []
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            new = 0
            for u in _bits(frontier):
                new |= adj[u]
            new &= rest & ~comp
            comp |= new
            frontier = new
        sizes.append(comp.bit_count())
        rest &= ~comp
    return sizes


def expansion_violation(adj, n: int, smax: int, num: int, den: int, budget: int):
    """First U (by size, then integer order) with ``|N(U)| * den < num * |U|``.

    Returns ``(status, mask, examined)`` with status 0 = none exists,
    1 = violation found, 2 = the next size class would exceed ``budget``.
    """
    examined = 0
    for s in range(1, smax + 1):
        count = comb(n, s)
        if examined + count > budget:
            return 2, 0, examined
        for x in _k_subsets(n, s):
            if _neighbours_of(adj, x).bit_count() * den < num * s:
                return 1, x, examined
        examined += count
    return 0, 0, examined


def density_violation(adj, n: int, smax: int, num: int, den: int, budget: int):
    """First U with ``e(U) * den > num * |U|`` among sizes 1..smax."""
    examined = 0
    for s in range(1, smax + 1):
        count = comb(n, s)
        if examined + count > budget:
            return 2, 0, examined
        for x in _k_subsets(n, s):
            twice_e = 0
            for v in _bits(x):
                twice_e += (adj[v] & x).bit_count()
            if twice_e * den > 2 * num * s:
                return 1, x, examined
        examined += count
    return 0, 0, examined


def min_cross(adj, n: int, r: int, budget: int):
    """Minimum of ``e(U, W)`` over disjoint r-sets U, W.

    For fixed U the best W is the r outside vertices with fewest neighbours
    in U, so only U is enumerated.  Returns ``(status, value, U, W)``; status
    2 means the enumeration would exceed ``budget``.
    """
    if comb(n, r) > budget:
        return 2, -1, 0, 0
    best = -1
    best_u = best_w = 0
    for x in _k_subsets(n, r):
        counts = sorted(
            ((adj[w] & x).bit_count(), w) for w in range(n) if not (x >> w) & 1
        )[:r]
        value = sum(c for c, _ in counts)
        if best < 0 or value < best:
            best = value
            best_u = x
            best_w = 0
            for _, w in counts:
                best_w |= 1 << w
            if best == 0:
                break
    return 0, best, best_u, best_w


def berge_tutte(adj, n: int):
    """``min_S (n + |S| - o(G - S))`` with the first minimising S."""
    full = (1 << n) - 1
    best = n + 1
    best_s = 0
    for s in range(1 << n):
        odd = sum(1 for size in _component_sizes(adj, n, full & ~s) if size & 1)
        value = n + s.bit_count() - odd
        if value < best:
            best = value
            best_s = s
    return best, best_s


def path_bound(adj, x: int, free: int) -> int:
    """Upper bound on the edges of a simple path that starts at x and then
    uses only vertices of ``free``.

    Such a path runs through the blocks of the block-cut tree rooted at x
    along a single branch and gains at most |B| - 1 vertices in block B.
    """
    allowed = free | (1 << x)
    disc = {}
    low = {}
    best = {}
    stack = []

    def visit(v: int, parent: int) -> None:
        disc[v] = low[v] = len(disc)
        best[v] = 0
        stack.append(v)
        for w in _bits(adj[v] & allowed):
            if w not in disc:
                visit(w, v)
                low[v] = min(low[v], low[w])
                if low[w] >= disc[v]:
                    size, inner = 1, 0
                    while True:
                        u = stack.pop()
                        size += 1
                        inner = max(inner, best[u])
                        if u == w:
                            break
                    best[v] = max(best[v], size - 1 + inner)
            elif w != parent:
                low[v] = min(low[v], disc[w])

    visit(x, -1)
    return best[x]


def _ordered(adj, cand: int, free: int):
    # fewest onward options first, ties by vertex id
    return sorted(_bits(cand), key=lambda u: ((adj[u] & free).bit_count(), u))


def longest_path(adj, n: int, budget: int):
    """(status, vertex sequence of a longest path); status 2 means the
    search visited more than ``budget`` nodes and gave up."""
    if n == 0:
        return 0, []
    full = (1 << n) - 1
    upper = max(_component_sizes(adj, n, full)) - 1
    best = [0, [0]]
    if upper == 0:
        return 0, [0]
    path = []
    nodes = [0]

    def dfs(v: int, visited: int, length: int) -> int:
        nodes[0] += 1
        if nodes[0] > budget:
            return 2
        if length > best[0]:
            best[0] = length
            best[1] = list(path)
            if length == upper:
                return 1
        free = full & ~visited
        if length + path_bound(adj, v, free) <= best[0]:
            return 0
        for u in _ordered(adj, adj[v] & free, free):
            path.append(u)
            done = dfs(u, visited | (1 << u), length + 1)
            path.pop()
            if done:
                return done
        return 0

    for s in range(n):
        path.append(s)
        done = dfs(s, 1 << s, 0)
        path.pop()
        if done == 2:
            return 2, []
        if done:
            break
    return 0, best[1]


def path_longer_than(adj, n: int, length: int, budget: int):
    """(status, some path with more than ``length`` edges or None)."""
    full = (1 << n) - 1
    path = []
    found = []
    nodes = [0]

    def dfs(v: int, visited: int, cur: int) -> int:
        nodes[0] += 1
        if nodes[0] > budget:
            return 2
        if cur > length:
            found.extend(path)
            return 1
        free = full & ~visited
        if cur + path_bound(adj, v, free) <= length:
            return 0
        for u in _ordered(adj, adj[v] & free, free):
            path.append(u)
            done = dfs(u, visited | (1 << u), cur + 1)
            if done:
                return done
            path.pop()
        return 0

    for s in range(n):
        path.append(s)
        done = dfs(s, 1 << s, 0)
        if done == 2:
            return 2, None
        if done:
            return 0, found
        path.pop()
    return 0, None


def _two_connected(adj, allowed: int, a: int, b: int) -> bool:
    """Whether the graph induced on ``allowed`` plus the edge a-b (none
    when a == b) is connected with no cut vertex."""
    def nb(v):
        m = adj[v] & allowed
        if a != b:
            if v == a:
                m |= 1 << b
            elif v == b:
                m |= 1 << a
        return m

    disc = {}
    low = {}
    cut = [False]

    def visit(v, parent):
        disc[v] = low[v] = len(disc)
        children = 0
        for w in _bits(nb(v)):
            if w not in disc:
                children += 1
                visit(w, v)
                low[v] = min(low[v], low[w])
                if parent >= 0 and low[w] >= disc[v]:
                    cut[0] = True
            elif w != parent:
                low[v] = min(low[v], disc[w])
        if parent < 0 and children > 1:
            cut[0] = True

    visit(a, -1)
    return not cut[0] and len(disc) == allowed.bit_count()


def _forced_consistent(adj, unvisited: int, allowed: int, cur: int) -> bool:
    """Edges at unvisited vertices with only two options must all lie on
    the cycle; reject when they overload a vertex or close a short cycle."""
    forced = {}
    for w in _bits(unvisited):
        m = adj[w] & allowed
        if m.bit_count() == 2:
            forced[w] = forced.get(w, 0) | m
            for x in _bits(m):
                forced[x] = forced.get(x, 0) | (1 << w)
    if cur:
        # the path walked so far acts as one edge from cur back to 0
        forced[cur] = forced.get(cur, 0) | 1
        forced[0] = forced.get(0, 0) | (1 << cur)
    if any(m.bit_count() > 2 for m in forced.values()):
        return False
    rest = 0
    for x in forced:
        rest |= 1 << x
    size = allowed.bit_count()
    while rest:
        low = rest & -rest
        comp = low
        frontier = low
        while frontier:
            new = 0
            for u in _bits(frontier):
                new |= forced[u]
            new &= ~comp
            comp |= new
            frontier = new
        rest &= ~comp
        closed = all(forced[u].bit_count() == 2 for u in _bits(comp))
        if closed and comp.bit_count() < size:
            return False
    return True


def hamilton_cycle(adj, n: int, budget: int):
    """(status, a Hamilton cycle as a vertex list starting at 0, or None)."""
    if n < 3:
        return 0, None
    full = (1 << n) - 1
    for v in range(n):
        if adj[v].bit_count() < 2:
            return 0, None
    if len(_component_sizes(adj, n, full)) != 1:
        return 0, None
    path = [0]
    nodes = [0]

    def dfs(cur: int, visited: int) -> int:
        nodes[0] += 1
        if nodes[0] > budget:
            return 2
        if visited == full:
            return 1 if adj[cur] & 1 else 0
        unvisited = full & ~visited
        allowed = unvisited | (1 << cur) | 1
        for w in _bits(unvisited):
            if (adj[w] & allowed).bit_count() < 2:
                return 0
        if not _two_connected(adj, allowed, cur, 0):
            return 0
        if not _forced_consistent(adj, unvisited, allowed, cur):
            return 0
        free = adj[cur] & unvisited
        forced = [u for u in _bits(free) if (adj[u] & allowed).bit_count() == 2]
        # a neighbour with no other way in must come next
        order = forced[:1] if forced else _ordered(adj, free, unvisited)
        for u in order:
            path.append(u)
            done = dfs(u, visited | (1 << u))
            if done:
                return done
            path.pop()
        return 0

    done = dfs(0, 1)
    if done == 2:
        return 2, None
    return 0, (path if done else None)
