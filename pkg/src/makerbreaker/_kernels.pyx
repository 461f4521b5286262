# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exhaustive-search kernels over 64-bit adjacency masks.

Mirrors ``_kernels_py`` function by function, including enumeration order,
so the two backends are interchangeable.  Graphs must have n <= MAX_N.
"""

from libc.stdint cimport uint64_t
from math import comb

cdef extern from *:
    int popc "__builtin_popcountll"(unsigned long long) nogil
    int ctz "__builtin_ctzll"(unsigned long long) nogil

NAME = "cython"
MAX_N = 63


cdef inline uint64_t lowbit(uint64_t x) noexcept nogil:
    return x & (~x + 1)


cdef inline uint64_t next_subset(uint64_t x) noexcept nogil:
    cdef uint64_t c = lowbit(x)
    cdef uint64_t r = x + c
    return (((r ^ x) >> 2) // c) | r


cdef inline uint64_t nbhd(const uint64_t* adj, uint64_t x) noexcept nogil:
    cdef uint64_t nb = 0
    cdef uint64_t y = x
    while y:
        nb |= adj[ctz(y)]
        y &= y - 1
    return nb & ~x


cdef int component_sizes(const uint64_t* adj, uint64_t within, int* sizes) noexcept nogil:
    cdef uint64_t rest = within
    cdef uint64_t comp, frontier, new, y
    cdef int count = 0
    while rest:
        comp = lowbit(rest)
        frontier = comp
        while frontier:
            new = 0
            y = frontier
            while y:
                new |= adj[ctz(y)]
                y &= y - 1
            new &= rest & ~comp
            comp |= new
            frontier = new
        sizes[count] = popc(comp)
        count += 1
        rest &= ~comp
    return count


cdef void load(adj, int n, uint64_t* out):
    cdef int i
    for i in range(n):
        out[i] = <uint64_t>adj[i]


cdef uint64_t scan_expansion(const uint64_t* a, int n, int s,
                             long long num, long long den) noexcept nogil:
    cdef uint64_t x = ((<uint64_t>1) << s) - 1
    cdef uint64_t limit = (<uint64_t>1) << n
    while x < limit:
        if popc(nbhd(a, x)) * den < num * s:
            return x
        x = next_subset(x)
    return 0


def expansion_violation(adj, int n, int smax, num, den, budget):
    cdef uint64_t a[64]
    cdef long long cnum = num
    cdef long long cden = den
    cdef uint64_t found
    cdef int s
    load(adj, n, a)
    examined = 0
    for s in range(1, smax + 1):
        count = comb(n, s)
        if examined + count > budget:
            return 2, 0, examined
        with nogil:
            found = scan_expansion(a, n, s, cnum, cden)
        if found:
            return 1, int(found), examined
        examined += count
    return 0, 0, examined


cdef uint64_t scan_density(const uint64_t* a, int n, int s,
                           long long num, long long den) noexcept nogil:
    cdef uint64_t x = ((<uint64_t>1) << s) - 1
    cdef uint64_t limit = (<uint64_t>1) << n
    cdef uint64_t y
    cdef long long twice_e
    while x < limit:
        twice_e = 0
        y = x
        while y:
            twice_e += popc(a[ctz(y)] & x)
            y &= y - 1
        if twice_e * den > 2 * num * s:
            return x
        x = next_subset(x)
    return 0


def density_violation(adj, int n, int smax, num, den, budget):
    cdef uint64_t a[64]
    cdef long long cnum = num
    cdef long long cden = den
    cdef uint64_t found
    cdef int s
    load(adj, n, a)
    examined = 0
    for s in range(1, smax + 1):
        count = comb(n, s)
        if examined + count > budget:
            return 2, 0, examined
        with nogil:
            found = scan_density(a, n, s, cnum, cden)
        if found:
            return 1, int(found), examined
        examined += count
    return 0, 0, examined


cdef long long scan_cross(const uint64_t* a, int n, int r,
                          uint64_t* best_u, uint64_t* best_w) noexcept nogil:
    cdef uint64_t x = ((<uint64_t>1) << r) - 1
    cdef uint64_t limit = (<uint64_t>1) << n
    cdef uint64_t wmask
    cdef int cnt[64]
    cdef int w, cval, need
    cdef long long value
    cdef long long best = -1
    while x < limit:
        for w in range(n):
            if (x >> w) & 1:
                cnt[w] = -1
            else:
                cnt[w] = popc(a[w] & x)
        need = r
        value = 0
        wmask = 0
        cval = 0
        while need > 0 and cval <= r:
            for w in range(n):
                if need == 0:
                    break
                if cnt[w] == cval:
                    value += cval
                    wmask |= (<uint64_t>1) << w
                    need -= 1
            cval += 1
        if best < 0 or value < best:
            best = value
            best_u[0] = x
            best_w[0] = wmask
            if best == 0:
                break
        x = next_subset(x)
    return best


def min_cross(adj, int n, int r, budget):
    cdef uint64_t a[64]
    cdef uint64_t bu = 0
    cdef uint64_t bw = 0
    cdef long long best
    if comb(n, r) > budget:
        return 2, -1, 0, 0
    load(adj, n, a)
    with nogil:
        best = scan_cross(a, n, r, &bu, &bw)
    return 0, best, int(bu), int(bw)


def berge_tutte(adj, int n):
    cdef uint64_t a[64]
    cdef int sizes[64]
    cdef uint64_t full = ((<uint64_t>1) << n) - 1
    cdef uint64_t s, best_s = 0
    cdef uint64_t total = (<uint64_t>1) << n
    cdef int best = n + 1
    cdef int value, odd, k, c
    load(adj, n, a)
    with nogil:
        s = 0
        while s < total:
            c = component_sizes(a, full & ~s, sizes)
            odd = 0
            for k in range(c):
                odd += sizes[k] & 1
            value = n + popc(s) - odd
            if value < best:
                best = value
                best_s = s
            s += 1
    return best, int(best_s)


cdef struct BlockScan:
    int disc[64]
    int low[64]
    int best[64]
    int stack[64]
    int top
    int counter
    uint64_t allowed


cdef void block_visit(BlockScan* b, const uint64_t* adj, int v, int parent) noexcept nogil:
    cdef uint64_t cand = adj[v] & b.allowed
    cdef int w, u, size, inner
    b.disc[v] = b.counter
    b.low[v] = b.counter
    b.counter += 1
    b.best[v] = 0
    b.stack[b.top] = v
    b.top += 1
    while cand:
        w = ctz(cand)
        cand &= cand - 1
        if b.disc[w] < 0:
            block_visit(b, adj, w, v)
            if b.low[w] < b.low[v]:
                b.low[v] = b.low[w]
            if b.low[w] >= b.disc[v]:
                size = 1
                inner = 0
                while True:
                    b.top -= 1
                    u = b.stack[b.top]
                    size += 1
                    if b.best[u] > inner:
                        inner = b.best[u]
                    if u == w:
                        break
                if size - 1 + inner > b.best[v]:
                    b.best[v] = size - 1 + inner
        elif w != parent:
            if b.disc[w] < b.low[v]:
                b.low[v] = b.disc[w]


cdef int block_bound(const uint64_t* adj, int x, uint64_t free) noexcept nogil:
    cdef BlockScan b
    cdef int i
    for i in range(64):
        b.disc[i] = -1
    b.top = 0
    b.counter = 0
    b.allowed = free | ((<uint64_t>1) << x)
    block_visit(&b, adj, x, -1)
    return b.best[x]


def path_bound(adj, int x, free):
    cdef uint64_t a[64]
    cdef int n = len(adj)
    load(adj, n, a)
    return block_bound(a, x, <uint64_t>free)


cdef int order_candidates(const uint64_t* adj, uint64_t cand, uint64_t free, int* order) noexcept nogil:
    # fewest onward options first, ties by vertex id (insertion sort is stable)
    cdef int keys[64]
    cdef int m = 0
    cdef int i, u, key
    while cand:
        u = ctz(cand)
        cand &= cand - 1
        key = popc(adj[u] & free)
        i = m
        while i > 0 and keys[i - 1] > key:
            keys[i] = keys[i - 1]
            order[i] = order[i - 1]
            i -= 1
        keys[i] = key
        order[i] = u
        m += 1
    return m


cdef struct PathSearch:
    uint64_t adj[64]
    uint64_t full
    int n
    int best
    int upper
    int plen
    int path[64]
    int best_plen
    int best_path[64]
    long long nodes
    long long budget


cdef int path_dfs(PathSearch* st, int v, uint64_t visited, int length) noexcept nogil:
    cdef int i, j, u, m, done
    cdef int order[64]
    cdef uint64_t free
    st.nodes += 1
    if st.nodes > st.budget:
        return 2
    if length > st.best:
        st.best = length
        st.best_plen = st.plen
        for i in range(st.plen):
            st.best_path[i] = st.path[i]
        if length == st.upper:
            return 1
    free = st.full & ~visited
    if length + block_bound(st.adj, v, free) <= st.best:
        return 0
    m = order_candidates(st.adj, st.adj[v] & free, free, order)
    for j in range(m):
        u = order[j]
        st.path[st.plen] = u
        st.plen += 1
        done = path_dfs(st, u, visited | ((<uint64_t>1) << u), length + 1)
        if done:
            return done
        st.plen -= 1
    return 0


cdef int run_path_search(PathSearch* st) noexcept nogil:
    cdef int s, done
    for s in range(st.n):
        st.path[0] = s
        st.plen = 1
        done = path_dfs(st, s, (<uint64_t>1) << s, 0)
        if done:
            return done
    return 0


def longest_path(adj, int n, long long budget):
    cdef PathSearch st
    cdef int sizes[64]
    cdef int c, k, done, biggest = 0
    if n == 0:
        return 0, []
    load(adj, n, st.adj)
    st.n = n
    st.full = ((<uint64_t>1) << n) - 1
    c = component_sizes(st.adj, st.full, sizes)
    for k in range(c):
        if sizes[k] > biggest:
            biggest = sizes[k]
    st.upper = biggest - 1
    if st.upper == 0:
        return 0, [0]
    st.best = 0
    st.best_plen = 1
    st.best_path[0] = 0
    st.nodes = 0
    st.budget = budget
    with nogil:
        done = run_path_search(&st)
    if done == 2:
        return 2, []
    return 0, [st.best_path[k] for k in range(st.best_plen)]


def path_longer_than(adj, int n, int length, long long budget):
    cdef PathSearch st
    cdef int k, done
    if n == 0:
        return 0, None
    load(adj, n, st.adj)
    st.n = n
    st.full = ((<uint64_t>1) << n) - 1
    st.best = length
    st.upper = length + 1
    st.best_plen = 0
    st.nodes = 0
    st.budget = budget
    with nogil:
        done = run_path_search(&st)
    if done == 2:
        return 2, None
    if st.best > length:
        return 0, [st.best_path[k] for k in range(st.best_plen)]
    return 0, None


cdef struct CycleSearch:
    uint64_t adj[64]
    uint64_t full
    int n
    int plen
    int path[64]
    long long nodes
    long long budget


cdef struct CutScan:
    int disc[64]
    int low[64]
    int counter
    int cut
    int a
    int b
    uint64_t allowed


cdef void cut_visit(CutScan* c, const uint64_t* adj, int v, int parent) noexcept nogil:
    cdef uint64_t cand = adj[v] & c.allowed
    cdef int w
    cdef int children = 0
    if c.a != c.b:
        if v == c.a:
            cand |= (<uint64_t>1) << c.b
        elif v == c.b:
            cand |= (<uint64_t>1) << c.a
    c.disc[v] = c.counter
    c.low[v] = c.counter
    c.counter += 1
    while cand:
        w = ctz(cand)
        cand &= cand - 1
        if c.disc[w] < 0:
            children += 1
            cut_visit(c, adj, w, v)
            if c.low[w] < c.low[v]:
                c.low[v] = c.low[w]
            if parent >= 0 and c.low[w] >= c.disc[v]:
                c.cut = 1
        elif w != parent:
            if c.disc[w] < c.low[v]:
                c.low[v] = c.disc[w]
    if parent < 0 and children > 1:
        c.cut = 1


cdef int two_connected(const uint64_t* adj, uint64_t allowed, int a, int b) noexcept nogil:
    # induced graph on allowed plus the edge a-b: connected, no cut vertex
    cdef CutScan c
    cdef int i
    for i in range(64):
        c.disc[i] = -1
    c.counter = 0
    c.cut = 0
    c.a = a
    c.b = b
    c.allowed = allowed
    cut_visit(&c, adj, a, -1)
    return c.cut == 0 and c.counter == popc(allowed)


cdef int forced_consistent(const uint64_t* adj, uint64_t unvisited, uint64_t allowed, int cur) noexcept nogil:
    # edges at two-option vertices must be on the cycle: no overload, no short cycle
    cdef uint64_t f[64]
    cdef uint64_t touched = 0
    cdef uint64_t y = unvisited
    cdef uint64_t m, x, comp, frontier, new, z
    cdef int w, u, closed
    cdef int size = popc(allowed)
    for w in range(64):
        f[w] = 0
    while y:
        w = ctz(y)
        y &= y - 1
        m = adj[w] & allowed
        if popc(m) == 2:
            f[w] |= m
            touched |= (<uint64_t>1) << w
            x = m
            while x:
                u = ctz(x)
                x &= x - 1
                f[u] |= (<uint64_t>1) << w
                touched |= (<uint64_t>1) << u
    if cur:
        f[cur] |= 1
        f[0] |= (<uint64_t>1) << cur
        touched |= 1 | ((<uint64_t>1) << cur)
    y = touched
    while y:
        if popc(f[ctz(y)]) > 2:
            return 0
        y &= y - 1
    while touched:
        comp = lowbit(touched)
        frontier = comp
        while frontier:
            new = 0
            z = frontier
            while z:
                new |= f[ctz(z)]
                z &= z - 1
            new &= ~comp
            comp |= new
            frontier = new
        touched &= ~comp
        closed = 1
        z = comp
        while z:
            if popc(f[ctz(z)]) != 2:
                closed = 0
                break
            z &= z - 1
        if closed and popc(comp) < size:
            return 0
    return 1


cdef int cycle_feasible(CycleSearch* st, int cur, uint64_t visited) noexcept nogil:
    cdef uint64_t unvisited = st.full & ~visited
    cdef uint64_t allowed = unvisited | ((<uint64_t>1) << cur) | 1
    cdef uint64_t y = unvisited
    while y:
        if popc(st.adj[ctz(y)] & allowed) < 2:
            return 0
        y &= y - 1
    if not two_connected(st.adj, allowed, cur, 0):
        return 0
    return forced_consistent(st.adj, unvisited, allowed, cur)


cdef int cycle_dfs(CycleSearch* st, int cur, uint64_t visited) noexcept nogil:
    cdef int order[64]
    cdef int m, j, u, done
    cdef uint64_t unvisited, allowed, free, y
    st.nodes += 1
    if st.nodes > st.budget:
        return 2
    if visited == st.full:
        return <int>(st.adj[cur] & 1)
    if not cycle_feasible(st, cur, visited):
        return 0
    unvisited = st.full & ~visited
    allowed = unvisited | ((<uint64_t>1) << cur) | 1
    free = st.adj[cur] & unvisited
    m = 0
    y = free
    while y:
        u = ctz(y)
        y &= y - 1
        if popc(st.adj[u] & allowed) == 2:
            # a neighbour with no other way in must come next
            order[0] = u
            m = 1
            break
    if m == 0:
        m = order_candidates(st.adj, free, unvisited, order)
    for j in range(m):
        u = order[j]
        st.path[st.plen] = u
        st.plen += 1
        done = cycle_dfs(st, u, visited | ((<uint64_t>1) << u))
        if done:
            return done
        st.plen -= 1
    return 0


def hamilton_cycle(adj, int n, long long budget):
    cdef CycleSearch st
    cdef int sizes[64]
    cdef int v, k, found
    if n < 3:
        return 0, None
    load(adj, n, st.adj)
    st.n = n
    st.full = ((<uint64_t>1) << n) - 1
    for v in range(n):
        if popc(st.adj[v]) < 2:
            return 0, None
    if component_sizes(st.adj, st.full, sizes) != 1:
        return 0, None
    st.path[0] = 0
    st.plen = 1
    st.nodes = 0
    st.budget = budget
    with nogil:
        found = cycle_dfs(&st, 0, 1)
    if found == 2:
        return 2, None
    if found:
        return 0, [st.path[k] for k in range(st.plen)]
    return 0, None
