"""Closed walks visiting each vertex of a small graph a prescribed number of times.

The solver is exact: it answers feasibility correctly for every spec, or
aborts loudly when its search budget is genuinely exhausted; it never
returns a wrong answer. Strategy: a feasible multiset of edges always
contains a spanning tree of its own support, so we enumerate spanning
trees of the allowed graph and, for each, solve the residual
degree-constrained edge-multiset system exactly. Residual systems repeat
heavily across trees, so failures are memoized by residual vector.

Visit counts may be as large as 10^9; all arithmetic on multiplicities and
flows uses Python integers, and the Euler walk of the result is only
materialized on demand.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .instance import ContractViolation
from .graphs import Multigraph, eulerian_tour

_WALK_STATE_CAP = 700_000    # product of (visits_v + 1) admitted to the walk DP
_TREE_CAP = 100_000          # spanning trees examined before giving up
_NODE_CAP = 400_000          # recursion nodes in the tree enumeration
_DP_STATE_CAP = 200_000      # product of (r_v + 1) admitted to the exact DP
_FULL_Z_EDGE_CAP = 12        # component edge count for exhaustive parity layers
_PAIRING_ODD_CAP = 10        # odd-vertex count for heuristic parity layers
_NECESSITY_VERTEX_CAP = 14   # component size for the cut-based infeasibility check


@dataclass
class VisitSpec:
    """Allowed-edge graph plus per-vertex visit counts (all >= 1)."""

    allowed: np.ndarray
    visits: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.allowed, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("allowed must be a square matrix")
        if not np.array_equal(adj, adj.T):
            raise ValueError("allowed must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("self-loops are not allowed")
        visits = [int(v) for v in np.asarray(self.visits).tolist()]
        if len(visits) != adj.shape[0]:
            raise ValueError("visits length must match vertex count")
        if len(visits) == 0:
            raise ValueError("need k >= 1")
        if any(v < 1 for v in visits):
            raise ValueError("every visit count must be >= 1")
        self.allowed = adj
        self.visits = visits

    @property
    def k(self) -> int:
        return self.allowed.shape[0]


class Multiwalk:
    """Result of a feasible spec: edge multiplicities plus a lazy Euler walk."""

    def __init__(self, multiplicities: Multigraph, visits):
        self.multiplicities = multiplicities
        self.visits = list(visits)
        self._walk = None

    @property
    def walk(self) -> list:
        if self._walk is None:
            self._walk = eulerian_tour(self.multiplicities)
        return self._walk

    def walk_edge_count(self) -> int:
        return self.multiplicities.edge_total()

    def visit_counts(self) -> dict:
        """Occurrences per vertex in the cyclic walk (closing repeat dropped)."""
        w = self.walk
        if len(w) == 1:
            return {w[0]: 1}  # edgeless walk has no closing repeat
        counts = {}
        for v in w[:-1]:
            counts[v] = counts.get(v, 0) + 1
        return counts


class _Dinic:
    """Max flow with Python integers; value-independent on these tiny graphs."""

    def __init__(self, n: int):
        self.n = n
        self.adj = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap: int) -> int:
        self.adj[u].append([v, cap, len(self.adj[v])])
        self.adj[v].append([u, 0, len(self.adj[u]) - 1])
        return len(self.adj[u]) - 1

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            qi = 0
            while qi < len(queue):
                u = queue[qi]
                qi += 1
                for e in self.adj[u]:
                    if e[1] > 0 and level[e[0]] < 0:
                        level[e[0]] = level[u] + 1
                        queue.append(e[0])
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u, pushed):
                if u == t:
                    return pushed
                while it[u] < len(self.adj[u]):
                    e = self.adj[u][it[u]]
                    v = e[0]
                    if e[1] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, e[1]))
                        if got > 0:
                            e[1] -= got
                            self.adj[v][e[2]][1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 200)
                if pushed == 0:
                    break
                flow += pushed


def _even_flow(vertices, edges, s):
    """Integer edge multiplicities with degree exactly 2*s[v], or None.

    Double-cover max flow: each vertex splits into a sender and a receiver
    of capacity s[v]; an edge {u,v} carries both directions. A saturating
    flow f yields g_e = f(u->v) + f(v->u) with deg_v(g) = 2 s[v], and any
    solution of the even system induces a saturating (half-integral, hence
    integral-valued) flow, so this tier is exact.
    """
    idx = {v: i for i, v in enumerate(vertices)}
    m = len(vertices)
    src, snk = 2 * m, 2 * m + 1
    net = _Dinic(2 * m + 2)
    total = 0
    inf = sum(s.values()) + 1
    for v in vertices:
        net.add(src, 2 * idx[v], s[v])
        net.add(2 * idx[v] + 1, snk, s[v])
        total += s[v]
    slots = {}
    for (u, v) in edges:
        a = net.add(2 * idx[u], 2 * idx[v] + 1, inf)
        b = net.add(2 * idx[v], 2 * idx[u] + 1, inf)
        slots[(u, v)] = (2 * idx[u], a, 2 * idx[v], b)
    if net.max_flow(src, snk) != total:
        return None
    out = {}
    for (u, v), (nu, a, nv, b) in slots.items():
        used = (inf - net.adj[nu][a][1]) + (inf - net.adj[nv][b][1])
        if used:
            out[(u, v)] = used
    return out


def _transportation(left, right, edges, r):
    """Exact solve of the degree system on a bipartite component via max flow."""
    if sum(r[v] for v in left) != sum(r[v] for v in right):
        return None
    idx = {}
    for v in left + right:
        idx[v] = len(idx)
    m = len(idx)
    src, snk = m, m + 1
    net = _Dinic(m + 2)
    inf = sum(r[v] for v in left) + 1
    for v in left:
        net.add(src, idx[v], r[v])
    for v in right:
        net.add(idx[v], snk, r[v])
    left_set = set(left)
    slots = {}
    for (u, v) in edges:
        lu = u if u in left_set else v
        rv = v if lu == u else u
        slots[(u, v)] = (idx[lu], net.add(idx[lu], idx[rv], inf))
    if net.max_flow(src, snk) != sum(r[v] for v in left):
        return None
    out = {}
    for e, (nu, a) in slots.items():
        used = inf - net.adj[nu][a][1]
        if used:
            out[e] = used
    return out


def _two_color(vertices, adj_sets):
    """Bipartition (left, right) of a connected set, or None if an odd cycle."""
    color = {vertices[0]: 0}
    queue = [vertices[0]]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        for w in adj_sets[u]:
            if w not in color:
                color[w] = color[u] ^ 1
                queue.append(w)
            elif color[w] == color[u]:
                return None
    left = [v for v in vertices if color[v] == 0]
    right = [v for v in vertices if color[v] == 1]
    return left, right


def _degree_dp(vertices, edges, r):
    """Exhaustive multiplicity search with failure memoization; exact.

    Only used when prod(r_v + 1) is small. Edges are processed in a fixed
    order; once the last edge at a vertex is placed its residual must be 0,
    which prunes hard.
    """
    order = {v: i for i, v in enumerate(vertices)}
    last_edge = {}
    for t, (u, v) in enumerate(edges):
        last_edge[u] = t
        last_edge[v] = t
    failed = set()
    sol = {}

    def go(t, res):
        if t == len(edges):
            return all(x == 0 for x in res)
        key = (t, res)
        if key in failed:
            return False
        u, v = edges[t]
        iu, iv = order[u], order[v]
        hi = min(res[iu], res[iv])
        want_u = res[iu] if last_edge[u] == t else None
        want_v = res[iv] if last_edge[v] == t else None
        for x in range(hi + 1):
            if want_u is not None and x != want_u:
                continue
            if want_v is not None and x != want_v:
                continue
            nxt = list(res)
            nxt[iu] -= x
            nxt[iv] -= x
            if go(t + 1, tuple(nxt)):
                if x:
                    sol[(u, v)] = x
                return True
        failed.add(key)
        return False

    if go(0, tuple(r[v] for v in vertices)):
        return sol
    return None


def _shortest_path_edges(adj_sets, a, b):
    """Edge set of a BFS shortest a-b path with lowest-index predecessors."""
    prev = {a: a}
    queue = [a]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        if u == b:
            break
        for w in sorted(adj_sets[u]):
            if w not in prev:
                prev[w] = u
                queue.append(w)
    path = set()
    cur = b
    while cur != a:
        p = prev[cur]
        path.add((p, cur) if p < cur else (cur, p))
        cur = p
    return path


def _pairings(items):
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for tail in _pairings(rest):
            yield [(first, items[i])] + tail


def _parity_layers(vertices, edges, adj_sets, r):
    """Candidate 0/1 edge sets z with deg_z parity matching r, deg_z <= r."""
    odd = [v for v in vertices if r[v] % 2 == 1]
    if len(edges) <= _FULL_Z_EDGE_CAP:
        # exhaustive: complete, so a miss here certifies infeasibility
        for bits in range(1 << len(edges)):
            z = [e for t, e in enumerate(edges) if bits >> t & 1]
            deg = {v: 0 for v in vertices}
            for (u, v) in z:
                deg[u] += 1
                deg[v] += 1
            if all(deg[v] % 2 == r[v] % 2 and deg[v] <= r[v] for v in vertices):
                yield set(z)
        return
    if len(odd) > _PAIRING_ODD_CAP:
        return
    for pairing in _pairings(odd):
        z = set()
        for (a, b) in pairing:
            z ^= _shortest_path_edges(adj_sets, a, b)
        deg = {v: 0 for v in vertices}
        for (u, v) in z:
            deg[u] += 1
            deg[v] += 1
        if all(deg[v] % 2 == r[v] % 2 and deg[v] <= r[v] for v in vertices):
            yield z


def _cut_certificate(vertices, edges, r):
    """A vertex set W proving the degree system infeasible, or None.

    For any solution, each edge end not absorbed inside a component of
    G - W must land in W: isolated vertices export all r_v ends and each
    odd-total component exports at least one, while W can absorb at most
    sum of its r values. Violation of that inequality is a certificate.
    """
    if len(vertices) > _NECESSITY_VERTEX_CAP:
        return None
    vset = list(vertices)
    for size in range(len(vset) + 1):
        for w in combinations(vset, size):
            wset = set(w)
            cap = sum(r[v] for v in w)
            rest = [v for v in vset if v not in wset]
            seen = set()
            demand = 0
            for v in rest:
                if v in seen:
                    continue
                comp = [v]
                seen.add(v)
                stack = [v]
                while stack:
                    x = stack.pop()
                    for (a, b) in edges:
                        if a == x and b not in seen and b not in wset:
                            seen.add(b)
                            comp.append(b)
                            stack.append(b)
                        elif b == x and a not in seen and a not in wset:
                            seen.add(a)
                            comp.append(a)
                            stack.append(a)
                if len(comp) == 1:
                    demand += r[comp[0]]
                elif sum(r[x] for x in comp) % 2 == 1:
                    demand += 1
            if demand > cap:
                return w
    return None


def solve_degree_system(k, edges, r):
    """Integer multiplicities m_e >= 0 on `edges` with vertex degrees r, or None.

    None is only returned when infeasibility is certain; if every complete
    tier is out of range and the heuristic one fails, this raises
    ContractViolation instead of guessing.
    """
    r = {v: int(r[v]) for v in range(k)}
    if any(x < 0 for x in r.values()):
        return None
    if sum(r.values()) % 2 == 1:
        return None
    active = [v for v in range(k) if r[v] > 0]
    if not active:
        return {}
    act_edges = [e for e in edges if r[e[0]] > 0 and r[e[1]] > 0]
    adj_sets = {v: set() for v in active}
    for (u, v) in act_edges:
        adj_sets[u].add(v)
        adj_sets[v].add(u)

    out = {}
    seen = set()
    for v0 in active:
        if v0 in seen:
            continue
        comp = [v0]
        seen.add(v0)
        stack = [v0]
        while stack:
            x = stack.pop()
            for w in adj_sets[x]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        comp_set = set(comp)
        comp_edges = [e for e in act_edges if e[0] in comp_set]
        got = _solve_component(comp, comp_edges, adj_sets, r)
        if got is None:
            return None
        out.update(got)
    return out


def _solve_component(comp, edges, adj_sets, r):
    if len(comp) == 1:
        return None  # positive demand, no edges
    if sum(r[v] for v in comp) % 2 == 1:
        return None
    sides = _two_color(comp, adj_sets)
    if sides is not None:
        return _transportation(sides[0], sides[1], edges, r)

    if _cut_certificate(comp, edges, r) is not None:
        return None

    bound = 1
    for v in comp:
        bound *= r[v] + 1
        if bound > _DP_STATE_CAP:
            break
    if bound <= _DP_STATE_CAP:
        return _degree_dp(comp, edges, r)

    exhaustive = len(edges) <= _FULL_Z_EDGE_CAP
    for z in _parity_layers(comp, edges, adj_sets, r):
        deg = {v: 0 for v in comp}
        for (u, v) in z:
            deg[u] += 1
            deg[v] += 1
        s = {v: (r[v] - deg[v]) // 2 for v in comp}
        g = _even_flow(comp, edges, s)
        if g is not None:
            m = {e: 1 for e in z}
            for e, x in g.items():
                m[e] = m.get(e, 0) + x
            return m
    if exhaustive:
        return None
    raise ContractViolation(
        "degree system undecided: parity-layer search exhausted without a "
        "certificate of infeasibility")


def _walk_dp(allowed, visits):
    """Exact closed-walk search when prod(visits_v + 1) is small.

    States are (remaining visit vector, current vertex) with the vector
    packed into a mixed-radix code; reachability is swept layer by layer
    over the total remaining count, vectorized per directed edge. Covers
    the small-visit regime (including plain Hamiltonicity) where spanning
    tree enumeration would blow up on a No answer.
    """
    k = len(visits)
    bases = [1] * k
    prod = 1
    for v in range(k):
        bases[v] = prod
        prod *= visits[v] + 1
        if prod > _WALK_STATE_CAP:
            return "out_of_range"
    counts = np.array(visits, dtype=np.int64)
    bases = np.array(bases, dtype=np.int64)

    codes = np.arange(prod, dtype=np.int64)
    totals = np.zeros(prod, dtype=np.int64)
    for v in range(k):
        totals += (codes // bases[v]) % (counts[v] + 1)
    order = np.argsort(totals, kind="stable")
    sorted_totals = totals[order]
    start_total = int(counts.sum()) - 1

    reach = np.zeros((prod, k), dtype=bool)
    start_code = int(np.sum(counts * bases)) - int(bases[0])
    reach[start_code, 0] = True

    arcs = [(u, w) for u in range(k) for w in range(k) if allowed[u][w]]
    for t in range(start_total, 0, -1):
        lo = np.searchsorted(sorted_totals, t, side="left")
        hi = np.searchsorted(sorted_totals, t, side="right")
        layer = order[lo:hi]
        for (u, w) in arcs:
            src = layer[reach[layer, u]]
            if len(src) == 0:
                continue
            src = src[(src // bases[w]) % (counts[w] + 1) > 0]
            reach[src - bases[w], w] = True

    finish = [w for w in range(k) if allowed[w][0] and reach[0, w]]
    if not finish:
        return None
    cur = finish[0]
    walk_rev = [0, cur]
    code = 0
    for _ in range(start_total):
        pcode = code + int(bases[cur])
        prev = None
        for cand in range(k):
            if allowed[cand][cur] and reach[pcode, cand]:
                prev = cand
                break
        if prev is None:
            raise ContractViolation("walk reconstruction lost its trail")
        walk_rev.append(prev)
        code, cur = pcode, prev
    if cur != 0 or code != start_code:
        raise ContractViolation("walk reconstruction ended off the start state")
    return walk_rev[::-1]


_PATH_DP_CAP = 14            # component size for the exact path-cover DP


def _merge_pass(paths, allowed):
    # one sweep of endpoint-compatible joins, rescanning while a path grows
    merged = False
    i = 0
    while i < len(paths):
        j = i + 1
        while j < len(paths):
            pi, pj = paths[i], paths[j]
            if allowed[pi[-1]][pj[0]]:
                paths[i] = pi + pj
            elif allowed[pi[-1]][pj[-1]]:
                paths[i] = pi + pj[::-1]
            elif allowed[pi[0]][pj[0]]:
                paths[i] = pi[::-1] + pj
            elif allowed[pi[0]][pj[-1]]:
                paths[i] = pj + pi
            else:
                j += 1
                continue
            paths.pop(j)
            merged = True
        i += 1
    return merged


def _rotation_variants(path, allowed):
    """All paths reachable by rotations that keep path[0] fixed, one per endpoint."""
    seen = {path[-1]}
    queue = [list(path)]
    qi = 0
    while qi < len(queue):
        q = queue[qi]
        qi += 1
        a = q[-1]
        for pos in range(len(q) - 2):
            if allowed[a][q[pos]]:
                rot = q[:pos + 1] + q[pos + 1:][::-1]
                if rot[-1] not in seen:
                    seen.add(rot[-1])
                    queue.append(rot)
    return queue


def _rotate_merge_once(paths, allowed):
    # expose fresh endpoints by chains of rotations, then merge
    for i in range(len(paths)):
        if len(paths[i]) < 3:
            continue
        for flip in (False, True):
            base = paths[i][::-1] if flip else paths[i]
            for rot in _rotation_variants(base, allowed):
                e = rot[-1]
                for j in range(len(paths)):
                    if j == i:
                        continue
                    r = paths[j]
                    if allowed[e][r[0]]:
                        paths[i] = rot + r
                    elif allowed[e][r[-1]]:
                        paths[i] = rot + r[::-1]
                    else:
                        continue
                    paths.pop(j)
                    return True
    return False


def _greedy_paths(vertices, allowed):
    """Disjoint paths covering `vertices`: endpoint merges plus rotations."""
    paths = [[v] for v in vertices]
    while len(paths) > 1:
        if _merge_pass(paths, allowed):
            continue
        if not _rotate_merge_once(paths, allowed):
            break
    return paths


def _min_path_cover_exact(cverts, allowed):
    """Fewest vertex-disjoint paths partitioning cverts, with the paths.

    Subset DP: ep[S] holds the endpoint bitmask of Hamiltonian paths of the
    induced set S, then cover[S] peels one path containing the lowest
    vertex. Exponential in len(cverts), guarded by _PATH_DP_CAP.
    """
    c = len(cverts)
    adjm = [0] * c
    for a in range(c):
        for b in range(c):
            if a != b and allowed[cverts[a]][cverts[b]]:
                adjm[a] |= 1 << b
    size = 1 << c
    ep = [0] * size
    for u in range(c):
        ep[1 << u] = 1 << u
    for S in range(1, size):
        if S & (S - 1) == 0:
            continue
        e = 0
        T = S
        while T:
            u = (T & -T).bit_length() - 1
            T &= T - 1
            if ep[S ^ (1 << u)] & adjm[u]:
                e |= 1 << u
        ep[S] = e

    def extract(P):
        e = ep[P]
        u = (e & -e).bit_length() - 1
        seq = [u]
        S = P
        while S != 1 << u:
            S ^= 1 << u
            cands = ep[S] & adjm[u]
            u = (cands & -cands).bit_length() - 1
            seq.append(u)
        return [cverts[x] for x in seq]

    full = size - 1
    if ep[full]:
        return 1, [extract(full)]
    cover = [0] * size
    choice = [0] * size
    for S in range(1, size):
        v = (S & -S).bit_length() - 1
        rest = S ^ (1 << v)
        best, best_p = c + 1, 0
        q = rest
        while True:
            P = q | (1 << v)
            if ep[P] and cover[S ^ P] + 1 < best:
                best, best_p = cover[S ^ P] + 1, P
            if q == 0:
                break
            q = (q - 1) & rest
        cover[S] = best
        choice[S] = best_p
    paths = []
    S = full
    while S:
        P = choice[S]
        paths.append(extract(P))
        S ^= P
    return cover[full], paths


def _restart_paths(comp, allowed, initial):
    """Best greedy cover over seeded shuffles of the vertex order.

    The trial count shrinks with component size to keep the tier
    polynomial in practice.
    """
    best = initial
    m = len(comp)
    trials = 200 if m <= 64 else 40 if m <= 160 else 12 if m <= 320 else 4
    rng = np.random.default_rng(0)
    order = list(comp)
    for _ in range(trials):
        rng.shuffle(order)
        paths = _greedy_paths(list(order), allowed)
        if len(paths) < len(best):
            best = paths
            if len(best) == 1:
                break
    return best


def _path_cover_lower(comp, allowed):
    """Certified lower bound on the minimum path cover of one component.

    Deleting a set W splits the rest into pieces no path can rejoin, and
    the |W| deleted vertices sit on at most |W| paths, so the cover needs
    at least components(G - W) - |W| paths. Checked for every W of size
    at most two on small components, size one on medium ones, alongside
    the degree-one count: a path has two ends, so ceil(leaves / 2) paths
    are forced.
    """
    leaves = sum(1 for v in comp
                 if sum(1 for w in comp if allowed[v][w]) == 1)
    bound = max(1, (leaves + 1) // 2)
    drops = [()]
    if len(comp) <= 160:
        drops.extend((v,) for v in comp)
    if len(comp) <= 64:
        drops.extend((comp[a], comp[b])
                     for a in range(len(comp)) for b in range(a + 1, len(comp)))
    for W in drops:
        rest = [v for v in comp if v not in W]
        if not rest:
            continue
        pieces = len(_vertex_components(rest, allowed))
        bound = max(bound, pieces - len(W))
    return bound


def _vertex_components(vertices, allowed):
    remaining = list(vertices)
    comps = []
    seen = set()
    for v0 in remaining:
        if v0 in seen:
            continue
        comp = [v0]
        seen.add(v0)
        stack = [v0]
        while stack:
            x = stack.pop()
            for w in remaining:
                if w not in seen and allowed[x][w]:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


_CLONE_CAP = 2048            # clone count admitted to the hub path-cover tier


def _hub_path_cover(spec):
    """Exact tier for specs containing a vertex adjacent to everything.

    Cutting the walk at each hub visit partitions the remaining visits
    into exactly t = visits[hub] nonempty paths, and splitting a path
    raises the count by one, so feasibility means t lies between the
    minimum path cover and the total visit count. Multi-visit vertices are
    expanded into single-visit clones first; clones of one vertex stay
    non-adjacent, which mirrors the ban on immediate revisits. The minimum
    cover is additive over components: greedy endpoint merging gives the
    cheap upper bound and the subset DP settles components it cannot.
    """
    k = spec.k
    universal = [v for v in range(k) if int(spec.allowed[v].sum()) == k - 1]
    if not universal:
        return "no_hub"
    h = min(universal, key=lambda v: (-spec.visits[v], v))
    t = spec.visits[h]
    total_rest = sum(spec.visits[v] for v in range(k) if v != h)
    if t > total_rest:
        return None  # hub occurrences need separators in the cycle
    if t == total_rest:
        # pure star walk: hub alternates with everything else
        walk = []
        for v in range(k):
            if v != h:
                for _ in range(spec.visits[v]):
                    walk.append(h)
                    walk.append(v)
        walk.append(h)
        return walk
    if total_rest > _CLONE_CAP:
        return "no_hub"

    owner = []
    for v in range(k):
        if v != h:
            owner.extend([v] * spec.visits[v])
    m = len(owner)
    ow = np.asarray(owner, dtype=np.intp)
    cadj = (np.asarray(spec.allowed)[ow[:, None], ow[None, :]]
            & (ow[:, None] != ow[None, :])).tolist()

    comps = _vertex_components(list(range(m)), cadj)
    if len(comps) > t:
        return None  # every path stays inside one component
    covers = [_greedy_paths(comp, cadj) for comp in comps]
    if sum(len(cv) for cv in covers) > t:
        refined = []
        floors = []
        for comp, greedy in zip(comps, covers):
            if len(greedy) > 1 and len(comp) <= _PATH_DP_CAP:
                cnt, exact = _min_path_cover_exact(comp, cadj)
                best = exact if cnt < len(greedy) else greedy
                refined.append(best)
                floors.append(len(best))
            elif len(greedy) > 1:
                refined.append(_restart_paths(comp, cadj, greedy))
                floors.append(_path_cover_lower(comp, cadj))
            else:
                refined.append(greedy)
                floors.append(1)
        covers = refined
        if sum(len(cv) for cv in covers) > t:
            if sum(floors) > t:
                return None  # t below the sum of certified lower bounds
            raise ContractViolation(
                "hub quotient has a component whose minimum path cover "
                "resists both the exact range and the certified bounds")

    paths = [list(p) for cv in covers for p in cv]
    i = 0
    while len(paths) < t:
        if len(paths[i]) >= 2:
            paths.append([paths[i].pop()])
        else:
            i += 1
    walk = []
    for path in paths:
        walk.append(h)
        walk.extend(owner[c] for c in path)
    walk.append(h)
    return walk


def _spanning_trees(k, edges, degree_cap):
    """Yield spanning trees (as edge-index tuples) in a fixed order.

    Include/exclude walk over the lex-sorted edge list, include first,
    pruning branches that can no longer connect the graph and skipping
    trees whose degrees already overrun 2*visits. Explicit stack, since
    the branch depth equals the edge count. Raises if the node budget is
    exhausted, which keeps worst-case behavior honest.
    """
    m = len(edges)
    nodes = 0

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def connectable(parent, i):
        roots = {find(parent, v) for v in range(k)}
        if len(roots) == 1:
            return True
        link = {r: r for r in roots}

        def f2(x):
            while link[x] != x:
                link[x] = link[link[x]]
                x = link[x]
            return x

        cnt = len(roots)
        for t in range(i, m):
            a = f2(find(parent, edges[t][0]))
            b = f2(find(parent, edges[t][1]))
            if a != b:
                link[a] = b
                cnt -= 1
                if cnt == 1:
                    return True
        return False

    stack = [(0, list(range(k)), (), tuple([0] * k))]
    while stack:
        i, parent, chosen, tdeg = stack.pop()
        nodes += 1
        if nodes > _NODE_CAP:
            raise ContractViolation("spanning tree enumeration budget exhausted")
        if len(chosen) == k - 1:
            yield chosen
            continue
        if i == m or not connectable(parent, i):
            continue
        u, v = edges[i]
        ru, rv = find(parent, u), find(parent, v)
        stack.append((i + 1, parent, chosen, tdeg))
        if ru != rv and tdeg[u] < degree_cap[u] and tdeg[v] < degree_cap[v]:
            p2 = list(parent)
            p2[ru] = rv
            t2 = list(tdeg)
            t2[u] += 1
            t2[v] += 1
            stack.append((i + 1, p2, chosen + (i,), tuple(t2)))


def many_visits_tour(spec: VisitSpec):
    """Edge multiplicities and walk for the spec, or None when infeasible.

    The returned multigraph has degree 2*visits[v] at every vertex and a
    connected spanning support, which is exactly what an Euler walk with
    the prescribed visit counts requires.
    """
    k = spec.k
    visits = spec.visits
    if k == 1:
        if visits[0] == 1:
            return Multiwalk(Multigraph(1), visits)
        return None

    edges = [(int(u), int(v)) for u, v in zip(*np.nonzero(np.triu(spec.allowed)))]
    adj = [[] for _ in range(k)]
    for (u, v) in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != k:
        return None  # some vertex cannot be reached at all

    walked = _walk_dp(spec.allowed, visits)
    if walked != "out_of_range":
        if walked is None:
            return None
        mg = Multigraph(k)
        for a, b in zip(walked, walked[1:]):
            mg.add(a, b, 1)
        mw = Multiwalk(mg, visits)
        mw._walk = walked
        return mw

    # necessary relaxation: the degree system with the tree requirement
    # dropped; demands 2*visits are even, so the flow tier is exact
    g0 = _even_flow(list(range(k)), edges, {v: visits[v] for v in range(k)})
    if g0 is None:
        return None
    mg0 = Multigraph(k)
    for (u, v), x in g0.items():
        mg0.add(u, v, x)
    if mg0.support_is_connected_spanning():
        return Multiwalk(mg0, visits)  # relaxation solution happens to work

    hub = _hub_path_cover(spec)
    if hub is None:
        return None
    if hub != "no_hub":
        mg = Multigraph(k)
        for a, b in zip(hub, hub[1:]):
            mg.add(a, b, 1)
        mw = Multiwalk(mg, visits)
        mw._walk = hub
        return mw

    failed = set()
    examined = 0
    degree_cap = [2 * visits[v] for v in range(k)]
    for tree in _spanning_trees(k, edges, degree_cap):
        examined += 1
        if examined > _TREE_CAP:
            raise ContractViolation("spanning tree budget exhausted undecided")
        deg = [0] * k
        for t in tree:
            u, v = edges[t]
            deg[u] += 1
            deg[v] += 1
        r = [2 * visits[v] - deg[v] for v in range(k)]
        if min(r) < 0:
            continue
        key = tuple(r)
        if key in failed:
            continue
        y = solve_degree_system(k, edges, r)
        if y is None:
            failed.add(key)
            continue
        mg = Multigraph(k)
        for t in tree:
            mg.add(*edges[t], 1)
        for (u, v), x in y.items():
            mg.add(u, v, x)
        return Multiwalk(mg, visits)
    return None
