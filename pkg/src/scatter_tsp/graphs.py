"""Threshold graphs and the Hamiltonicity toolbox.

Contains the constructive Dirac cycle builder, Bondy-Chvatal closure with
edge lifting, Eulerian tours of multigraphs, Hopcroft-Karp bipartite
matching, and the ball exchange that normalizes a high-scatter tour around
a low-degree point.
"""

import numpy as np

from .instance import (
    ContractViolation,
    Instance,
    meets_threshold,
    validate_tour,
)

_BLOCK = 256

# chronological list of (u, v) edges layered on top of a base graph,
# consumed by bc_lift in reverse
EdgeAdditionLog = list


class ThresholdGraph:
    """Simple graph on n vertices held as a dense symmetric boolean matrix.

    `threshold` records the length it was built from and is informational.
    """

    def __init__(self, adjacency, threshold: float = 0.0):
        adj = np.asarray(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("adjacency must be square")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(adj)):
            raise ValueError("no self-loops allowed")
        self.n = adj.shape[0]
        self.adjacency = adj
        self.threshold = float(threshold)

    def row(self, i: int) -> np.ndarray:
        return self.adjacency[i]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def edge_flags(self, us, vs) -> np.ndarray:
        return self.adjacency[np.asarray(us), np.asarray(vs)]

    def degree_of(self, i: int) -> int:
        return int(self.adjacency[i].sum())

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def copy(self) -> "ThresholdGraph":
        return ThresholdGraph(self.adjacency.copy(), self.threshold)

    def debug_edge_list(self) -> str:
        us, vs = np.nonzero(np.triu(self.adjacency))
        lines = [f"{self.n}"] + [f"{u} {v}" for u, v in zip(us, vs)]
        return "\n".join(lines)


class MetricThresholdView:
    """Threshold graph over an instance, with rows computed on demand.

    Behaves like ThresholdGraph for read access but never materializes the
    n x n matrix, which is what the large-n lifting path needs.
    """

    def __init__(self, instance: Instance, threshold: float):
        self.instance = instance
        self.n = instance.n
        self.threshold = float(threshold)

    def row(self, i: int) -> np.ndarray:
        r = meets_threshold(self.instance.distance_rows([i])[0], self.threshold)
        r[i] = False
        return r

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        d = self.instance.distance_rows([i])[0, j]
        return bool(meets_threshold(d, self.threshold))

    def edge_flags(self, us, vs) -> np.ndarray:
        d = pair_distances(self.instance, us, vs)
        return meets_threshold(d, self.threshold) & (np.asarray(us) != np.asarray(vs))

    def degree_of(self, i: int) -> int:
        return int(self.row(i).sum())


def pair_distances(instance: Instance, us, vs) -> np.ndarray:
    """Elementwise distances d(us[t], vs[t])."""
    us = np.asarray(us, dtype=np.intp)
    vs = np.asarray(vs, dtype=np.intp)
    if instance.metric_kind == "explicit":
        return instance.matrix[us, vs]
    a = instance.points[us]
    b = instance.points[vs]
    if instance.metric_kind == "hamming":
        return np.abs(a.astype(np.int64) - b.astype(np.int64)).sum(axis=1).astype(float)
    diff = np.abs(a - b)
    p = instance.p
    if p == 2.0:
        return np.sqrt((diff * diff).sum(axis=1))
    if np.isinf(p):
        return diff.max(axis=1)
    if p == 1.0:
        return diff.sum(axis=1)
    return (diff ** p).sum(axis=1) ** (1.0 / p)


def threshold_graph(instance: Instance, ell: float) -> ThresholdGraph:
    """Graph with an edge wherever the pair distance is >= ell (with tolerance)."""
    if ell < 0:
        raise ValueError(f"threshold must be nonnegative, got {ell}")
    n = instance.n
    adj = np.empty((n, n), dtype=bool)
    for lo in range(0, n, _BLOCK):
        ids = np.arange(lo, min(lo + _BLOCK, n))
        adj[lo:lo + len(ids)] = meets_threshold(instance.distance_rows(ids), ell)
    np.fill_diagonal(adj, False)
    return ThresholdGraph(adj, ell)


class Multigraph:
    """Multigraph on k vertices: unordered pairs with nonnegative multiplicities."""

    def __init__(self, k: int, multiplicity=None):
        if k < 1:
            raise ValueError("need k >= 1")
        self.k = k
        self.mult = {}
        if multiplicity:
            for (u, v), m in multiplicity.items():
                self.add(u, v, m)

    def add(self, u: int, v: int, m: int = 1) -> None:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        if not (0 <= u < self.k and 0 <= v < self.k):
            raise ValueError(f"vertex pair ({u}, {v}) out of range")
        if m < 0:
            raise ValueError("multiplicity must be >= 0")
        key = (u, v) if u < v else (v, u)
        new = self.mult.get(key, 0) + int(m)
        if new > 0:
            self.mult[key] = new
        elif key in self.mult:
            del self.mult[key]

    def multiplicity(self, u: int, v: int) -> int:
        key = (u, v) if u < v else (v, u)
        return self.mult.get(key, 0)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.k, dtype=object)
        for (u, v), m in self.mult.items():
            deg[u] += m
            deg[v] += m
        return deg

    def edge_total(self) -> int:
        return sum(self.mult.values())

    def support_is_connected_spanning(self) -> bool:
        """True when the positive edges connect all k vertices."""
        if self.k == 1:
            return True
        nbrs = {}
        for (u, v) in self.mult:
            nbrs.setdefault(u, []).append(v)
            nbrs.setdefault(v, []).append(u)
        if len(nbrs) < self.k:
            return False
        seen = {0}
        stack = [0]
        while stack:
            for w in nbrs.get(stack.pop(), ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.k


def eulerian_tour(graph: Multigraph) -> list:
    """Closed walk traversing every edge exactly multiplicity-many times.

    Returns a vertex list that starts and ends at the same vertex; its
    number of edges equals the total multiplicity. Hierholzer construction.
    """
    deg = graph.degrees()
    odd = [v for v in range(graph.k) if deg[v] % 2 == 1]
    if odd:
        raise ValueError(f"vertex {odd[0]} has odd degree {deg[odd[0]]}")
    positive = [v for v in range(graph.k) if deg[v] > 0]
    if not positive:
        return [0]
    # connectivity of the positive-degree part
    nbrs = {}
    for (u, v) in graph.mult:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    seen = {positive[0]}
    stack = [positive[0]]
    while stack:
        for w in nbrs.get(stack.pop(), ()):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(positive):
        raise ValueError("positive-degree subgraph is disconnected")

    remaining = dict(graph.mult)
    adj = {v: sorted(nbrs[v]) for v in positive}
    ptr = {v: 0 for v in positive}
    start = positive[0]
    stack = [start]
    circuit = []
    while stack:
        v = stack[-1]
        lst = adj[v]
        i = ptr[v]
        while i < len(lst):
            u = lst[i]
            key = (v, u) if v < u else (u, v)
            if remaining.get(key, 0) > 0:
                break
            i += 1
        ptr[v] = i
        if i == len(lst):
            circuit.append(stack.pop())
        else:
            u = lst[i]
            key = (v, u) if v < u else (u, v)
            remaining[key] -= 1
            stack.append(u)
    circuit.reverse()
    if len(circuit) != graph.edge_total() + 1:
        raise ContractViolation("Euler walk failed to use every edge")
    return circuit


def dirac_hamiltonian(graph: ThresholdGraph) -> np.ndarray:
    """Hamiltonian cycle of a graph with minimum degree >= n/2.

    Starts from the identity cyclic order and repeatedly repairs a
    non-adjacent consecutive pair with the classic crossing rotation; the
    degree condition guarantees each repair exists and each strictly
    reduces the number of bad pairs.
    """
    n = graph.n
    if n < 3:
        raise ValueError("need at least 3 vertices")
    deg = graph.degrees()
    worst = int(np.argmin(deg))
    if 2 * int(deg[worst]) < n:
        raise ValueError(
            f"vertex {worst} has degree {int(deg[worst])} < n/2 = {n / 2}")
    return _dirac_core(graph.adjacency)


def _dirac_core(adj: np.ndarray) -> np.ndarray:
    n = adj.shape[0]
    order = np.arange(n)
    nxt = np.roll(order, -1)
    bad_mask = ~adj[order, nxt]
    bad = {_key(int(order[i]), int(nxt[i])) for i in np.nonzero(bad_mask)[0]}
    pos = np.empty(n, dtype=np.intp)
    pos[order] = np.arange(n)
    guard = len(bad) + 1
    while bad:
        guard -= 1
        if guard < 0:
            raise ContractViolation("cycle repair failed to make progress")
        a, b = bad.pop()
        i = pos[a]
        if order[(i + 1) % n] != b:
            a, b = b, a
            i = pos[a]
        order = np.roll(order, -i)
        # now order[0] = a, order[1] = b, pair (a, b) is a non-edge
        cand = adj[a, order] & adj[b, np.roll(order, -1)]
        cand[0] = False
        j = int(np.argmax(cand))
        if not cand[j]:
            raise ContractViolation(
                f"no crossing rotation for pair ({a}, {b}); degree condition broken")
        old = _key(int(order[j]), int(order[(j + 1) % n]))
        bad.discard(old)
        order[1:j + 1] = order[j:0:-1]
        pos[order] = np.arange(n)
    return order


def _key(u: int, v: int):
    return (u, v) if u < v else (v, u)


def bondy_chvatal_closure(graph: ThresholdGraph):
    """Bondy-Chvatal closure and the log of added edges.

    Repeatedly adds every non-edge whose endpoint degree sum is at least n
    until a fixed point; the closure is unique, so the scan order only
    affects the log, not the result.
    """
    n = graph.n
    adj = graph.adjacency.copy()
    log = []
    while True:
        deg = adj.sum(axis=1)
        need = deg[:, None] + deg[None, :] >= n
        addable = need & ~adj
        np.fill_diagonal(addable, False)
        us, vs = np.nonzero(np.triu(addable))
        if len(us) == 0:
            break
        for u, v in zip(us, vs):
            log.append((int(u), int(v)))
        adj[us, vs] = True
        adj[vs, us] = True
    return ThresholdGraph(adj, graph.threshold), log


class _LiftGraph:
    """Base graph plus a mutable overlay of added edges; read-only on the base."""

    def __init__(self, base, added):
        self.base = base
        self.n = base.n
        self.extra = {}
        for (u, v) in added:
            self.extra.setdefault(u, set()).add(v)
            self.extra.setdefault(v, set()).add(u)

    def remove(self, u: int, v: int) -> None:
        self.extra[u].discard(v)
        self.extra[v].discard(u)

    def row(self, i: int) -> np.ndarray:
        r = np.array(self.base.row(i), dtype=bool)
        extra = self.extra.get(i)
        if extra:
            r[list(extra)] = True
        return r


def bc_lift(base, added, cycle) -> np.ndarray:
    """Turn a Hamiltonian cycle of base+added into one of base alone.

    Added edges are removed in reverse log order; whenever the cycle still
    uses the removed edge, the endpoint degree sum (>= n in the graph at
    that stage) yields a crossing rotation that rewires around it.
    """
    n = base.n
    tour = validate_tour(n, cycle)
    log = []
    seen = set()
    for (u, v) in added:
        e = _key(int(u), int(v))
        if e[0] == e[1]:
            raise ValueError(f"self-loop ({u}, {v}) in addition log")
        if e in seen:
            raise ValueError(f"edge {e} appears twice in addition log")
        if base.has_edge(*e):
            raise ValueError(f"added edge {e} is already in the base graph")
        seen.add(e)
        log.append(e)

    # degree sums are checked against base plus the *earlier* log entries,
    # the graph each addition actually extended
    base_deg = {}
    for w in sorted({w for e in log for w in e}):
        base_deg[w] = base.degree_of(w)
    extra_deg = {w: 0 for w in base_deg}
    for idx, (u, v) in enumerate(log):
        du = base_deg[u] + extra_deg[u]
        dv = base_deg[v] + extra_deg[v]
        if du + dv < n:
            raise ValueError(
                f"log entry {idx}: edge ({u}, {v}) has degree sum {du + dv} < n={n}")
        extra_deg[u] += 1
        extra_deg[v] += 1

    lift = _LiftGraph(base, log)
    for (u, v) in reversed(log):
        lift.remove(u, v)
        pu = int(np.nonzero(tour == u)[0][0])
        if tour[(pu + 1) % n] == v:
            path = np.roll(tour, -((pu + 1) % n))  # v ... u
        elif tour[pu - 1] == v:
            path = np.roll(tour, -pu)              # u ... v
        else:
            continue
        first = lift.row(path[0])[path]
        last = lift.row(path[-1])[path]
        cand = last[:-1] & first[1:]
        j = int(np.argmax(cand))
        if not cand[j]:
            raise ContractViolation(
                f"no rotation found while lifting edge ({u}, {v})")
        tour = np.concatenate([path[:j + 1], path[j + 1:][::-1]])

    flags = base.edge_flags(tour, np.roll(tour, -1))
    if not flags.all():
        t = int(np.argmin(flags))
        raise ContractViolation(
            f"lifted tour still uses non-base edge ({tour[t]}, {tour[(t + 1) % n]})")
    return tour


def bipartite_max_matching(left: int, right: int, edges) -> list:
    """Maximum matching of a bipartite graph, Hopcroft-Karp style.

    `edges` is a list of (l, r) pairs with 0 <= l < left, 0 <= r < right;
    returns the matching as sorted (l, r) pairs.
    """
    adj = [[] for _ in range(left)]
    for (l, r) in edges:
        if not (0 <= l < left and 0 <= r < right):
            raise ValueError(f"edge ({l}, {r}) out of range")
        adj[l].append(r)
    INF = float("inf")
    match_l = [-1] * left
    match_r = [-1] * right

    def bfs():
        dist = [INF] * left
        queue = [l for l in range(left) if match_l[l] == -1]
        for l in queue:
            dist[l] = 0
        found = False
        qi = 0
        while qi < len(queue):
            l = queue[qi]
            qi += 1
            for r in adj[l]:
                nl = match_r[r]
                if nl == -1:
                    found = True
                elif dist[nl] is INF:
                    dist[nl] = dist[l] + 1
                    queue.append(nl)
        return dist, found

    def dfs(l, dist):
        for r in adj[l]:
            nl = match_r[r]
            if nl == -1 or (dist[nl] == dist[l] + 1 and dfs(nl, dist)):
                match_l[l] = r
                match_r[r] = l
                return True
        dist[l] = INF
        return False

    while True:
        dist, found = bfs()
        if not found:
            break
        for l in range(left):
            if match_l[l] == -1:
                dfs(l, dist)
    return sorted((l, r) for l, r in enumerate(match_l) if r != -1)


def normalize_tour(instance: Instance, tour, ell: float, p: int) -> np.ndarray:
    """Exchange away every tour edge lying entirely far from a low-degree point.

    Preconditions: scatter(tour) >= ell and the open radius-ell ball around
    p holds more than n/2 points. Each exchange pairs an offending edge
    (both endpoints at distance >= 2*ell from p) with an edge inside the
    ball and 2-opts them; the new edges each keep one endpoint near p, so
    the offending count strictly drops and at most n swaps run.
    """
    n = instance.n
    order = validate_tour(n, tour).copy()
    if ell <= 0:
        raise ValueError("ell must be positive")
    dp = instance.distance_rows([p])[0]
    inside = ~meets_threshold(dp, ell)       # open ball B_p
    outside2 = meets_threshold(dp, 2.0 * ell)  # complement of the 2*ell ball
    if 2 * int(inside.sum()) <= n:
        raise ValueError(f"point {p} is not low-degree for ell={ell}")
    edge_d = pair_distances(instance, order, np.roll(order, -1))
    if not meets_threshold(edge_d, ell).all():
        raise ValueError("tour scatter is below ell")

    for _ in range(n + 1):
        a, b = order, np.roll(order, -1)
        offending = outside2[a] & outside2[b]
        if not offending.any():
            return order
        i = int(np.argmax(offending))
        order = np.roll(order, -((i + 1) % n))
        # offending edge now wraps: (order[-1], order[0])
        a, b = order, np.roll(order, -1)
        inner = inside[a] & inside[b]
        inner[-1] = False
        j = int(np.argmax(inner))
        if not inner[j]:
            raise ContractViolation(
                "no tour edge inside the ball; the pigeonhole bound failed")
        # 2-opt: reverse the prefix ending at the inside edge, which swaps
        # edges (x,y)=(order[-1],order[0]) and (z,t)=(order[j],order[j+1])
        # for (x,z) and (y,t), each with one endpoint inside the ball
        order[:j + 1] = order[j::-1]
    raise ContractViolation("exchange loop exceeded n swaps")
