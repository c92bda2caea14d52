"""Independent oracles and builders shared by the test modules.

Everything here avoids the library's own algorithms: feasibility is decided
by enumerating walks, optimal scatter by trying every cyclic order, and
Hamiltonicity by trying every permutation. Slow on purpose, trustworthy on
purpose.
"""

import itertools
from collections import Counter
from functools import lru_cache

import numpy as np

from scatter_tsp import CubicBipartiteGraph, Instance


def closed_walk_feasible(allowed, visits):
    """Exhaustive check for a closed walk with exact visit counts.

    Memoized DFS over (current vertex, remaining visits); only practical
    for a handful of vertices with single-digit counts.
    """
    allowed = np.asarray(allowed, dtype=bool)
    visits = [int(v) for v in visits]
    k = len(visits)
    if k == 1:
        return visits[0] == 1  # no self-loops, so one visit or nothing
    nbr = [tuple(np.flatnonzero(allowed[i]).tolist()) for i in range(k)]

    @lru_cache(maxsize=None)
    def reach(cur, rem):
        if not any(rem):
            return bool(allowed[cur, 0])
        for j in nbr[cur]:
            if rem[j]:
                nxt = rem[:j] + (rem[j] - 1,) + rem[j + 1:]
                if reach(j, nxt):
                    return True
        return False

    start = list(visits)
    start[0] -= 1
    return reach(0, tuple(start))


def validate_multiwalk(spec, mw):
    """Assert the walk is closed, edge-legal, and hits the exact counts."""
    w = mw.walk
    if len(w) == 1:
        assert spec.k == 1 and list(spec.visits) == [1]
        assert mw.walk_edge_count() == 0
        return
    assert w[0] == w[-1]
    for a, b in zip(w, w[1:]):
        assert spec.allowed[a, b], f"walk uses forbidden edge ({a}, {b})"
    counts = Counter(w[:-1])
    assert [counts.get(i, 0) for i in range(spec.k)] == list(spec.visits)
    assert len(w) - 1 == sum(spec.visits) == mw.walk_edge_count()


def brute_scatter(instance):
    """(optimal scatter, one optimal tour) by enumerating cyclic orders."""
    n = instance.n
    if n > 9:
        raise ValueError("permutation search is for n <= 9")
    m = instance.full_matrix()
    best = -1.0
    best_tour = None
    for perm in itertools.permutations(range(1, n)):
        tour = (0,) + perm
        sc = min(m[tour[i], tour[(i + 1) % n]] for i in range(n))
        if sc > best:
            best, best_tour = sc, tour
    return best, list(best_tour)


def naive_hamiltonian(adj):
    """Permutation search for a Hamiltonian cycle; n <= 10 or so."""
    adj = np.asarray(adj, dtype=bool)
    n = adj.shape[0]
    for perm in itertools.permutations(range(1, n)):
        tour = (0,) + perm
        if all(adj[tour[i], tour[(i + 1) % n]] for i in range(n)):
            return True
    return False


def random_dirac_adjacency(n, rng, p=0.55):
    """Random graph patched up to minimum degree >= n/2."""
    adj = rng.random((n, n)) < p
    adj = np.triu(adj, 1)
    adj = adj | adj.T
    need = (n + 1) // 2
    deg = adj.sum(axis=1)
    while True:
        worst = int(np.argmin(deg))
        if deg[worst] >= need:
            return adj
        cand = np.flatnonzero(~adj[worst])
        cand = cand[cand != worst]
        pick = int(cand[int(np.argmin(deg[cand]))])
        adj[worst, pick] = adj[pick, worst] = True
        deg[worst] += 1
        deg[pick] += 1


def k33():
    return CubicBipartiteGraph(6, [(i, 3 + j) for i in range(3) for j in range(3)])


def cube_graph():
    edges = [(a, a ^ (1 << b)) for a in range(8) for b in range(3) if a < a ^ (1 << b)]
    return CubicBipartiteGraph(8, edges)


def ring10():
    edges = [(i, (i + 1) % 10) for i in range(10)]
    edges += [(i, i + 5) for i in range(5)]
    return CubicBipartiteGraph(10, edges)


def two_k33():
    edges = [(i, 3 + j) for i in range(3) for j in range(3)]
    edges += [(6 + i, 9 + j) for i in range(3) for j in range(3)]
    return CubicBipartiteGraph(12, edges)


def ring_far_instance(c, k, extra, seed):
    """Cluster + inner ring + far circle, with a tour that needs cleanup.

    Returns (instance, tour, ell). The tour has scatter >= ell, the first
    cluster point is low-degree at ell, and exactly extra - 1 tour edges
    have both endpoints far from it. Requires odd k > extra and extra >= 2.
    """
    if k % 2 == 0 or k <= extra or extra < 2:
        raise ValueError("need odd k > extra >= 2")
    rng = np.random.default_rng(seed)
    cluster = rng.uniform(-0.005, 0.005, size=(c, 2))
    ang = np.arange(k) * 2 * np.pi / k
    ang = ang + rng.uniform(-np.pi / (5 * k), np.pi / (5 * k), size=k)
    ring = 0.9 * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    f = c + extra
    fang = np.arange(f) * 2 * np.pi / f
    far = 10.0 * np.stack([np.cos(fang), np.sin(fang)], axis=1)
    inst = Instance.lp(np.vstack([cluster, ring, far]), p=2.0)

    ring_ids = [c + i for i in range(k)]
    far_ids = [c + k + i for i in range(f)]
    tour = []
    for i in range(c):
        tour.append(i)
        tour.append(far_ids[i])
    tour.extend(far_ids[c:f - 1])                 # consecutive far points
    tour.extend(ring_ids[(2 * t) % k] for t in range(k))  # odd k: stride 2
    tour.append(far_ids[f - 1])
    return inst, np.array(tour, dtype=np.intp), 1.0
