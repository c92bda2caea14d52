"""Exact small-instance solvers used as ground truth.

Hamiltonicity runs a subset dynamic program over (visited set, endpoint)
states; the max-scatter oracle binary-searches the candidate distances,
checking Hamiltonicity of each threshold graph. Caps are enforced because
both tables grow as 2^n.
"""

from dataclasses import dataclass

import numpy as np

from .instance import ContractViolation, Instance, candidate_distances, meets_threshold, scatter
from .graphs import ThresholdGraph

_BRUTE_CAP = 16
_HAM_CAP = 24


@dataclass
class OracleResult:
    opt: float
    tour: np.ndarray


def _popcount_u32(a: np.ndarray) -> np.ndarray:
    a = a - ((a >> 1) & np.uint32(0x55555555))
    a = (a & np.uint32(0x33333333)) + ((a >> 2) & np.uint32(0x33333333))
    a = (a + (a >> 4)) & np.uint32(0x0F0F0F0F)
    return (a * np.uint32(0x01010101)) >> 24


class _HamDP:
    """Completion table C[mask] (bit v): a path can start at v, cover exactly
    `mask` (a subset of vertices 1..n-1 not containing v), and stop at a
    neighbor of vertex 0. Hamiltonicity of the whole graph is bit 0 of the
    full mask, and greedy lexicographic reconstruction reads the same table.
    """

    def __init__(self, adj: np.ndarray):
        self.adj = adj
        self.n = n = adj.shape[0]
        self.adjmask = np.zeros(n, dtype=np.uint32)
        for v in range(n):
            self.adjmask[v] = np.uint32(sum(1 << u for u in range(n) if adj[v, u]))
        size = 1 << (n - 1)  # masks over vertices 1..n-1, stored at mask >> 1
        idx = np.arange(size, dtype=np.uint32)
        order = np.argsort(_popcount_u32(idx), kind="stable")
        counts = np.bincount(_popcount_u32(idx), minlength=n)
        self.layers = []
        at = 0
        for k in range(n):
            self.layers.append(order[at:at + counts[k]].astype(np.uint32))
            at += counts[k]
        c = np.zeros(size, dtype=np.uint32)
        c[0] = self.adjmask[0]
        for k in range(1, n):
            members = self.layers[k]
            for u in range(1, n):
                ubit = np.uint32(1 << (u - 1))  # bit of u within the index encoding
                sel = members[(members & ubit) != 0]
                if len(sel) == 0:
                    continue
                prev = c[sel - ubit]
                hit = sel[(prev >> np.uint32(u)) & np.uint32(1) == 1]
                if len(hit):
                    c[hit] = c[hit] | self.adjmask[u]
        self.c = c

    def hamiltonian(self) -> bool:
        full = (1 << (self.n - 1)) - 1
        return bool((int(self.c[full]) >> 0) & 1)

    def reconstruct(self) -> np.ndarray:
        """Lexicographically smallest Hamiltonian cycle as a sequence from 0."""
        n = self.n
        rem = (1 << n) - 2  # vertices 1..n-1 outstanding
        cur = 0
        tour = [0]
        for _ in range(n - 1):
            for u in range(1, n):
                bit = 1 << u
                if not (rem & bit) or not self.adj[cur, u]:
                    continue
                nxt = rem & ~bit
                if (int(self.c[nxt >> 1]) >> u) & 1:
                    tour.append(u)
                    rem = nxt
                    cur = u
                    break
            else:
                raise ContractViolation("reconstruction dead-ended mid-tour")
        if not self.adj[cur, 0]:
            raise ContractViolation("reconstructed path does not close")
        return np.array(tour, dtype=np.intp)


def _as_adjacency(graph) -> np.ndarray:
    if isinstance(graph, ThresholdGraph):
        return graph.adjacency
    adj = np.asarray(graph, dtype=bool)
    if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
        raise ValueError("adjacency must be square")
    return adj


def is_hamiltonian(graph):
    """The lexicographically smallest Hamiltonian cycle, or None."""
    adj = _as_adjacency(graph)
    n = adj.shape[0]
    if n > _HAM_CAP:
        raise ValueError(f"n={n} exceeds the Hamiltonicity cap {_HAM_CAP}")
    if n < 3:
        raise ValueError("need at least 3 vertices")
    dp = _HamDP(adj)
    if not dp.hamiltonian():
        return None
    return dp.reconstruct()


def brute_force_mstsp(instance: Instance) -> OracleResult:
    """Exact maximum scatter via binary search on the candidate distances.

    Tours with scatter >= ell are exactly Hamiltonian cycles of the
    threshold graph at ell, and raising ell only removes edges, so
    feasibility is monotone and the largest feasible candidate is OPT.
    """
    n = instance.n
    if n > _BRUTE_CAP:
        raise ValueError(f"n={n} exceeds the oracle cap {_BRUTE_CAP}")
    dist = instance.full_matrix()
    cands = candidate_distances(instance)

    def probe(i):
        adj = meets_threshold(dist, cands[i])
        np.fill_diagonal(adj, False)
        dp = _HamDP(adj)
        return dp.reconstruct() if dp.hamiltonian() else None

    lo = 0
    best = probe(0)
    if best is None:
        raise ContractViolation("threshold graph at the smallest candidate "
                                "must be complete, but is not Hamiltonian")
    hi = len(cands) - 1
    top = probe(hi) if hi > lo else None
    if hi == lo or top is not None:
        if top is not None:
            lo, best = hi, top
        return OracleResult(opt=scatter(instance, best), tour=best)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        t = probe(mid)
        if t is None:
            hi = mid
        else:
            lo, best = mid, t
    return OracleResult(opt=scatter(instance, best), tour=best)
