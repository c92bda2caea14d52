"""Scatter maximization via threshold-graph decisions.

A tour with scatter at least ell is exactly a Hamiltonian cycle of the
graph keeping pairs at distance >= ell, so the optimum is found by binary
search over the sorted pairwise distances, with an approximate decision
procedure at each probe.

The decision dichotomy: either no point has a majority of the others
within distance ell, in which case every threshold degree is at least n/2
and a cycle is built constructively (Dirac), or some point p does. Around
such a p, any scatter-ell tour can be rewritten to avoid edges lying
entirely far from p, which makes the instance collapse: points within 3*ell
of p are grouped by a delta-net, points beyond act interchangeably as a
single hub, and feasibility reduces to a many-visits walk on the quotient
graph. Expanding a walk back to points loses at most 2*delta per edge on
net edges; hub edges that land too close to the 2*ell boundary are removed
afterwards by cycle rotations, both endpoints being far from p and hence
of high threshold degree. With delta = epsilon*ell/4 and quotient edges
admitted at ell - 2*delta, a Yes answer always carries a tour of scatter
at least (1 - epsilon)*ell, while No certifies that no scatter-ell tour
exists.
"""

from dataclasses import dataclass, field

import numpy as np

from .instance import (
    ContractViolation,
    Instance,
    candidate_distances,
    meets_threshold,
    scatter,
    tour_edge_lengths,
    validate_tour,
)
from .graphs import (
    MetricThresholdView,
    bc_lift,
    dirac_hamiltonian,
    threshold_graph,
)
from .nets import greedy_delta_net
from .many_visits import VisitSpec, many_visits_tour

_SCAN_BLOCK = 256


@dataclass
class DecisionParams:
    """Probe threshold and accuracy; the net spacing is derived from both."""

    ell: float
    epsilon: float
    net_delta: float = field(init=False)

    def __post_init__(self):
        ell = float(self.ell)
        eps = float(self.epsilon)
        if not np.isfinite(ell) or ell <= 0.0:
            raise ValueError("ell must be positive and finite")
        if not 0.0 < eps < 1.0:
            raise ValueError("epsilon must lie strictly between 0 and 1")
        self.ell = ell
        self.epsilon = eps
        # quarter of the slack: two rounding hops on each quotient edge
        # plus the relaxed edge threshold together stay within epsilon*ell
        self.net_delta = eps * ell / 4.0


@dataclass
class LowDegreeContext:
    """A majority point p and the induced split of the instance."""

    p: int
    near: np.ndarray     # point ids within 3*ell of p, ascending
    far: np.ndarray      # the rest, ascending; interchangeable hub points

    def far_count(self) -> int:
        return len(self.far)


@dataclass
class DecisionOutcome:
    answer: bool
    witness: np.ndarray | None
    witness_scatter: float | None
    branch: str                      # 'dirac' or 'many_visits'
    net_size: int | None = None


def find_low_degree_point(instance: Instance, ell: float) -> int | None:
    """Lowest-index point with more than n/2 points within distance ell."""
    n = instance.n
    for start in range(0, n, _SCAN_BLOCK):
        ids = range(start, min(start + _SCAN_BLOCK, n))
        rows = instance.distance_rows(ids)
        inside = ~meets_threshold(rows, ell)
        counts = inside.sum(axis=1)
        hit = np.flatnonzero(2 * counts > n)
        if len(hit):
            return start + int(hit[0])
    return None


def low_degree_context(instance: Instance, p: int, ell: float) -> LowDegreeContext:
    d_p = instance.distance_rows([p])[0]
    far_mask = meets_threshold(d_p, 3.0 * ell)
    return LowDegreeContext(p=int(p),
                            near=np.flatnonzero(~far_mask),
                            far=np.flatnonzero(far_mask))


def _validated(instance, params, tour, branch, net_size):
    wit_thresh = (1.0 - params.epsilon) * params.ell
    tour = validate_tour(instance.n, tour)
    sc = scatter(instance, tour)
    if not meets_threshold(sc, wit_thresh):
        raise ContractViolation(
            f"witness scatter {sc} falls below (1-epsilon)*ell = {wit_thresh}")
    return DecisionOutcome(answer=True, witness=tour, witness_scatter=sc,
                           branch=branch, net_size=net_size)


def decide_scatter(instance: Instance, params: DecisionParams) -> DecisionOutcome:
    """Yes with a (1-epsilon)*ell witness, or No certifying OPT < ell."""
    n = instance.n
    ell = params.ell
    p = find_low_degree_point(instance, ell)

    if p is None:
        # every threshold degree is >= n/2: constructive Dirac cycle
        tour = dirac_hamiltonian(threshold_graph(instance, ell))
        return _validated(instance, params, tour, "dirac", None)

    ctx = low_degree_context(instance, p, ell)
    net = greedy_delta_net(instance, ctx.near, params.net_delta)
    centers = net.center_ids
    k = net.size()
    nq = ctx.far_count()
    kk = k + (1 if nq else 0)

    allowed = np.zeros((kk, kk), dtype=bool)
    cdist = instance.distance_rows(centers)[:, centers]
    tau = ell - 2.0 * params.net_delta
    cc = meets_threshold(cdist, tau)
    np.fill_diagonal(cc, False)
    allowed[:k, :k] = cc
    if nq:
        # hub stands for all far points; a short expanded hub edge has both
        # endpoints beyond 2*ell of p and is lifted out afterwards
        allowed[k, :k] = True
        allowed[:k, k] = True

    visits = [len(net.preimages[int(c)]) for c in centers]
    if nq:
        visits.append(nq)
    walk_res = many_visits_tour(VisitSpec(allowed, visits))
    if walk_res is None:
        return DecisionOutcome(answer=False, witness=None, witness_scatter=None,
                               branch="many_visits", net_size=k)

    # expand quotient vertices back to points, each visit taking the next
    # unused preimage point in ascending id order
    pools = [iter(net.preimages[int(c)].tolist()) for c in centers]
    if nq:
        pools.append(iter(ctx.far.tolist()))
    tour = np.fromiter((next(pools[v]) for v in walk_res.walk[:-1]),
                       dtype=np.intp, count=n)

    wit_thresh = (1.0 - params.epsilon) * ell
    lengths = tour_edge_lengths(instance, tour)
    short = np.flatnonzero(~meets_threshold(lengths, wit_thresh))
    if len(short):
        log = [(int(tour[i]), int(tour[(i + 1) % n])) for i in short]
        base = MetricThresholdView(instance, wit_thresh)
        try:
            tour = bc_lift(base, log, tour)
        except ValueError as exc:
            raise ContractViolation(
                f"lift of {len(log)} short hub edges failed: {exc}") from exc
    return _validated(instance, params, tour, "many_visits", k)


def maximize_scatter(instance: Instance, epsilon: float):
    """(ell_hat, tour): OPT <= ell_hat and scatter(tour) >= (1-epsilon)*ell_hat."""
    ell_hat, tour, _ = maximize_scatter_report(instance, epsilon)
    return ell_hat, tour


def maximize_scatter_report(instance: Instance, epsilon: float):
    """As maximize_scatter, plus one record per probe for diagnostics."""
    if not 0.0 < float(epsilon) < 1.0:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    n = instance.n
    cand = candidate_distances(instance)
    probes = []

    def probe(i):
        out = decide_scatter(instance, DecisionParams(float(cand[i]), epsilon))
        probes.append({"ell": float(cand[i]), "answer": out.answer,
                       "branch": out.branch, "net_size": out.net_size})
        return out

    if len(cand) == 1 and cand[0] == 0.0:
        return 0.0, np.arange(n, dtype=np.intp), probes

    top = probe(len(cand) - 1)
    if top.answer:
        return float(cand[-1]), top.witness, probes

    if cand[0] == 0.0:
        lo, best = 0, np.arange(n, dtype=np.intp)  # duplicates: scatter 0 tour
    else:
        bottom = probe(0)
        if not bottom.answer:
            raise ContractViolation(
                "decision rejected the minimum pairwise distance, which every "
                "tour attains")
        lo, best = 0, bottom.witness
    hi = len(cand) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        out = probe(mid)
        if out.answer:
            lo, best = mid, out.witness
        else:
            hi = mid
    return float(cand[lo]), best, probes
