"""Threshold graphs, Euler walks, Hamiltonicity machinery, matchings."""

from collections import Counter

import numpy as np
import pytest

from scatter_tsp import (
    ContractViolation,
    Instance,
    MetricThresholdView,
    Multigraph,
    ThresholdGraph,
    bc_lift,
    bipartite_max_matching,
    bondy_chvatal_closure,
    dirac_hamiltonian,
    eulerian_tour,
    generate,
    meets_threshold,
    normalize_tour,
    scatter,
    threshold_graph,
)
from helpers import random_dirac_adjacency, ring_far_instance


def test_threshold_graph_hand_case():
    inst = Instance.lp([[0.0], [1.0], [3.0], [6.0]], p=1.0)
    g = threshold_graph(inst, 2.0)
    want = [[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
    assert np.array_equal(g.adjacency, np.array(want, dtype=bool))
    assert g.threshold == 2.0
    assert g.degrees().tolist() == [2, 2, 3, 3]
    assert g.edge_count() == 5
    assert g.has_edge(0, 2) and not g.has_edge(0, 1)


def test_threshold_graph_tolerance_at_boundary():
    # edge length exactly ell, and just below within relative tolerance
    inst = Instance.lp([[0.0], [1.0], [1.0 - 1e-12]], p=1.0)
    g = threshold_graph(inst, 1.0)
    assert g.has_edge(0, 1)
    assert g.has_edge(0, 2)


def test_metric_view_matches_dense_graph():
    inst = generate("uniform", 30, 2, seed=9)
    ell = 0.4
    dense = threshold_graph(inst, ell)
    view = MetricThresholdView(inst, ell)
    for i in (0, 7, 29):
        assert np.array_equal(view.row(i), dense.row(i))
        assert view.degree_of(i) == dense.degree_of(i)
    us = np.array([0, 3, 5])
    vs = np.array([1, 4, 6])
    assert np.array_equal(view.edge_flags(us, vs), dense.edge_flags(us, vs))


def test_threshold_graph_rejects_bad_adjacency():
    with pytest.raises(ValueError):
        ThresholdGraph(np.ones((3, 3), dtype=bool))  # diagonal loops
    with pytest.raises(ValueError):
        ThresholdGraph(np.array([[0, 1], [0, 0]], dtype=bool))
    with pytest.raises(ValueError):
        ThresholdGraph(np.zeros((2, 3), dtype=bool))


def test_multigraph_basics():
    mg = Multigraph(3)
    mg.add(0, 1, 2)
    mg.add(2, 1)
    assert mg.multiplicity(1, 0) == 2
    assert mg.multiplicity(1, 2) == 1
    assert mg.degrees().tolist() == [2, 3, 1]
    assert mg.edge_total() == 3
    assert mg.support_is_connected_spanning()
    mg.add(0, 1, 0)  # zero increment changes nothing
    assert mg.multiplicity(0, 1) == 2
    assert not Multigraph(3, {(0, 1): 1}).support_is_connected_spanning()
    with pytest.raises(ValueError):
        mg.add(1, 1)
    with pytest.raises(ValueError):
        mg.add(0, 3)
    with pytest.raises(ValueError):
        mg.add(0, 1, -1)
    with pytest.raises(ValueError):
        Multigraph(0)


def _check_euler(mg):
    walk = eulerian_tour(mg)
    assert walk[0] == walk[-1]
    used = Counter()
    for a, b in zip(walk, walk[1:]):
        used[(a, b) if a < b else (b, a)] += 1
    assert used == Counter(mg.mult)
    return walk


def test_eulerian_tour_cases():
    tri = Multigraph(3, {(0, 1): 1, (1, 2): 1, (0, 2): 1})
    assert len(_check_euler(tri)) == 4

    doubled_path = Multigraph(3, {(0, 1): 2, (1, 2): 2})
    _check_euler(doubled_path)

    mixed = Multigraph(4, {(0, 1): 1, (1, 2): 1, (0, 2): 2, (2, 3): 1, (0, 3): 1})
    _check_euler(mixed)

    assert eulerian_tour(Multigraph(5)) == [0]  # no edges at all

    with pytest.raises(ValueError):
        eulerian_tour(Multigraph(3, {(0, 1): 1}))  # odd degrees
    with pytest.raises(ValueError):
        eulerian_tour(Multigraph(4, {(0, 1): 2, (2, 3): 2}))  # two components


def _check_cycle(adj, order):
    n = adj.shape[0]
    assert sorted(order.tolist()) == list(range(n))
    assert all(adj[order[i], order[(i + 1) % n]] for i in range(n))


def test_dirac_on_complete_graph():
    adj = ~np.eye(6, dtype=bool)
    _check_cycle(adj, dirac_hamiltonian(ThresholdGraph(adj)))


def test_dirac_on_random_graphs():
    rng = np.random.default_rng(12)
    for n in (7, 16, 41, 80):
        adj = random_dirac_adjacency(n, rng)
        _check_cycle(adj, dirac_hamiltonian(ThresholdGraph(adj)))


def test_dirac_rejects_low_degree():
    adj = np.zeros((6, 6), dtype=bool)
    for i in range(5):
        adj[i, i + 1] = adj[i + 1, i] = True
    adj[5, 0] = adj[0, 5] = True  # plain 6-cycle: degree 2 < 3
    with pytest.raises(ValueError):
        dirac_hamiltonian(ThresholdGraph(adj))


def test_closure_hand_case():
    # K4 minus one edge: the missing pair has degree sum 2 + 2 >= 4
    adj = ~np.eye(4, dtype=bool)
    adj[0, 1] = adj[1, 0] = False
    closed, log = bondy_chvatal_closure(ThresholdGraph(adj, 1.5))
    assert np.array_equal(closed.adjacency, ~np.eye(4, dtype=bool))
    assert log == [(0, 1)]
    assert closed.threshold == 1.5


def test_closure_fixed_point_and_log_replay():
    rng = np.random.default_rng(5)
    for n in (8, 15, 30):
        base = ThresholdGraph(random_dirac_adjacency(n, rng, p=0.5))
        closed, log = bondy_chvatal_closure(base)
        again, log2 = bondy_chvatal_closure(closed)
        assert log2 == []
        assert np.array_equal(again.adjacency, closed.adjacency)
        replay = base.adjacency.copy()
        for (u, v) in log:
            assert not replay[u, v]
            replay[u, v] = replay[v, u] = True
        assert np.array_equal(replay, closed.adjacency)


def test_closure_of_sparse_graph_can_stay_put():
    adj = np.zeros((6, 6), dtype=bool)
    for i in range(6):
        adj[i, (i + 1) % 6] = adj[(i + 1) % 6, i] = True
    closed, log = bondy_chvatal_closure(ThresholdGraph(adj))
    assert log == []
    assert np.array_equal(closed.adjacency, adj)


def test_bc_lift_round_trip():
    rng = np.random.default_rng(77)
    for n in (8, 13, 24, 40):
        base = ThresholdGraph(random_dirac_adjacency(n, rng))
        closed, log = bondy_chvatal_closure(base)
        assert closed.edge_count() == n * (n - 1) // 2  # Dirac closes up fully
        cycle = rng.permutation(n)
        lifted = bc_lift(base, log, cycle)
        _check_cycle(base.adjacency, lifted)


def test_bc_lift_input_validation():
    adj = ~np.eye(5, dtype=bool)
    adj[0, 1] = adj[1, 0] = False
    base = ThresholdGraph(adj)
    cycle = [0, 2, 1, 3, 4]
    assert bc_lift(base, [(0, 1)], cycle).tolist()  # degree sum 3+3 >= 5
    with pytest.raises(ValueError):
        bc_lift(base, [(0, 1), (1, 0)], cycle)
    with pytest.raises(ValueError):
        bc_lift(base, [(2, 3)], cycle)  # already a base edge
    with pytest.raises(ValueError):
        bc_lift(base, [(1, 1)], cycle)
    sparse = np.zeros((5, 5), dtype=bool)
    for i in range(4):
        sparse[i, i + 1] = sparse[i + 1, i] = True
    sparse[4, 0] = sparse[0, 4] = True
    with pytest.raises(ValueError):
        bc_lift(ThresholdGraph(sparse), [(0, 2)], cycle)  # degree sum 4 < 5


def test_bipartite_matching_hand_cases():
    # complete 3 x 3: a perfect matching of size 3
    full = [(l, r) for l in range(3) for r in range(3)]
    m = bipartite_max_matching(3, 3, full)
    assert len(m) == 3
    assert m == sorted(m)
    assert len({l for l, _ in m}) == 3 and len({r for _, r in m}) == 3

    # path shape: left {0,1} both only like right 0
    m = bipartite_max_matching(2, 2, [(0, 0), (1, 0)])
    assert len(m) == 1

    assert bipartite_max_matching(2, 2, []) == []

    # Hall violation: 3 lefts share 2 rights
    m = bipartite_max_matching(3, 2, [(l, r) for l in range(3) for r in range(2)])
    assert len(m) == 2

    with pytest.raises(ValueError):
        bipartite_max_matching(2, 2, [(0, 2)])
    with pytest.raises(ValueError):
        bipartite_max_matching(2, 2, [(-1, 0)])


def test_bipartite_matching_random_vs_greedy_bound():
    rng = np.random.default_rng(3)
    for _ in range(20):
        l = int(rng.integers(1, 9))
        r = int(rng.integers(1, 9))
        mask = rng.random((l, r)) < 0.4
        edges = [(i, j) for i in range(l) for j in range(r) if mask[i, j]]
        m = bipartite_max_matching(l, r, edges)
        assert len({a for a, _ in m}) == len(m) == len({b for _, b in m})
        for (a, b) in m:
            assert mask[a, b]
        # maximum matching is at least any greedy one
        taken_l, taken_r, greedy = set(), set(), 0
        for (a, b) in edges:
            if a not in taken_l and b not in taken_r:
                taken_l.add(a)
                taken_r.add(b)
                greedy += 1
        assert len(m) >= greedy


def test_normalize_tour_cleans_far_edges():
    inst, tour, ell = ring_far_instance(c=4, k=5, extra=3, seed=0)
    p = 0  # cluster point: ball(p, ell) holds cluster + ring, a majority
    dp = inst.distance_rows([p])[0]
    assert 2 * int(np.sum(~meets_threshold(dp, ell))) > inst.n
    before = tour
    a, b = before, np.roll(before, -1)
    offending = meets_threshold(dp[a], 2 * ell) & meets_threshold(dp[b], 2 * ell)
    assert int(offending.sum()) == 2  # extra - 1 far-far edges by design
    assert meets_threshold(scatter(inst, before), ell)

    after = normalize_tour(inst, before, ell, p)
    a, b = after, np.roll(after, -1)
    still = meets_threshold(dp[a], 2 * ell) & meets_threshold(dp[b], 2 * ell)
    assert not still.any()
    assert meets_threshold(scatter(inst, after), ell)
    assert sorted(after.tolist()) == list(range(inst.n))


def test_normalize_tour_preconditions():
    inst, tour, ell = ring_far_instance(c=4, k=5, extra=3, seed=1)
    far_point = inst.n - 1
    with pytest.raises(ValueError):
        normalize_tour(inst, tour, ell, far_point)  # not a low-degree point
    with pytest.raises(ValueError):
        normalize_tour(inst, tour, 20.0, 0)  # scatter falls below this ell
    with pytest.raises(ValueError):
        normalize_tour(inst, tour, -1.0, 0)


def test_normalize_tour_no_op_when_clean():
    inst, tour, ell = ring_far_instance(c=4, k=7, extra=2, seed=2)
    out = normalize_tour(inst, tour, ell, 0)
    again = normalize_tour(inst, out, ell, 0)
    assert np.array_equal(out, again)
