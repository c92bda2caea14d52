"""Closed walks with prescribed visit counts over an allowed-edge graph."""

import time

import numpy as np
import pytest

from scatter_tsp import VisitSpec, many_visits_tour, solve_degree_system
from helpers import closed_walk_feasible, validate_multiwalk


def spec_of(edges, visits):
    k = len(visits)
    adj = np.zeros((k, k), dtype=bool)
    for (u, v) in edges:
        adj[u, v] = adj[v, u] = True
    return VisitSpec(adj, visits)


def test_visit_spec_validation():
    with pytest.raises(ValueError):
        VisitSpec(np.zeros((2, 3), dtype=bool), [1, 1])
    with pytest.raises(ValueError):
        VisitSpec(np.array([[0, 1], [0, 0]], dtype=bool), [1, 1])
    with pytest.raises(ValueError):
        VisitSpec(np.eye(2, dtype=bool), [1, 1])
    with pytest.raises(ValueError):
        VisitSpec(np.zeros((2, 2), dtype=bool), [1])
    with pytest.raises(ValueError):
        VisitSpec(np.zeros((2, 2), dtype=bool), [1, 0])
    with pytest.raises(ValueError):
        VisitSpec(np.zeros((0, 0), dtype=bool), [])


def test_single_vertex():
    mw = many_visits_tour(spec_of([], [1]))
    assert mw is not None
    validate_multiwalk(spec_of([], [1]), mw)
    assert mw.visit_counts() == {0: 1}
    assert many_visits_tour(spec_of([], [2])) is None  # no loops to reuse


def test_two_vertices():
    assert many_visits_tour(spec_of([], [1, 1])) is None  # no edge at all
    mw = many_visits_tour(spec_of([(0, 1)], [1, 1]))
    validate_multiwalk(spec_of([(0, 1)], [1, 1]), mw)
    mw = many_visits_tour(spec_of([(0, 1)], [3, 3]))
    validate_multiwalk(spec_of([(0, 1)], [3, 3]), mw)
    assert many_visits_tour(spec_of([(0, 1)], [2, 1])) is None  # counts clash


def test_star_needs_center_to_match_leaves():
    star = [(0, i) for i in (1, 2, 3)]
    assert many_visits_tour(spec_of(star, [1, 1, 1, 1])) is None
    mw = many_visits_tour(spec_of(star, [3, 1, 1, 1]))  # center between leaves
    validate_multiwalk(spec_of(star, [3, 1, 1, 1]), mw)
    assert many_visits_tour(spec_of(star, [4, 1, 1, 1])) is None


def test_disconnected_support_is_infeasible():
    assert many_visits_tour(spec_of([(0, 1), (2, 3)], [1, 1, 1, 1])) is None


def test_matches_walk_enumeration_on_random_specs():
    rng = np.random.default_rng(42)
    agree = 0
    for _ in range(60):
        k = int(rng.integers(2, 5))
        adj = np.triu(rng.random((k, k)) < 0.6, 1)
        adj = adj | adj.T
        visits = [int(v) for v in rng.integers(1, 4, size=k)]
        spec = VisitSpec(adj, visits)
        want = closed_walk_feasible(adj, visits)
        got = many_visits_tour(spec)
        assert (got is not None) == want
        if got is not None:
            validate_multiwalk(spec, got)
            agree += 1
    assert agree >= 5  # the sample contains feasible specs, not only refusals


def test_huge_counts_stay_lazy():
    cyc = [(i, (i + 1) % 6) for i in range(6)]
    visits = [10 ** 6] * 6
    t0 = time.perf_counter()
    mw = many_visits_tour(spec_of(cyc, visits))
    elapsed = time.perf_counter() - t0
    assert mw is not None
    assert elapsed < 1.0
    assert mw.walk_edge_count() == 6 * 10 ** 6
    deg = mw.multiplicities.degrees()
    assert all(int(d) == 2 * 10 ** 6 for d in deg)
    assert mw.multiplicities.support_is_connected_spanning()
    assert mw._walk is None  # the walk was never expanded


def test_huge_counts_certified_infeasible():
    # on a 4-cycle the two low-count vertices throttle the other two
    cyc = [(i, (i + 1) % 4) for i in range(4)]
    assert many_visits_tour(spec_of(cyc, [300, 1, 300, 1])) is None


def test_large_feasible_path_graph():
    path = [(i, i + 1) for i in range(4)]
    visits = [517, 1034, 1034, 1034, 517]
    spec = spec_of(path, visits)
    mw = many_visits_tour(spec)
    assert mw is not None
    assert mw.walk_edge_count() == sum(visits)
    deg = mw.multiplicities.degrees()
    assert [int(d) for d in deg] == [2 * v for v in visits]


def test_degree_system_hand_cases():
    tri = [(0, 1), (1, 2), (0, 2)]
    got = solve_degree_system(3, tri, {0: 2, 1: 2, 2: 2})
    assert got is not None
    deg = [0, 0, 0]
    for (u, v), m in got.items():
        assert m >= 0 and (u, v) in tri
        deg[u] += m
        deg[v] += m
    assert deg == [2, 2, 2]

    assert solve_degree_system(3, tri, {0: 1, 1: 1, 2: 1}) is None  # odd sum
    assert solve_degree_system(3, [(0, 1)], {0: 2, 1: 2, 2: 2}) is None
    assert solve_degree_system(3, tri, {0: 0, 1: 0, 2: 0}) == {}
    assert solve_degree_system(3, tri, {0: -2, 1: 2, 2: 0}) is None


def test_degree_system_skips_zero_vertices():
    path = [(0, 1), (1, 2), (2, 3)]
    got = solve_degree_system(4, path, {0: 2, 1: 2, 2: 0, 3: 0})
    assert got is not None
    assert got.get((0, 1)) == 2
    assert all(m == 0 for e, m in got.items() if e != (0, 1))


def test_visit_counts_match_walk():
    spec = spec_of([(0, 1), (1, 2), (0, 2)], [2, 1, 1])
    mw = many_visits_tour(spec)
    validate_multiwalk(spec, mw)
    assert mw.visit_counts() == {0: 2, 1: 1, 2: 1}
