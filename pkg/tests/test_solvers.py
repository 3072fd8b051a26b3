"""Exact solvers: brute force, meet in the middle, triangle backends, and the
node-weight clique pipeline."""

import random
from itertools import combinations
from math import comb, isqrt

import pytest

from ksumclique import (
    CliqueInstance,
    KSumInstance,
    ParameterError,
    ResourceBudgetError,
    SolverReport,
    ValidationError,
    detect_triangle,
    iter_kcliques,
    solve_instance,
    solve_kclique_bruteforce,
    solve_ksum_bruteforce,
    solve_ksum_mim,
    solve_nw_kclique,
    solve_nw_triangle,
    solve_vectorsum_bruteforce,
)

from util import (
    complete_edges,
    cycle_edges,
    make_ew_graph,
    make_ksum,
    make_nw_graph,
    make_vectorsum,
    oracle_kclique,
    oracle_ksum,
    oracle_nw_kclique,
)


def test_report_invariant():
    with pytest.raises(ValidationError):
        SolverReport(solvable=True, witness=None)
    with pytest.raises(ValidationError):
        SolverReport(solvable=False, witness=(0,))


def test_report_timing_is_opt_in():
    rep = solve_ksum_bruteforce(make_ksum([1, 2], 2, 3))
    assert "wall_time_s" not in rep.to_json_dict()["stats"]
    assert "wall_time_s" in rep.to_json_dict(include_timing=True)["stats"]


def test_brute_frozen_cases():
    assert solve_ksum_bruteforce(make_ksum([1, 2, 3, 4, 5], 3, 12)).witness == (2, 3, 4)
    assert solve_ksum_bruteforce(make_ksum([7], 1, 7)).solvable
    assert not solve_ksum_bruteforce(make_ksum([1, 1], 2, 3)).solvable


def test_brute_returns_lex_smallest():
    rep = solve_ksum_bruteforce(make_ksum([2, 2, 2, 2], 2, 4))
    assert rep.witness == (0, 1)


def test_mim_frozen_cases():
    assert solve_ksum_mim(make_ksum([0, 0, 0, 0], 4, 0)).solvable
    assert solve_ksum_mim(KSumInstance(k=2, numbers=(5, -5), target=0, bounds=(-5, 5))).witness == (0, 1)
    assert solve_ksum_mim(make_ksum([7], 1, 7)).solvable
    assert not solve_ksum_mim(make_ksum([1, 1], 2, 3)).solvable


def test_mim_matches_brute_random():
    rng = random.Random(40)
    for _ in range(300):
        k = rng.randint(1, 5)
        n = rng.randint(k, 11)
        nums = [rng.randint(-15, 15) for _ in range(n)]
        t = rng.randint(-20, 20)
        inst = KSumInstance(k=k, numbers=tuple(nums), target=t, bounds=(-15, 15))
        a = solve_ksum_bruteforce(inst)
        b = solve_ksum_mim(inst)
        assert a.solvable == b.solvable
        if b.solvable:
            w = b.witness
            assert len(set(w)) == k and sum(nums[i] for i in w) == t
            assert solve_ksum_mim(inst).witness == w  # canonical per input


def test_vectorsum_frozen_cases():
    inst = make_vectorsum([(1, 1), (1, 0)], 2, (2, 1), lo=0, hi=1)
    assert solve_vectorsum_bruteforce(inst).witness == (0, 1)
    zero = make_vectorsum([(0, 0), (0, 0)], 2, (0, 0), lo=0, hi=0)
    assert solve_vectorsum_bruteforce(zero).solvable


def test_vectorsum_range_prune_short_circuits():
    inst = make_vectorsum([(1,), (2,)], 2, (9,), lo=0, hi=2)
    rep = solve_vectorsum_bruteforce(inst)
    assert not rep.solvable
    assert rep.stats["range_pruned"] is True
    assert rep.stats["candidates"] == 0


def test_clique_brute_frozen_cases():
    k4 = CliqueInstance(n=4, edges=complete_edges(4), k=3)
    assert solve_kclique_bruteforce(k4).witness == (0, 1, 2)
    c5 = CliqueInstance(n=5, edges=cycle_edges(5), k=3)
    assert not solve_kclique_bruteforce(c5).solvable


def test_clique_brute_rejects_target_on_unweighted():
    k4 = CliqueInstance(n=4, edges=complete_edges(4), k=3)
    with pytest.raises(ParameterError):
        solve_kclique_bruteforce(k4, target=0)


def test_clique_brute_weighted_target():
    g6 = make_nw_graph(3, complete_edges(3), 3, [1, 2, 3], target=6)
    assert solve_kclique_bruteforce(g6).solvable
    g5 = make_nw_graph(3, complete_edges(3), 3, [1, 2, 3], target=5)
    assert not solve_kclique_bruteforce(g5).solvable


def test_clique_brute_edge_weighted_target():
    g = make_ew_graph(3, complete_edges(3), 3, [4, -4, 0], target=0)
    assert solve_kclique_bruteforce(g).solvable
    g1 = make_ew_graph(3, complete_edges(3), 3, [4, -4, 1], target=0)
    assert not solve_kclique_bruteforce(g1).solvable


def test_iter_kcliques_enumerates_all():
    g = CliqueInstance(n=5, edges=complete_edges(5), k=3)
    assert sum(1 for _ in iter_kcliques(g)) == comb(5, 3)
    got = set(iter_kcliques(g))
    assert got == set(combinations(range(5), 3))


def test_clique_budget_guard():
    big = CliqueInstance(n=600, edges=complete_edges(120), k=5)
    with pytest.raises(ResourceBudgetError):
        solve_kclique_bruteforce(big, budget=1000)


def test_sparse_graph_beats_naive_combination_count():
    # budget below C(n,k) but the degree-aware guard admits the sparse graph
    n = 400
    edges = [(i, i + 1) for i in range(n - 1)]
    g = CliqueInstance(n=n, edges=tuple(edges), k=3)
    rep = solve_kclique_bruteforce(g, budget=200_000)
    assert not rep.solvable


def test_detect_triangle_frozen_cases():
    k3 = CliqueInstance(n=3, edges=complete_edges(3), k=3)
    c5 = CliqueInstance(n=5, edges=cycle_edges(5), k=3)
    for backend in ("naive-mm", "degree-split"):
        assert detect_triangle(k3, backend=backend).witness == (0, 1, 2)
        assert not detect_triangle(c5, backend=backend).solvable


def test_detect_triangle_backends_agree_random():
    rng = random.Random(41)
    for _ in range(120):
        n = rng.randint(3, 24)
        prob = rng.random() * 0.5
        edges = tuple(e for e in complete_edges(n) if rng.random() < prob)
        g = CliqueInstance(n=n, edges=edges, k=3)
        a = detect_triangle(g, backend="naive-mm")
        b = detect_triangle(g, backend="degree-split")
        assert a.solvable == b.solvable
        for rep in (a, b):
            if rep.solvable:
                u, v, w = rep.witness
                assert {(u, v), (u, w), (v, w)} <= set(edges)


def test_degree_split_counters_respect_bounds():
    rng = random.Random(42)
    for _ in range(40):
        n = rng.randint(4, 30)
        edges = tuple(e for e in complete_edges(n) if rng.random() < 0.4)
        if not edges:
            continue
        g = CliqueInstance(n=n, edges=edges, k=3)
        rep = detect_triangle(g, backend="degree-split")
        m = len(edges)
        delta = rep.stats["delta"]
        assert delta == isqrt(m) + (isqrt(m) ** 2 < m)
        assert rep.stats["low_pairs"] <= m * delta
        assert delta * rep.stats["core_size"] <= 2 * m


def test_detect_triangle_rejects_unknown_backend():
    k3 = CliqueInstance(n=3, edges=complete_edges(3), k=3)
    with pytest.raises(ParameterError):
        detect_triangle(k3, backend="fft")


def test_nw_triangle_frozen_cases():
    g = make_nw_graph(3, complete_edges(3), 3, [1, 2, 3], target=6)
    assert solve_nw_triangle(g).witness == (0, 1, 2)
    g7 = make_nw_graph(3, complete_edges(3), 3, [1, 2, 3], target=7)
    assert not solve_nw_triangle(g7).solvable


def test_nw_triangle_requires_arity_three():
    g = make_nw_graph(3, complete_edges(3), 2, [1, 2, 3], target=3)
    with pytest.raises(ParameterError):
        solve_nw_triangle(g)


def test_nw_kclique_frozen_cases():
    w = [3, 1, 4, 1]
    g = make_nw_graph(4, complete_edges(4), 4, w, target=sum(w))
    assert solve_nw_kclique(g).witness == (0, 1, 2, 3)
    star = make_nw_graph(4, [(0, 1), (0, 2), (0, 3)], 4, w, target=sum(w))
    assert not solve_nw_kclique(star).solvable


def test_nw_kclique_pair_arity_scans_edges():
    g = make_nw_graph(3, [(0, 1), (1, 2)], 2, [5, 7, 2], target=9)
    assert solve_nw_kclique(g).witness == (1, 2)


def test_nw_pipeline_matches_brute_random():
    rng = random.Random(43)
    for _ in range(60):
        k = rng.choice([3, 4])
        n = rng.randint(k, 9)
        edges = tuple(e for e in complete_edges(n) if rng.random() < 0.7)
        if k == 4:
            # a narrow weight palette keeps the zero-sum guess space small
            palette = [rng.randint(0, 8) for _ in range(3)]
            weights = [rng.choice(palette) for _ in range(n)]
        else:
            weights = [rng.randint(0, 8) for _ in range(n)]
        t = rng.randint(0, k * 8)
        g = make_nw_graph(n, edges, k, weights, target=t)
        want = oracle_nw_kclique(n, edges, k, weights, t)
        rep = solve_nw_kclique(g) if k != 3 else solve_nw_triangle(g)
        assert rep.solvable == (want is not None)
        if rep.solvable:
            assert sum(weights[v] for v in rep.witness) == t
            assert all(tuple(sorted(e)) in g.edges for e in combinations(rep.witness, 2))


def test_nw_pipeline_handles_negative_weights():
    g = make_nw_graph(3, complete_edges(3), 3, [-2, 5, -3], target=0)
    rep = solve_nw_triangle(g)
    assert rep.witness == (0, 1, 2)


def test_nw_pipeline_higher_dimension_agrees():
    g = make_nw_graph(4, complete_edges(4), 3, [9, 14, 3, 7], target=26)
    one = solve_nw_triangle(g, d=1)
    two = solve_nw_triangle(g, d=2)
    assert one.solvable == two.solvable == True  # noqa: E712  (9+14+3)
    assert one.witness == two.witness


def test_solve_instance_dispatch():
    assert solve_instance(make_ksum([1, 3], 2, 4)).solvable
    assert solve_instance(make_ksum([1, 3], 2, 4), solver="ksum-mim").solvable
    tri = CliqueInstance(n=3, edges=complete_edges(3), k=3)
    assert solve_instance(tri).solvable
    with pytest.raises(ParameterError):
        solve_instance(make_ksum([1, 3], 2, 4), solver="quantum")
