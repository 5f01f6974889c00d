from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given

from stabilis.graph import WeightedGraph
from stabilis.generators import complete, cycle, petersen
from stabilis.local_search import BFConfig, bf_solve, connected_subsets, find_improvement, full_sigma
from stabilis.oracle import independent_sets, max_independent_set_exact, verify_certificate

from conftest import unit_graphs


def brute_connected(G, limit):
    out = set()
    for r in range(1, limit + 1):
        for X in combinations(G.vertices, r):
            H, _ = G.induced(X)
            if H.is_connected():
                out.add(frozenset(X))
    return out


@given(unit_graphs(max_n=8))
def test_connected_subsets_exactly_once(G):
    for limit in (1, 3, G.n):
        got = list(connected_subsets(G, limit))
        assert len(got) == len(set(got))
        assert set(got) == brute_connected(G, limit)


def test_improvement_examples():
    X = find_improvement(cycle(5), (1,), 3)
    assert X is not None
    new = set(X) ^ {1}
    assert len(new) == 2 and all(not cycle(5).has_edge(u, v) for u in new for v in new)
    assert find_improvement(complete(4), (1,), 4) is None


@given(unit_graphs(max_n=8))
def test_no_improvement_at_optimum(G):
    assert find_improvement(G, max_independent_set_exact(G)[0], G.n) is None


def test_requires_unit_weights():
    with pytest.raises(ValueError):
        find_improvement(WeightedGraph.build(2, [(1, 2)], [2, 1]), (), 2)


def test_config():
    cfg = BFConfig.for_graph(petersen(), 1)
    assert cfg.sigma == 10 and cfg.gamma == Fraction(5, 3) and cfg.epsilon == Fraction(1, 3)
    assert full_sigma(10, 3, 1) == 32 * 81 * 4
    with pytest.raises(ValueError):
        BFConfig(0, 1, 3)


def test_c5_reaches_optimum():
    G = cycle(5)
    c = bf_solve(G, BFConfig.for_graph(G, 1, 5))
    assert len(c.solution) == 2 and verify_certificate(G, c)


def test_petersen_inequality():
    G = petersen()
    c = bf_solve(G, BFConfig.for_graph(G, 1, 10))
    I = set(c.solution)
    for S in independent_sets(G):
        assert len(set(S) - I) <= Fraction(5, 3) * len(I - set(S))


def test_edgeless():
    G = WeightedGraph.build(4)
    c = bf_solve(G, BFConfig.for_graph(G))
    assert c.solution == (1, 2, 3, 4) and verify_certificate(G, c)


@given(unit_graphs(max_n=10, max_degree=3))
def test_fixed_point_properties(G):
    cfg = BFConfig.for_graph(G, 1, G.n)
    c = bf_solve(G, cfg)
    I = set(c.solution)
    assert find_improvement(G, c.solution, cfg.sigma) is None
    for S in independent_sets(G):
        S = set(S)
        # every vertex of S - I sees I - S at a fixed point
        assert all(G.neighbors(u) & (I - S) for u in S - I)
        assert len(S - I) <= cfg.gamma * len(I - S)
