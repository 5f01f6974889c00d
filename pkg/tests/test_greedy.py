from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given

from stabilis.graph import Certificate, Perturbation, WeightedGraph
from stabilis.generators import cycle, fixture_suite, path, star
from stabilis.greedy import greedy_certified, greedy_independent_set, modified_greedy, modified_greedy_gamma
from stabilis.oracle import independent_sets, max_independent_set_exact, stability_threshold, verify_certificate
from stabilis.systems import (
    check_p_extendible, feasible_sets, graph_system, greedy_p_extendible, is_system_certified,
    knapsack_fixture, knapsack_system, matching_system, parse_knapsack, render_knapsack,
)

from conftest import graphs


def test_greedy_path():
    c = greedy_certified(path(3, [1, 3, 1]))
    assert c.solution == (2,) and c.gamma == 2 and c.perturbation.multiplier(2) == 2


def test_greedy_edgeless():
    c = greedy_certified(WeightedGraph.build(4))
    assert c.solution == (1, 2, 3, 4) and c.gamma == 1 and not c.perturbation.multipliers


def test_greedy_c5():
    c = greedy_certified(cycle(5))
    assert c.solution == (1, 3) and c.gamma == 2
    S = set(c.solution)
    assert all(2 * len(S - set(I)) >= len(set(I) - S) for I in independent_sets(cycle(5)))


@given(graphs(max_n=9))
def test_greedy_certificate_verifies(G):
    assert verify_certificate(G, greedy_certified(G))


@given(graphs(max_n=8))
def test_greedy_is_exact_above_max_degree(G):
    rep = stability_threshold(G)
    if rep.is_stable(max(1, G.max_degree)):
        assert greedy_independent_set(G) == rep.optimum


def test_modified_gamma():
    assert modified_greedy_gamma(3) == Fraction(2646, 1000)
    assert modified_greedy_gamma(3) ** 2 >= 7 > Fraction(2645, 1000) ** 2


def test_modified_greedy_examples():
    c = modified_greedy(star(3, [3, 1, 1, 1]))
    assert c.solution == (1,) and c.gamma == Fraction(2646, 1000)
    assert verify_certificate(star(3, [3, 1, 1, 1]), c)
    c = modified_greedy(star(3))
    assert c.solution == (2, 3, 4) and verify_certificate(star(3), c)
    c = modified_greedy(fixture_suite("triangle-pendant"))
    assert c.solution[0] == 1 and 1 in c.solution


def test_modified_greedy_needs_degree_three():
    with pytest.raises(ValueError):
        modified_greedy(cycle(5))


@given(graphs(max_n=9, max_degree=3))
def test_modified_greedy_verifies(G):
    if G.max_degree == 3:
        assert verify_certificate(G, modified_greedy(G))


def test_matching_tight():
    system = fixture_suite("matching-tight")
    cert = greedy_p_extendible(system)
    assert cert.solution == ((2, 3),) and cert.gamma == 2
    assert is_system_certified(system, cert.solution, 2)
    assert not is_system_certified(system, cert.solution, Fraction(9, 5))


def test_graph_system_matches_greedy():
    G = path(3, [1, 3, 1])
    cert = greedy_p_extendible(graph_system(G))
    c = greedy_certified(G)
    assert cert.solution == c.solution and cert.gamma == c.gamma


def test_knapsack_not_certifiable():
    system = knapsack_fixture()
    cert = greedy_p_extendible(system, multiplier=Fraction(5, 2))
    assert cert.solution == (0,)
    for M in (1, Fraction(2), Fraction(12, 5), Fraction(249, 100)):
        assert not is_system_certified(system, cert.solution, M)


def test_feasible_sets_examples():
    tri = matching_system(WeightedGraph.build(3, [(1, 2), (2, 3), (1, 3)]))
    assert sorted(map(len, feasible_sets(tri))) == [0, 1, 1, 1]
    edge = graph_system(WeightedGraph.build(2, [(1, 2)]))
    assert edge.p == 1 and sorted(map(sorted, feasible_sets(edge))) == [[], [1], [2]]
    knap = knapsack_fixture()
    assert knap.feasible(frozenset({0})) and not knap.feasible(frozenset({0, 1}))
    assert knap.feasible(frozenset(range(1, 6)))


def test_p_extendibility():
    G = WeightedGraph.build(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)])
    assert check_p_extendible(matching_system(G), 2) is None
    claw = graph_system(star(3))
    assert check_p_extendible(claw, 3) is None
    ce = check_p_extendible(claw, 2)
    assert ce is not None and ce.needed == 3
    ce = check_p_extendible(knapsack_fixture(), 4)
    assert ce is not None and ce.e == 0 and ce.needed == 5


@given(graphs(max_n=6))
def test_matching_is_two_extendible(G):
    if len(G.edges) <= 6:
        assert check_p_extendible(matching_system(G), 2) is None


def test_knapsack_text_roundtrip():
    system = knapsack_system({1: (3, Fraction(1, 2)), 2: (1, 1)}, Fraction(3, 2))
    back = parse_knapsack(render_knapsack(system))
    assert back.weights == system.weights and back.data["sizes"] == system.data["sizes"]
