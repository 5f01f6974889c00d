from fractions import Fraction

import pytest
from hypothesis import given

from stabilis.graph import WeightedGraph
from stabilis.generators import boost_to_stable, complete, cycle, fixture_suite, path, petersen, random_graph, star
from stabilis.greedy import greedy_independent_set
from stabilis.oracle import max_independent_set_exact, stability_threshold
from stabilis.stable import (
    NotStableEvidence, bounded_alg, bounded_gamma, ceil_sqrt, max_weight_degree_two, purify,
    robust_bounded_degree, unbounded_alg, welsh_powell,
)

from conftest import graphs, int_graphs


def test_purify_examples():
    assert purify(path(3, [10, 1, 10]), [1], 2) == (1,)
    assert purify(WeightedGraph.build(1), [1], 1) == (1,)
    assert purify(WeightedGraph.build(2, [(1, 2)]), [1], 1) == ()


@pytest.mark.parametrize("method", ["flow", "copies"])
def test_purify_errors(method):
    with pytest.raises(ValueError):
        purify(WeightedGraph.build(2, [(1, 2)]), [1, 2], 1, method)
    with pytest.raises(ValueError):
        purify(WeightedGraph.build(1, [], [Fraction(1, 2)]), [1], 1, method)
    with pytest.raises(ValueError):
        purify(WeightedGraph.build(1), [1], Fraction(3, 2), method)


@given(int_graphs(max_weight=5, max_n=8))
def test_purify_routes_agree(G):
    I = max_independent_set_exact(G)[0]
    for gamma in (1, 2, 3):
        assert purify(G, I, gamma, "flow") == purify(G, I, gamma, "copies")


def test_ceil_sqrt():
    assert [ceil_sqrt(x) for x in (0, 1, 2, 4, 5, 9, 10)] == [0, 1, 2, 2, 3, 3, 4]
    assert ceil_sqrt(Fraction(9, 4)) == 2


def test_bounded_examples():
    G = path(3, [10, 1, 10])
    assert bounded_gamma(G) == 2 and bounded_alg(G) == (1, 3)
    assert bounded_alg(WeightedGraph.build(1)) == (1,)
    with pytest.raises(NotStableEvidence):
        bounded_alg(WeightedGraph.build(2, [(1, 2)]))


@given(int_graphs(max_n=9))
def test_bounded_exact_when_stable_enough(G):
    rep = stability_threshold(G)
    if rep.is_stable(bounded_gamma(G)):
        assert bounded_alg(G) == rep.optimum


def test_bounded_with_greedy_approx():
    G = boost_to_stable(random_graph(3, 9, 0.3), 20)
    delta = G.max_degree
    assert bounded_alg(G, greedy_independent_set, delta) == stability_threshold(G).optimum


def test_welsh_powell_examples():
    for G, bound, used in ((star(3), 2, 2), (complete(3), 3, 3)):
        coloring, b = welsh_powell(G)
        assert b == bound and max(coloring.values()) == used
    coloring, b = welsh_powell(petersen())
    assert b == 4 and max(coloring.values()) <= 4


@given(graphs(max_n=10))
def test_welsh_powell_proper_and_bounded(G):
    coloring, bound = welsh_powell(G)
    assert all(coloring[u] != coloring[v] for u, v in G.edges)
    assert max(coloring.values(), default=0) <= bound


def test_unbounded_examples():
    assert unbounded_alg(WeightedGraph.build(2, [(1, 2)], [3, 1]), 2) == (1,)
    assert unbounded_alg(complete(3, [5, 1, 1]), 3) == (1,)
    out = unbounded_alg(cycle(5), 5)
    assert len(out) >= 2 and all(not cycle(5).has_edge(u, v) for u in out for v in out)


@given(graphs(max_n=9))
def test_unbounded_exact_above_n_over_k(G):
    rep = stability_threshold(G)
    for k in (1, 2, 3):
        out = unbounded_alg(G, k)
        assert all(not G.has_edge(u, v) for u in out for v in out)
        if rep.is_stable(Fraction(G.n, k)):
            assert out == rep.optimum


def test_robust_degree_examples():
    assert robust_bounded_degree(cycle(5, [5, 1, 1, 1, 1])) == (1, 3)
    assert robust_bounded_degree(complete(4, [4, 1, 1, 1])) == (1,)
    assert robust_bounded_degree(fixture_suite("triangle-pendant")) is None


@given(graphs(max_n=9))
def test_robust_degree_never_wrong(G):
    rep = stability_threshold(G)
    out = robust_bounded_degree(G)
    if out is not None:
        assert G.total_weight(out) == rep.optimum_weight
    if rep.is_stable(max(1, G.max_degree - 1)):
        assert out is not None


@given(graphs(max_n=10, max_degree=2))
def test_degree_two_dp(G):
    assert G.total_weight(max_weight_degree_two(G)) == max_independent_set_exact(G)[1]
