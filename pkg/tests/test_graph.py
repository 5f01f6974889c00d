from fractions import Fraction

import pytest
from hypothesis import given

from stabilis.graph import (
    Certificate, GraphFormatError, Perturbation, PerturbationError, WeightedGraph,
    apply_perturbation, format_rational, is_independent, parse_certificate, parse_graph,
    parse_graph_text, parse_rational, render_certificate, render_graph,
)
from stabilis.generators import cycle, layered_grid

from conftest import graphs


def test_parse_default_weights():
    G = parse_graph("p mis 2 1\ne 1 2\n")
    assert G.n == 2 and G.edges == {(1, 2)} and G.weights == (1, 1)


def test_parse_explicit_weights():
    G = parse_graph("p mis 2 1\nv 1 3\nv 2 1\ne 1 2\n")
    assert G.weights == (3, 1)


def test_parse_rejects_non_positive_weight():
    with pytest.raises(GraphFormatError, match="weight ≤ 0 at line 2"):
        parse_graph("p mis 2 1\nv 1 -2\ne 1 2\n")


@pytest.mark.parametrize("text, fragment", [
    ("e 1 2\n", "before header"),
    ("p mis 2 2\ne 1 2\n", "declares 2 edges"),
    ("p mis 2 1\ne 1 1\n", "self-loop"),
    ("p mis 2 2\ne 1 2\ne 2 1\n", "duplicate edge"),
    ("p mis 2 1\ne 1 3\n", "out of range"),
    ("p mis 2 0\nv 1 x\n", "bad weight"),
    ("p mis 3 1\ne 1 2\nl 1 0\nl 2 2\nl 3 0\n", "layer rule"),
    ("p mis 2 0\nl 1 0\n", "has no layer"),
    ("p nmc 2 0\n", "expected header"),
    ("", "missing header"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(GraphFormatError, match=fragment):
        parse_graph(text)


def test_comments_and_rationals():
    G = parse_graph("c hello\n# also ignored\np mis 1 0\nv 1 7/3\n")
    assert G.weights == (Fraction(7, 3),)


def test_nmc_terminals():
    G, T = parse_graph_text("p nmc 3 2\ne 1 2\ne 2 3\nt 1\nt 3\n", "nmc")
    assert T == [1, 3] and G.n == 3


def test_rational_roundtrip():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert format_rational(Fraction(4, 2)) == "2"
    with pytest.raises(ValueError):
        parse_rational("0.5")


@given(graphs())
def test_render_parse_roundtrip(G):
    assert parse_graph(render_graph(G)) == G


def test_layered_roundtrip():
    G = layered_grid(3, 3)
    assert parse_graph(render_graph(G)) == G


def test_is_independent_examples():
    edge = WeightedGraph.build(2, [(1, 2)])
    assert is_independent(edge, [1])
    assert not is_independent(edge, [1, 2])
    assert is_independent(cycle(5), [1, 3])


def test_identity_perturbation():
    G = cycle(5, [1, 2, 3, 4, 5])
    assert apply_perturbation(G, Perturbation(Fraction(3))).weights == G.weights


def test_perturbation_scales():
    G = WeightedGraph.build(2, [(1, 2)], [3, 1])
    assert apply_perturbation(G, Perturbation(Fraction(2), {1: Fraction(2)})).weights == (6, 1)


def test_perturbation_bound_violation():
    G = WeightedGraph.build(2, [(1, 2)], [3, 1])
    with pytest.raises(PerturbationError):
        apply_perturbation(G, Perturbation(Fraction(2), {1: Fraction(3)}))
    with pytest.raises(PerturbationError):
        apply_perturbation(G, Perturbation(Fraction(1, 2)))


def test_certificate_roundtrip():
    c = Certificate((1, 3), Perturbation(Fraction(5, 2), {1: Fraction(2), 3: Fraction(5, 2)}))
    assert parse_certificate(render_certificate(c)) == c
    empty = Certificate((), Perturbation(Fraction(1)))
    assert parse_certificate(render_certificate(empty)) == empty


def test_certificate_errors():
    with pytest.raises(GraphFormatError):
        parse_certificate("solution 1\n")
    with pytest.raises(GraphFormatError):
        parse_certificate("gamma 1\nsolution 1 1\n")


def test_constructor_validation():
    with pytest.raises(ValueError):
        WeightedGraph.build(2, [(1, 2)], [0, 1])
    with pytest.raises(ValueError):
        WeightedGraph.build(2, [(1, 1)])
    with pytest.raises(ValueError):
        WeightedGraph.build(3, [(1, 2)], layers=[0, 2, 0])


def test_induced_and_components():
    G = WeightedGraph.build(5, [(1, 2), (4, 5)], [1, 2, 3, 4, 5])
    H, labels = G.induced([2, 4, 5])
    assert labels == (2, 4, 5) and H.edges == {(2, 3)} and H.weights == (2, 4, 5)
    assert sorted(G.components()) == [(1, 2), (3,), (4, 5)]
