from fractions import Fraction
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabilis.graph import WeightedGraph
from stabilis.generators import complete, cycle, layered_grid, path
from stabilis.lp.mis import nemhauser_trotter, sherali_adams_solve
from stabilis.rounding import (
    Mixture, NotInHull, RoundingScheme, baker_decompose, check_rounding_properties, derive_seed,
    hochbaum_round, marginals_to_mixture, outside_tolerance, planar_round, trial_rng,
)
from stabilis.stable import welsh_powell

H = Fraction(1, 2)


def test_seed_derivation_is_stable():
    assert derive_seed(7, 3) == derive_seed(7, 3) != derive_seed(7, 4)
    assert trial_rng(1, 2).random() == trial_rng(1, 2).random()


def test_hochbaum_triangle_single_vertex():
    tri = complete(3)
    x = {u: H for u in tri.vertices}
    coloring = {1: 1, 2: 2, 3: 3}
    counts = {u: 0 for u in tri.vertices}
    for s in range(3000):
        out = hochbaum_round(tri, x, coloring, s)
        assert len(out) == 1
        counts[out[0]] += 1
    for c in counts.values():
        assert not outside_tolerance(">=", Fraction(1, 3), c, 3000)
        assert not outside_tolerance("<=", Fraction(1, 3), c, 3000)


def test_hochbaum_integral_is_deterministic():
    edge = WeightedGraph.build(2, [(1, 2)], [3, 1])
    x = nemhauser_trotter(edge).assignment
    assert {hochbaum_round(edge, x, {1: 1, 2: 2}, s) for s in range(20)} == {(1,)}


def test_hochbaum_path_parity():
    p4 = path(4)
    x = {u: H for u in p4.vertices}
    coloring = {1: 1, 2: 2, 3: 1, 4: 2}
    assert {hochbaum_round(p4, x, coloring, s) for s in range(20)} == {(1, 3), (2, 4)}


def test_hochbaum_rejects_bad_coloring():
    tri = complete(3)
    with pytest.raises(ValueError, match="improper"):
        hochbaum_round(tri, {u: H for u in tri.vertices}, {1: 1, 2: 1, 3: 2}, 0)


def test_baker_grid_slabs():
    G = layered_grid(3, 3)
    assert baker_decompose(G, 2, 0) == [(1, 2, 3, 4, 6, 7, 8, 9), tuple(range(1, 10))]


def test_baker_flat_path():
    G = WeightedGraph.build(4, [(1, 2), (2, 3), (3, 4)], layers=[0, 0, 0, 0])
    assert baker_decompose(G, 3, 0) == [(1, 2, 3, 4)]


def test_baker_index_arithmetic():
    G = WeightedGraph.build(6, [(i, i + 1) for i in range(1, 6)], layers=[0, 1, 2, 3, 4, 5])
    assert baker_decompose(G, 2, 1) == [(1, 2), (2, 3, 4), (4, 5, 6)]


def test_mixture_examples():
    edge = WeightedGraph.build(2, [(1, 2)])
    mix = marginals_to_mixture(edge, {1: H, 2: H})
    assert sorted(mix.parts) == [((1,), H), ((2,), H)]
    single = marginals_to_mixture(WeightedGraph.build(1), {1: Fraction(3, 4)})
    assert sorted(single.parts) == [((), Fraction(1, 4)), ((1,), Fraction(3, 4))]
    with pytest.raises(NotInHull):
        marginals_to_mixture(complete(3), {1: H, 2: H, 3: H})


@given(st.lists(st.integers(0, 12), min_size=1, max_size=4))
def test_mixture_sampling_is_exact(raw):
    total = sum(raw) or 1
    parts = tuple(((i,), Fraction(r, total)) for i, r in enumerate(raw) if r)
    if not parts:
        parts = (((0,), Fraction(1)),)
    mix = Mixture(parts)
    rng = random.Random(0)
    for _ in range(20):
        assert mix.sample(rng) in {S for S, _ in parts}


def test_planar_integral_is_deterministic():
    G = layered_grid(3, 3)
    y = {u: Fraction(int(u in (1, 3, 5, 7, 9))) for u in G.vertices}
    assert {planar_round(G, 2, y, s) for s in range(10)} == {(1, 3, 5, 7, 9)}


def test_planar_single_slab_marginals():
    G = WeightedGraph.build(3, [(1, 2), (2, 3)], layers=[0, 0, 0])
    y = {1: H, 2: H, 3: H}
    trials = 4000
    counts = {u: 0 for u in G.vertices}
    for t in range(trials):
        for u in planar_round(G, 2, y, trial_rng(5, t)):
            counts[u] += 1
    for u in G.vertices:
        assert not outside_tolerance(">=", H, counts[u], trials)
        assert not outside_tolerance("<=", H, counts[u], trials)


def test_planar_boundary_vertex_needs_both_slabs():
    # layers 0,1,2 with k=2, j=1: slabs {0,1} and {1,2} share vertex 2
    G = WeightedGraph.build(3, [], layers=[0, 1, 2])
    y = {1: Fraction(0), 2: H, 3: Fraction(0)}
    trials = 4000
    hits = 0
    for t in range(trials):
        hits += 2 in planar_round(G, 2, y, trial_rng(9, t))
    # shift 1 puts vertex 2 in both slabs (1/4), shift 0 in one (1/2): 3/8 overall
    assert not outside_tolerance(">=", Fraction(3, 8), hits, trials)
    assert not outside_tolerance("<=", Fraction(3, 8), hits, trials)


def test_scheme_parameters():
    s = RoundingScheme("hochbaum", 3)
    assert (s.alpha, s.beta) == (Fraction(3, 2), Fraction(4, 3))
    p = RoundingScheme("planar", 2)
    assert (p.alpha, p.beta) == (2, Fraction(3, 2))
    assert p.claimed_in(H) == (">=", Fraction(3, 8))


def test_property_report_on_triangle():
    tri = complete(3)
    coloring, _ = welsh_powell(tri)
    rep = check_rounding_properties(RoundingScheme("hochbaum", 3, coloring), tri,
                                    nemhauser_trotter(tri).assignment, 3000, 1)
    assert rep.ok and len(rep.rows) == 3
    assert rep.tsv().startswith("vertex\t")


def test_property_report_parallel_matches_serial():
    G = cycle(5)
    coloring, _ = welsh_powell(G)
    scheme = RoundingScheme("hochbaum", 3, coloring)
    x = nemhauser_trotter(G).assignment
    assert check_rounding_properties(scheme, G, x, 600, 4) == check_rounding_properties(scheme, G, x, 600, 4, jobs=3)


def test_planar_property_on_grid():
    G = layered_grid(3, 3)
    _, sol = sherali_adams_solve(G, 2)
    rep = check_rounding_properties(RoundingScheme("planar", 2), G, sol.assignment, 2000, 3)
    assert rep.ok


def test_tolerance_edges():
    assert not outside_tolerance(">=", Fraction(1, 2), 50, 100)
    assert outside_tolerance(">=", Fraction(1, 2), 10, 100)
    assert not outside_tolerance("<=", Fraction(1, 2), 10, 100)
    # a bound outside [0, 1] is clamped so a sure event is never flagged
    assert not outside_tolerance("<=", Fraction(3, 2), 100, 100)
