"""Instance factories: random graphs, planted independent sets, instances
boosted to a target stability, layered grids and the named fixtures."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import VertexSet, WeightedGraph, format_rational, is_independent
from .multiway import NMCInstance, exact_nmc, gap_instance
from .oracle import stability_threshold
from .rounding import as_rng
from .systems import knapsack_fixture, matching_system


def random_weights(rng: random.Random, n: int, kind: str = "int", max_weight: int = 9) -> list[Fraction]:
    """``kind``: "unit", "int" (1..max_weight) or "rational" (p/q, both in 1..max_weight)."""
    if kind == "unit":
        return [Fraction(1)] * n
    if kind == "int":
        return [Fraction(rng.randint(1, max_weight)) for _ in range(n)]
    if kind == "rational":
        return [Fraction(rng.randint(1, max_weight), rng.randint(1, max_weight)) for _ in range(n)]
    raise ValueError(f"unknown weight kind {kind!r}")


def random_graph(
    seed, n: int, p: float = 0.3, weights: str = "int", max_weight: int = 9,
    max_degree: int | None = None,
) -> WeightedGraph:
    """G(n, p) with random weights.  With ``max_degree`` an edge is skipped
    whenever it would push an endpoint past the cap."""
    rng = as_rng(seed)
    degree = [0] * (n + 1)
    edges = []
    for u, v in combinations(range(1, n + 1), 2):
        if rng.random() < p:
            if max_degree is not None and (degree[u] >= max_degree or degree[v] >= max_degree):
                continue
            edges.append((u, v))
            degree[u] += 1
            degree[v] += 1
    return WeightedGraph.build(n, edges, random_weights(rng, n, weights, max_weight))


def random_connected_graph(seed, n: int, p: float = 0.3, weights: str = "int", max_weight: int = 9) -> WeightedGraph:
    """Random spanning tree plus G(n, p) edges."""
    rng = as_rng(seed)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    edges = {tuple(sorted((order[i], order[rng.randrange(i)]))) for i in range(1, n)}
    edges |= {(u, v) for u, v in combinations(range(1, n + 1), 2) if rng.random() < p}
    return WeightedGraph.build(n, sorted(edges), random_weights(rng, n, weights, max_weight))


# ------------------------------------------------------------ planted


def planted_instance(n: int, k_planted: int, seed) -> tuple[WeightedGraph, VertexSet]:
    """G(n, 1/2) with a random k-subset made independent; unit weights."""
    if not 1 <= k_planted <= n:
        raise ValueError("need 1 <= k_planted <= n")
    rng = as_rng(seed)
    planted = set(rng.sample(range(1, n + 1), k_planted))
    edges = [
        (u, v) for u, v in combinations(range(1, n + 1), 2)
        if rng.random() < 0.5 and not (u in planted and v in planted)
    ]
    G = WeightedGraph.build(n, edges)
    S = tuple(sorted(planted))
    assert is_independent(G, S)
    return G, S


@dataclass(frozen=True)
class PlantedProbe:
    seed: int
    n: int
    k: int
    planted_optimal: bool
    optimum_size: int
    threshold: Fraction | None

    def tsv(self) -> str:
        t = "inf" if self.threshold is None else format_rational(self.threshold)
        return f"{self.seed}\t{self.n}\t{self.k}\t{int(self.planted_optimal)}\t{self.optimum_size}\t{t}"


def probe_planted(n: int, k_planted: int, seeds) -> list[PlantedProbe]:
    """Measure whether the planted set is the optimum, and how stable it is."""
    rows = []
    for s in seeds:
        G, S = planted_instance(n, k_planted, s)
        rep = stability_threshold(G)
        rows.append(PlantedProbe(s, n, k_planted, rep.optimum == S, len(rep.optimum), rep.threshold))
    return rows


# ------------------------------------------------------------ boosting


def boost_to_stable(G: WeightedGraph, target_gamma) -> WeightedGraph:
    """Scale the weights of the current optimum by the smallest power of two
    that pushes the stability threshold above ``target_gamma``.

    Deterministic: the optimum is the oracle's lexicographic choice.
    """
    target = Fraction(target_gamma)
    rep = stability_threshold(G)
    if rep.is_stable(target):
        return G
    opt = set(rep.optimum)
    factor = 1
    while True:
        factor *= 2
        H = G.with_weights([w * factor if u in opt else w for u, w in enumerate(G.weights, start=1)])
        check = stability_threshold(H)
        if check.is_stable(target):
            assert set(check.optimum) == opt
            return H


def boost_nmc(inst: NMCInstance, target_gamma) -> NMCInstance:
    """Scale every removable vertex outside the optimum cut by the smallest
    power of two that pushes the cut's stability threshold above the target."""
    target = Fraction(target_gamma)
    rep = exact_nmc(inst)
    if rep.is_stable(target):
        return inst
    keep = set(rep.cut) | set(inst.terminals)
    G = inst.graph
    factor = 1
    while True:
        factor *= 2
        H = G.with_weights([w if u in keep else w * factor for u, w in enumerate(G.weights, start=1)])
        boosted = NMCInstance(H, inst.terminals)
        check = exact_nmc(boosted)
        if check.is_stable(target):
            assert check.cut == rep.cut
            return boosted


def random_nmc_instance(seed, n: int, k: int, p: float = 0.3, weights: str = "int", max_weight: int = 9) -> NMCInstance:
    """Random connected graph with k pairwise non-adjacent terminals.

    Edges between chosen terminals are dropped; the graph is re-drawn if that
    disconnects it.
    """
    rng = as_rng(seed)
    for _ in range(1000):
        G = random_connected_graph(rng, n, p, weights, max_weight)
        terminals = sorted(rng.sample(range(1, n + 1), k))
        T = set(terminals)
        H = WeightedGraph.build(n, [e for e in G.edges if not (e[0] in T and e[1] in T)], G.weights)
        if H.is_connected():
            return NMCInstance(H, tuple(terminals))
    raise ValueError("could not draw a connected instance; raise p or lower k")


# ------------------------------------------------------------ fixtures


def grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    def idx(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((idx(r, c), idx(r, c + 1)))
            if r + 1 < rows:
                edges.append((idx(r, c), idx(r + 1, c)))
    return edges


def layered_grid(rows: int, cols: int, layering: str = "rings", weights=None) -> WeightedGraph:
    """Grid graph with Baker layers: "rings" peels the boundary (the outerplanar
    depth of a grid), "rows" uses the row index."""
    if layering == "rings":
        layers = [min(r, c, rows - 1 - r, cols - 1 - c) for r in range(rows) for c in range(cols)]
    elif layering == "rows":
        layers = [r for r in range(rows) for _ in range(cols)]
    else:
        raise ValueError(f"unknown layering {layering!r}")
    return WeightedGraph.build(rows * cols, grid_edges(rows, cols), weights, layers)


def cycle(n: int, weights=None) -> WeightedGraph:
    return WeightedGraph.build(n, [(i, i % n + 1) for i in range(1, n + 1)], weights)


def path(n: int, weights=None) -> WeightedGraph:
    return WeightedGraph.build(n, [(i, i + 1) for i in range(1, n)], weights)


def complete(n: int, weights=None) -> WeightedGraph:
    return WeightedGraph.build(n, list(combinations(range(1, n + 1), 2)), weights)


def star(leaves: int, weights=None) -> WeightedGraph:
    """Centre is vertex 1."""
    return WeightedGraph.build(leaves + 1, [(1, i) for i in range(2, leaves + 2)], weights)


def petersen() -> WeightedGraph:
    outer = [(i, i % 5 + 1) for i in range(1, 6)]
    spokes = [(i, i + 5) for i in range(1, 6)]
    inner = [(6 + i, 6 + (i + 2) % 5) for i in range(5)]
    return WeightedGraph.build(10, outer + spokes + inner)


def clique_components(delta: int, count: int, weights=None) -> WeightedGraph:
    """``count`` disjoint copies of K_{delta+1}."""
    size = delta + 1
    edges = [
        (b + u, b + v)
        for b in range(0, size * count, size)
        for u, v in combinations(range(1, size + 1), 2)
    ]
    return WeightedGraph.build(size * count, edges, weights)


def _fixtures() -> dict:
    return {
        "edge31": lambda: WeightedGraph.build(2, [(1, 2)], [3, 1]),
        "edge11": lambda: WeightedGraph.build(2, [(1, 2)]),
        "star213": lambda: star(3, [2, 1, 1, 1]),
        "path131": lambda: path(3, [1, 3, 1]),
        "path-10-1-10": lambda: path(3, [10, 1, 10]),
        "triangle": lambda: complete(3),
        "triangle-pendant": lambda: WeightedGraph.build(4, [(1, 2), (2, 3), (1, 3), (1, 4)]),
        "c5": lambda: cycle(5),
        "c5-heavy": lambda: cycle(5, [5, 1, 1, 1, 1]),
        "p4": lambda: path(4),
        "k4": lambda: complete(4),
        "k4-heavy": lambda: complete(4, [4, 1, 1, 1]),
        "k4-components": lambda: clique_components(3, 2, [4, 1, 1, 1, 1, 1, 5, 1]),
        "petersen": petersen,
        "grid-3x3-layered": lambda: layered_grid(3, 3, "rings"),
        "grid-3x4-rows": lambda: layered_grid(3, 4, "rows"),
        "grid-4x3-rows": lambda: layered_grid(4, 3, "rows"),
        "grid-5x2-rows": lambda: layered_grid(5, 2, "rows"),
        "matching-tight": lambda: matching_system(
            path(4), {(1, 2): 1, (2, 3): Fraction(11, 10), (3, 4): 1}
        ),
        "knapsack": knapsack_fixture,
        "nmc-gap-3": lambda: gap_instance(3, Fraction(1, 2)),
        "nmc-gap-4": lambda: gap_instance(4, Fraction(1, 4)),
        "nmc-star": lambda: NMCInstance(path(5), (1, 5)),
        "nmc-two-paths": lambda: NMCInstance(
            WeightedGraph.build(4, [(1, 2), (2, 4), (1, 3), (3, 4)]), (1, 4)
        ),
    }


FIXTURE_NAMES = tuple(_fixtures())


def fixture_suite(name: str):
    """Named deterministic instance: a WeightedGraph, NMCInstance or IndependenceSystem."""
    table = _fixtures()
    if name not in table:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(table)}")
    return table[name]()
