"""Solvers that are exact on sufficiently stable instances.

``purify`` and ``bounded_alg`` handle bounded-degree graphs, ``unbounded_alg``
branches on high-degree vertices, and ``robust_bounded_degree`` either
returns the optimum or reports that the instance is not stable.
"""

from __future__ import annotations

from fractions import Fraction
from math import ceil, comb, isqrt
from typing import Callable

from .graph import VertexSet, WeightedGraph, is_independent
from .greedy import greedy_independent_set
from .lp.flow import FlowNetwork, hopcroft_karp
from .lp.mis import is_integral, nemhauser_trotter
from .oracle import max_independent_set_exact


class NotStableEvidence(Exception):
    """A step whose success is guaranteed on stable inputs failed."""


def _integer_weight(G: WeightedGraph, u: int) -> int:
    w = G.weight(u)
    if w.denominator != 1:
        raise ValueError(f"vertex {u} has non-integer weight {w}")
    return w.numerator


def purify(G: WeightedGraph, I, gamma: int, method: str = "flow") -> VertexSet:
    """Vertices of I left with an unmatched copy in a maximum matching.

    The left side holds ``gamma * w(u)`` copies of each u in I, the right side
    ``w(v)`` copies of each v outside I, copies adjacent when the originals are.
    ``method="flow"`` runs the matching as a capacitated flow (one node per
    original vertex); ``method="copies"`` builds every copy and runs
    Hopcroft-Karp on them, which is only sensible for small weights.
    """
    I = tuple(sorted(set(I)))
    if not is_independent(G, I):
        raise ValueError("purify needs an independent set")
    if int(gamma) != gamma or gamma < 1:
        raise ValueError("gamma must be a positive integer")
    gamma = int(gamma)
    inside = set(I)
    outside = [v for v in G.vertices if v not in inside]
    w = {u: _integer_weight(G, u) for u in G.vertices}

    if method == "flow":
        index = {u: i + 1 for i, u in enumerate(I)}
        index.update({v: len(I) + 1 + i for i, v in enumerate(outside)})
        s, t = 0, G.n + 1
        net = FlowNetwork(G.n + 2)
        source_arcs = {u: net.add_arc(s, index[u], gamma * w[u]) for u in I}
        for v in outside:
            net.add_arc(index[v], t, w[v])
        for u in I:
            for v in sorted(G.neighbors(u)):
                net.add_arc(index[u], index[v], None)
        net.max_flow(s, t)
        return tuple(u for u in I if net.flow_on(source_arcs[u]) < gamma * w[u])

    if method == "copies":
        right_start = {}
        offset = 0
        for v in outside:
            right_start[v] = offset
            offset += w[v]
        owners, adjacency = [], []
        for u in I:
            nbrs = [r for v in sorted(G.neighbors(u)) for r in range(right_start[v], right_start[v] + w[v])]
            for _ in range(gamma * w[u]):
                owners.append(u)
                adjacency.append(nbrs)
        match = hopcroft_karp(len(owners), adjacency)
        return tuple(sorted({owners[i] for i, r in enumerate(match) if r is None}))

    raise ValueError(f"unknown method {method!r}")


def ceil_sqrt(x) -> int:
    """Smallest integer g >= 0 with g*g >= x, for rational x >= 0."""
    x = Fraction(x)
    g = isqrt(x.numerator // x.denominator)
    while g * g < x:
        g += 1
    return g


def bounded_gamma(G: WeightedGraph, alpha=1) -> int:
    return ceil_sqrt(2 * max(1, G.max_degree) * Fraction(alpha))


def exact_approx(H: WeightedGraph) -> VertexSet:
    return max_independent_set_exact(H)[0]


def bounded_alg(
    G: WeightedGraph,
    approx: Callable[[WeightedGraph], VertexSet] = exact_approx,
    alpha=1,
) -> VertexSet:
    """Repeatedly purify an approximate solution and delete its closed
    neighbourhood; stop once the remaining weight is at most gamma.

    gamma = ceil(sqrt(2 * max_degree * alpha)) is fixed from the input graph.
    """
    for u in G.vertices:
        _integer_weight(G, u)
    gamma = bounded_gamma(G, alpha)
    remaining = set(G.vertices)
    solution: set[int] = set()
    while True:
        H, labels = G.induced(remaining)
        if H.total_weight() <= gamma:
            if H.edges:
                raise NotStableEvidence("light remainder still has edges")
            solution |= remaining
            return tuple(sorted(solution))
        local = approx(H)
        kept = purify(H, local, gamma)
        if not kept:
            raise NotStableEvidence("purify returned the empty set")
        S = {labels[u - 1] for u in kept}
        solution |= S
        remaining -= S | G.neighborhood(S)


def welsh_powell(G: WeightedGraph) -> tuple[dict[int, int], int]:
    """Greedy colouring in non-increasing degree order; colours start at 1.

    Returns the colouring and the bound max_i min(d_i + 1, i).
    """
    order = sorted(G.vertices, key=lambda u: (-G.degree(u), u))
    color: dict[int, int] = {}
    for u in order:
        used = {color[v] for v in G.neighbors(u) if v in color}
        c = 1
        while c in used:
            c += 1
        color[u] = c
    bound = max((min(G.degree(u) + 1, i) for i, u in enumerate(order, start=1)), default=0)
    return color, bound


def _better(G: WeightedGraph, a: VertexSet, b: VertexSet | None) -> bool:
    if b is None:
        return True
    wa, wb = G.total_weight(a), G.total_weight(b)
    return wa > wb or (wa == wb and a < b)


def unbounded_alg(G: WeightedGraph, k: int) -> VertexSet:
    """Branching algorithm that is exact when the threshold exceeds n/k."""
    if k < 1:
        raise ValueError("k must be positive")

    def solve(within: frozenset, k: int) -> VertexSet:
        if not within:
            return ()
        H, labels = G.induced(within)
        if k == 1:
            return tuple(labels[u - 1] for u in greedy_independent_set(H))
        x = nemhauser_trotter(H).assignment
        if is_integral(x):
            return tuple(labels[u - 1] for u in H.vertices if x[u] == 1)
        threshold = ceil(Fraction(H.n, k))
        high = {labels[u - 1] for u in H.vertices if H.degree(u) >= threshold}
        best: VertexSet | None = None
        for u in sorted(high):
            rest = within - G.neighbors(u) - {u}
            cand = tuple(sorted((u,) + solve(rest, k - 1)))
            if _better(G, cand, best):
                best = cand
        cand = solve(within - high, k - 1)
        if _better(G, cand, best):
            best = cand
        return best

    return solve(frozenset(G.vertices), k)


def _path_dp(G: WeightedGraph, order: list[int]) -> tuple[Fraction, list[int]]:
    """Max-weight independent set of a path given in walk order."""
    take, skip = Fraction(0), Fraction(0)
    take_set: list[int] = []
    skip_set: list[int] = []
    for u in order:
        new_take = skip + G.weight(u), skip_set + [u]
        if take > skip:
            new_skip = take, take_set
        else:
            new_skip = skip, skip_set
        (take, take_set), (skip, skip_set) = new_take, new_skip
    return (take, take_set) if take > skip else (skip, skip_set)


def _walk(G: WeightedGraph, comp: VertexSet) -> tuple[list[int], bool]:
    """Order the vertices of a path or cycle component; flag cycles."""
    ends = [u for u in comp if G.degree(u) <= 1]
    cycle = not ends
    start = min(ends) if ends else min(comp)
    order, prev = [start], None
    cur = start
    while True:
        nxt = sorted(v for v in G.neighbors(cur) if v != prev and v not in order[:1] + order[-1:])
        nxt = [v for v in nxt if v not in order]
        if not nxt:
            return order, cycle
        prev, cur = cur, nxt[0]
        order.append(cur)


def max_weight_degree_two(G: WeightedGraph) -> VertexSet:
    """Exact optimum when every degree is at most 2 (paths and cycles)."""
    if G.max_degree > 2:
        raise ValueError("graph has a vertex of degree > 2")
    chosen: list[int] = []
    for comp in G.components():
        order, cycle = _walk(G, comp)
        if not cycle:
            chosen += _path_dp(G, order)[1]
            continue
        # first vertex out, or first vertex in (and both cycle neighbours out)
        w_out, s_out = _path_dp(G, order[1:])
        w_in, s_in = _path_dp(G, order[2:-1])
        w_in += G.weight(order[0])
        chosen += s_out if w_out >= w_in else [order[0]] + s_in
    return tuple(sorted(chosen))


def robust_bounded_degree(G: WeightedGraph) -> VertexSet | None:
    """Optimum, or None when the instance is shown not to be stable enough.

    Max degree <= 2 is solved exactly.  Otherwise complete components on
    max_degree + 1 vertices take their heaviest vertex and the rest goes to the
    LP, whose answer is used only when integral.
    """
    delta = G.max_degree
    if delta <= 2:
        return max_weight_degree_two(G)
    chosen: list[int] = []
    rest: list[int] = []
    for comp in G.components():
        edges = sum(1 for u in comp for v in G.neighbors(u) if u < v)
        if len(comp) == delta + 1 and edges == comp_edges(delta + 1):
            chosen.append(min(comp, key=lambda u: (-G.weight(u), u)))
        else:
            rest += comp
    if rest:
        H, labels = G.induced(rest)
        x = nemhauser_trotter(H).assignment
        if not is_integral(x):
            return None
        chosen += [labels[u - 1] for u in H.vertices if x[u] == 1]
    return tuple(sorted(chosen))


def comp_edges(size: int) -> int:
    return comb(size, 2)
