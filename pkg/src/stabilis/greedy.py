"""Greedy algorithms that return a certificate along with the solution."""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

from .graph import Certificate, Perturbation, VertexSet, WeightedGraph, is_independent


def heaviest_first(G: WeightedGraph, within=None) -> list[int]:
    pool = G.vertices if within is None else within
    return sorted(pool, key=lambda u: (-G.weight(u), u))


def greedy_independent_set(G: WeightedGraph) -> VertexSet:
    """Repeatedly take the heaviest remaining vertex (smallest id on ties)."""
    chosen: set[int] = set()
    blocked: set[int] = set()
    for u in heaviest_first(G):
        if u not in blocked:
            chosen.add(u)
            blocked |= G.neighbors(u)
    return tuple(sorted(chosen))


def greedy_certified(G: WeightedGraph) -> Certificate:
    """Greedy solution boosted by max(1, max degree) on its own vertices."""
    S = greedy_independent_set(G)
    factor = max(1, G.max_degree)
    return Certificate(S, Perturbation.uniform(factor, S))


def modified_greedy_gamma(delta: int) -> Fraction:
    """Smallest k/1000 with (k/1000)^2 >= delta^2 - delta + 1."""
    target = (delta * delta - delta + 1) * 10**6
    k = isqrt(target)
    if k * k < target:
        k += 1
    return Fraction(k, 1000)


def modified_greedy(G: WeightedGraph, delta: int | None = None) -> Certificate:
    """Greedy variant for max degree ``delta >= 3``.

    Take the heaviest remaining vertex u.  Keep u when it has fewer than
    ``delta`` live neighbours, when those neighbours are not independent, or
    when ``gamma * w(u) >= w(N(u))``; then drop u and N(u).  Otherwise keep
    N(u) and drop N(u) together with its neighbourhood.
    """
    if delta is None:
        delta = G.max_degree
    if delta < 3:
        raise ValueError("modified greedy needs delta >= 3; use greedy_certified")
    if G.max_degree > delta:
        raise ValueError(f"max degree {G.max_degree} exceeds delta={delta}")
    gamma = modified_greedy_gamma(delta)
    live = set(G.vertices)
    chosen: set[int] = set()
    while live:
        u = min(live, key=lambda v: (-G.weight(v), v))
        nbrs = G.neighbors(u) & live
        if (
            len(nbrs) < delta
            or not is_independent(G, nbrs)
            or gamma * G.weight(u) >= G.total_weight(nbrs)
        ):
            chosen.add(u)
            live -= nbrs | {u}
        else:
            chosen |= nbrs
            second = set()
            for v in nbrs:
                second |= G.neighbors(v)
            live -= nbrs | second
    S = tuple(sorted(chosen))
    return Certificate(S, Perturbation.uniform(gamma, S))
