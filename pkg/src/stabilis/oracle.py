"""Brute-force ground truth for small graphs.

Exact maximum-weight independent set, the exact stability threshold and
certificate verification.  Everything runs on bitmasks with weights scaled
to a common integer denominator, so comparisons stay exact and fast.

Size caps default to 28 vertices for the branch-and-bound solver and 20 for
routines that enumerate independent sets.  Setting ``STABILIS_ORACLE_LIMIT``
overrides both.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .graph import (
    Certificate,
    Perturbation,
    VertexSet,
    WeightedGraph,
    apply_perturbation,
    is_independent,
    mask_of,
    vertices_of,
)

MIS_LIMIT = 28
ENUM_LIMIT = 20


class OracleLimitError(ValueError):
    """Instance too large for exhaustive methods."""


def oracle_limit(default: int) -> int:
    override = os.environ.get("STABILIS_ORACLE_LIMIT")
    return int(override) if override else default


def check_limit(n: int, default: int, what: str) -> None:
    limit = oracle_limit(default)
    if n > limit:
        raise OracleLimitError(f"{what}: n={n} exceeds the enumeration limit {limit}")


def integer_weights(weights) -> tuple[list[int], int]:
    """Scale rationals to integers; returns (scaled list, common denominator)."""
    den = 1
    for w in weights:
        den = den * w.denominator // math.gcd(den, w.denominator)
    return [int(w * den) for w in weights], den


def _lex_smaller(a: int, b: int) -> bool:
    # For equal-weight sets the lexicographically smaller sorted tuple is the one
    # containing the smallest element of the symmetric difference.
    d = a ^ b
    return bool(a & d & -d)


def _mis_masks(masks, w, cand: int) -> tuple[int, int]:
    best = [-1, 0]

    def consider(weight: int, chosen: int) -> None:
        if weight > best[0] or (weight == best[0] and _lex_smaller(chosen, best[1])):
            best[0], best[1] = weight, chosen

    def rec(cand: int, chosen: int, weight: int) -> None:
        bound = weight
        pivot, pivot_deg = 0, -1
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            bound += w[v]
            d = (masks[v] & cand).bit_count()
            if d > pivot_deg:
                pivot, pivot_deg = v, d
        if bound < best[0]:
            return
        if pivot_deg <= 0:
            consider(bound, chosen | cand)
            return
        bit = 1 << pivot
        rec(cand & ~masks[pivot] & ~bit, chosen | bit, weight + w[pivot])
        rec(cand & ~bit, chosen, weight)

    rec(cand, 0, 0)
    return best[1], best[0]


def max_independent_set_exact(G: WeightedGraph) -> tuple[VertexSet, Fraction]:
    """Maximum-weight independent set; ties go to the lexicographically smallest."""
    check_limit(G.n, MIS_LIMIT, "exact MIS")
    w, den = integer_weights((Fraction(0),) + G.weights)
    chosen, weight = _mis_masks(G.masks, w, mask_of(G.vertices))
    return vertices_of(chosen), Fraction(max(weight, 0), den)


def _independent_subsets(masks, cand: int) -> Iterator[int]:
    """All independent subsets of ``cand`` (including the empty set)."""
    stack = [(cand, 0)]
    while stack:
        cand, chosen = stack.pop()
        if not cand:
            yield chosen
            continue
        low = cand & -cand
        v = low.bit_length() - 1
        # push exclude first so that include is explored first
        stack.append((cand ^ low, chosen))
        stack.append((cand & ~masks[v] & ~low, chosen | low))


def independent_sets(G: WeightedGraph) -> Iterator[VertexSet]:
    """Every independent set of G, in a fixed deterministic order."""
    check_limit(G.n, ENUM_LIMIT, "independent-set enumeration")
    for m in _independent_subsets(G.masks, mask_of(G.vertices)):
        yield vertices_of(m)


@dataclass(frozen=True)
class StabilityReport:
    optimum: VertexSet
    optimum_weight: Fraction
    threshold: Fraction | None  # None means infinite
    witness: VertexSet | None

    def is_stable(self, gamma) -> bool:
        """gamma-stability (strict): threshold > gamma."""
        return self.threshold is None or self.threshold > Fraction(gamma)


def stability_threshold(G: WeightedGraph) -> StabilityReport:
    """Exact stability threshold of the optimum.

    For a competing set S only ``A = S - I*`` matters: the best S with that
    difference keeps every optimum vertex outside ``N(A)``, so the minimum ratio
    is taken over independent ``A`` disjoint from ``I*`` of
    ``w(N(A) & I*) / w(A)``.
    """
    check_limit(G.n, ENUM_LIMIT, "stability threshold")
    opt, opt_w = max_independent_set_exact(G)
    w, _ = integer_weights((Fraction(0),) + G.weights)
    masks = G.masks
    opt_mask = mask_of(opt)
    outside = mask_of(G.vertices) & ~opt_mask

    best_num = best_den = None
    best_a = 0
    stack = [(outside, 0, 0, 0)]
    while stack:
        cand, chosen, weight, nbrs = stack.pop()
        if not cand:
            if chosen:
                num = sum(w[v] for v in vertices_of(nbrs & opt_mask))
                if best_num is None or num * best_den < best_num * weight:
                    best_num, best_den, best_a = num, weight, chosen
            continue
        low = cand & -cand
        v = low.bit_length() - 1
        stack.append((cand ^ low, chosen, weight, nbrs))
        stack.append((cand & ~masks[v] & ~low, chosen | low, weight + w[v], nbrs | masks[v]))

    if best_num is None:
        return StabilityReport(opt, opt_w, None, None)
    nbr = 0
    for v in vertices_of(best_a):
        nbr |= masks[v]
    witness = vertices_of(best_a | (opt_mask & ~nbr))
    return StabilityReport(opt, opt_w, Fraction(best_num, best_den), witness)


def is_gamma_stable(G: WeightedGraph, gamma) -> bool:
    return stability_threshold(G).is_stable(gamma)


def _best_by_enumeration(G: WeightedGraph) -> int:
    w, _ = integer_weights((Fraction(0),) + G.weights)
    best = 0
    for m in _independent_subsets(G.masks, mask_of(G.vertices)):
        total = 0
        while m:
            low = m & -m
            total += w[low.bit_length() - 1]
            m ^= low
        if total > best:
            best = total
    return best


def verify_certificate(G: WeightedGraph, c: Certificate, method: str = "both") -> bool:
    """Check that ``c.solution`` is optimal under the certificate's perturbation.

    ``method`` picks the route: ``"enumerate"`` compares against every
    independent set, ``"fast"`` compares with the branch-and-bound optimum of the
    perturbed graph, ``"both"`` runs the two and insists they agree.  An invalid
    perturbation raises :class:`PerturbationError`; an uncertified solution
    returns False.
    """
    if method not in ("both", "enumerate", "fast"):
        raise ValueError(f"unknown method {method!r}")
    perturbed = apply_perturbation(G, c.perturbation)
    if not is_independent(G, c.solution):
        return False
    target = perturbed.total_weight(c.solution)
    verdicts = []
    if method in ("both", "enumerate"):
        check_limit(G.n, ENUM_LIMIT, "certificate enumeration")
        w, den = integer_weights((Fraction(0),) + perturbed.weights)
        verdicts.append(Fraction(_best_by_enumeration(perturbed), den) <= target)
    if method in ("both", "fast"):
        verdicts.append(max_independent_set_exact(perturbed)[1] <= target)
    if len(set(verdicts)) != 1:
        raise AssertionError("certificate check routes disagree")
    return verdicts[0]


def is_gamma_certified(G: WeightedGraph, S, gamma, method: str = "both") -> bool:
    """gamma * w(S - I) >= w(I - S) for every independent I (non-strict)."""
    cert = Certificate(tuple(sorted(S)), Perturbation.uniform(gamma, S))
    return verify_certificate(G, cert, method)


def chromatic_number(G: WeightedGraph) -> int:
    """Exact chromatic number by backtracking; intended for n <= 12 or so."""
    if G.n == 0:
        return 0
    order = sorted(G.vertices, key=lambda u: (-G.degree(u), u))

    def colorable(k: int) -> bool:
        color = {}

        def place(i: int) -> bool:
            if i == len(order):
                return True
            u = order[i]
            used = {color[v] for v in G.neighbors(u) if v in color}
            # symmetry: never open more than one new colour at a time
            top = max(color.values(), default=-1)
            for c in range(min(k, top + 2)):
                if c not in used:
                    color[u] = c
                    if place(i + 1):
                        return True
                    del color[u]
            return False

        return place(0)

    k = 1
    while not colorable(k):
        k += 1
    return k


def min_vertex_cover_weight(G: WeightedGraph) -> Fraction:
    return G.total_weight() - max_independent_set_exact(G)[1]
