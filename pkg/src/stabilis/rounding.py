"""Randomized rounding of fractional independent-set solutions.

Every randomized function takes either an ``int`` seed or a ready
``random.Random``.  Trial ``i`` of a run with seed ``s`` uses
``trial_rng(s, i)``: Python's Mersenne Twister seeded with the first eight
bytes of SHA-256 over ``"s:i"``, so serial and parallel runs agree exactly.
"""

from __future__ import annotations

import hashlib
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Mapping

from .graph import VertexSet, WeightedGraph, format_rational, is_independent
from .lp.mis import half_partition
from .lp.simplex import OPTIMAL, LinearProgram, simplex_solve
from .oracle import ENUM_LIMIT, check_limit, independent_sets


def derive_seed(seed: int, trial: int) -> int:
    digest = hashlib.sha256(f"{seed}:{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(derive_seed(seed, trial))


def as_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(derive_seed(int(seed), 0))


# ------------------------------------------------------------ Hochbaum


def check_coloring(G: WeightedGraph, coloring: Mapping[int, int], within) -> int:
    """Validate a proper colouring of G[within] with colours 1..k; return k."""
    within = set(within)
    for u in within:
        if u not in coloring:
            raise ValueError(f"vertex {u} has no colour")
        if coloring[u] < 1:
            raise ValueError(f"colour of vertex {u} must be >= 1")
        for v in G.neighbors(u):
            if v in within and coloring[v] == coloring[u]:
                raise ValueError(f"improper colouring: {u} and {v} share colour {coloring[u]}")
    return max((coloring[u] for u in within), default=1)


def hochbaum_round(G: WeightedGraph, x: Mapping[int, Fraction], coloring: Mapping[int, int], seed, k: int | None = None) -> VertexSet:
    """V_1 plus one uniformly chosen colour class of V_half.

    ``k`` defaults to the largest colour used on V_half.
    """
    _, half, one = half_partition(x)
    used = check_coloring(G, coloring, half)
    k = used if k is None else k
    if k < used:
        raise ValueError(f"k={k} is smaller than the colours in use ({used})")
    j = as_rng(seed).randrange(1, k + 1)
    return tuple(sorted(set(one) | {u for u in half if coloring[u] == j}))


# ------------------------------------------------------------ Baker slabs


def baker_decompose(G: WeightedGraph, k: int, j: int) -> list[VertexSet]:
    """Slabs of layers: 0..j, then j..k+j, k+j..2k+j, ... until the top layer.

    Consecutive slabs share the layers congruent to j mod k.
    """
    if G.layers is None:
        raise ValueError("graph has no layers")
    if k < 1 or not 0 <= j < k:
        raise ValueError("need k >= 1 and 0 <= j < k")
    top = max(G.layers, default=0)
    slabs = []
    i = 0
    while True:
        low, high = (i - 1) * k + j, i * k + j
        slab = tuple(u for u in G.vertices if low <= G.layers[u - 1] <= high)
        if slab:
            slabs.append(slab)
        if high >= top:
            return slabs
        i += 1


# ------------------------------------------------------------ mixtures


class NotInHull(ValueError):
    """The marginals lie outside the independent-set polytope of the subgraph."""


@dataclass(frozen=True)
class Mixture:
    parts: tuple[tuple[VertexSet, Fraction], ...]

    def marginal(self, u: int) -> Fraction:
        return sum((p for S, p in self.parts if u in S), Fraction(0))

    def sample(self, rng: random.Random) -> VertexSet:
        """Exact inverse CDF over a common denominator."""
        den = lcm(*(p.denominator for _, p in self.parts))
        r = rng.randrange(den)
        acc = 0
        for S, p in self.parts:
            acc += p.numerator * (den // p.denominator)
            if r < acc:
                return S
        raise AssertionError("mixture probabilities do not sum to 1")


def marginals_to_mixture(H: WeightedGraph, y: Mapping[int, Fraction]) -> Mixture:
    """Convex combination of independent sets of H with marginals y."""
    check_limit(H.n, ENUM_LIMIT, "mixture enumeration")
    sets = list(independent_sets(H))
    lp = LinearProgram(list(range(len(sets))), {}, "max")
    lp.add({i: 1 for i in range(len(sets))}, "=", 1)
    for u in H.vertices:
        lp.add({i: 1 for i, S in enumerate(sets) if u in S}, "=", Fraction(y.get(u, 0)))
    sol = simplex_solve(lp)
    if sol.status != OPTIMAL:
        raise NotInHull("marginals are not a convex combination of independent sets")
    parts = tuple((sets[i], sol[i]) for i in range(len(sets)) if sol[i] > 0)
    return Mixture(parts)


# ------------------------------------------------------------ planar


def slab_mixture(G: WeightedGraph, slab: VertexSet, y: Mapping[int, Fraction], cache: dict | None = None) -> Mixture:
    key = (slab, tuple(Fraction(y.get(u, 0)) for u in slab))
    if cache is not None and key in cache:
        return cache[key]
    H, labels = G.induced(slab)
    try:
        local = marginals_to_mixture(H, {i: y.get(u, 0) for i, u in enumerate(labels, start=1)})
    except NotInHull as exc:
        raise NotInHull(f"slab {list(slab)}: {exc}") from None
    mix = Mixture(tuple((tuple(labels[i - 1] for i in S), p) for S, p in local.parts))
    if cache is not None:
        cache[key] = mix
    return mix


def planar_round(G: WeightedGraph, k: int, y: Mapping[int, Fraction], seed, cache: dict | None = None) -> VertexSet:
    """Baker rounding: random shift j, one sample per slab, boundary vertices
    kept only when both slabs containing them sampled them."""
    rng = as_rng(seed)
    j = rng.randrange(k)
    slabs = baker_decompose(G, k, j)
    hits: dict[int, int] = {}
    seen: dict[int, int] = {}
    for slab in slabs:
        sample = slab_mixture(G, slab, y, cache).sample(rng)
        for u in slab:
            seen[u] = seen.get(u, 0) + 1
        for u in sample:
            hits[u] = hits.get(u, 0) + 1
    return tuple(sorted(u for u, c in hits.items() if c == seen[u]))


# ------------------------------------------------------------ property check


@dataclass(frozen=True)
class RoundingScheme:
    """``kind`` is "hochbaum", "planar" or "nmc"; ``coloring`` is used by hochbaum."""

    kind: str
    k: int
    coloring: Mapping[int, int] = field(default_factory=dict)

    @property
    def alpha(self) -> Fraction:
        k = Fraction(self.k)
        return {"hochbaum": k / 2, "planar": k / (k - 1), "nmc": 2 * (k - 1) / k}[self.kind]

    @property
    def beta(self) -> Fraction:
        k = Fraction(self.k)
        return {"hochbaum": 2 * (k - 1) / k, "planar": (k + 1) / k, "nmc": k / 2}[self.kind]

    def claimed_in(self, x: Fraction) -> tuple[str, Fraction]:
        k = Fraction(self.k)
        if self.kind == "hochbaum":
            return ">=", x / self.alpha
        if self.kind == "planar":
            return ">=", (k - 1) / k * x + x * x / k
        return "<=", self.alpha * x

    def claimed_out(self, x: Fraction) -> tuple[str, Fraction]:
        if self.kind == "nmc":
            return ">=", (1 - x) / self.beta
        return "<=", self.beta * (1 - x)

    def sample(self, instance, sol, rng: random.Random, cache: dict) -> VertexSet:
        if self.kind == "hochbaum":
            out = hochbaum_round(instance, sol, self.coloring, rng, self.k)
            assert is_independent(instance, out), "hochbaum rounding produced a dependent set"
        elif self.kind == "planar":
            out = planar_round(instance, self.k, sol, rng, cache)
            assert is_independent(instance, out), "planar rounding produced a dependent set"
        elif self.kind == "nmc":
            from .multiway import is_cut, nmc_round

            out = nmc_round(sol, rng)
            assert is_cut(instance, out), "nmc rounding left two terminals connected"
        else:
            raise ValueError(f"unknown scheme {self.kind!r}")
        return out


def outside_tolerance(relation: str, bound: Fraction, hits: int, trials: int) -> bool:
    """True when the empirical frequency misses the bound by more than 4 sigma."""
    freq = Fraction(hits, trials)
    gap = bound - freq if relation == ">=" else freq - bound
    if gap <= 0:
        return False
    b = min(max(bound, Fraction(0)), Fraction(1))
    return gap * gap > 16 * b * (1 - b) / trials


@dataclass(frozen=True)
class PropertyRow:
    vertex: int
    x: Fraction
    freq_in: Fraction
    in_relation: str
    in_bound: Fraction
    freq_out: Fraction
    out_relation: str
    out_bound: Fraction
    ok: bool

    def tsv(self) -> str:
        cells = [
            str(self.vertex), format_rational(self.x),
            format_rational(self.freq_in), f"{self.in_relation}{format_rational(self.in_bound)}",
            format_rational(self.freq_out), f"{self.out_relation}{format_rational(self.out_bound)}",
            "ok" if self.ok else "VIOLATION",
        ]
        return "\t".join(cells)


@dataclass(frozen=True)
class PropertyReport:
    trials: int
    rows: tuple[PropertyRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def tsv(self) -> str:
        head = "vertex\tx\tfreq_in\tclaim_in\tfreq_out\tclaim_out\tverdict"
        return "\n".join([head] + [r.tsv() for r in self.rows]) + "\n"


def _count_hits(scheme: RoundingScheme, instance, sol, seed: int, start: int, stop: int) -> dict[int, int]:
    cache: dict = {}
    hits: dict[int, int] = {}
    for t in range(start, stop):
        for u in scheme.sample(instance, sol, trial_rng(seed, t), cache):
            hits[u] = hits.get(u, 0) + 1
    return hits


def check_rounding_properties(
    scheme: RoundingScheme, instance, sol, trials: int, seed: int, jobs: int = 1,
) -> PropertyReport:
    """Empirical inclusion frequencies against the scheme's claimed bounds.

    ``sol`` is the per-vertex fractional vector (hochbaum, planar) or an
    ``NMCHalfIntegral`` (nmc).  Every trial's output is checked for
    feasibility.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if jobs > 1:
        step = -(-trials // jobs)
        bounds = [(s, min(trials, s + step)) for s in range(0, trials, step)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_count_hits, *zip(*[(scheme, instance, sol, seed, a, b) for a, b in bounds])))
    else:
        parts = [_count_hits(scheme, instance, sol, seed, 0, trials)]
    hits: dict[int, int] = {}
    for part in parts:
        for u, c in part.items():
            hits[u] = hits.get(u, 0) + c

    if scheme.kind == "nmc":
        graph, x = instance.graph, sol.x
        vertices = [u for u in graph.vertices if u not in instance.terminals]
    else:
        graph, x = instance, sol
        vertices = list(graph.vertices)
    rows = []
    for u in vertices:
        xu = Fraction(x.get(u, 0))
        c = hits.get(u, 0)
        rel_in, b_in = scheme.claimed_in(xu)
        rel_out, b_out = scheme.claimed_out(xu)
        bad = outside_tolerance(rel_in, b_in, c, trials) or outside_tolerance(rel_out, b_out, trials - c, trials)
        rows.append(PropertyRow(u, xu, Fraction(c, trials), rel_in, b_in,
                                Fraction(trials - c, trials), rel_out, b_out, not bad))
    return PropertyReport(trials, tuple(rows))

