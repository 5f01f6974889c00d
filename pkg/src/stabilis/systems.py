"""Independence systems given by a feasibility oracle.

Built-ins: independent sets of a graph, matchings of a graph, and a
knapsack system.  The first two are p-extendible (p = max(1, max degree)
and p = 2); the knapsack one is kept as a negative example and carries
``p = None``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Hashable, Iterator, Mapping

from .graph import GraphFormatError, WeightedGraph, format_rational, parse_rational

ENUM_LIMIT = 16


@dataclass(frozen=True)
class IndependenceSystem:
    name: str
    ground: tuple[Hashable, ...]
    weights: Mapping[Hashable, Fraction]
    feasible: Callable[[frozenset], bool]
    p: int | None
    data: Mapping = field(default_factory=dict)

    def weight(self, items) -> Fraction:
        return sum((self.weights[e] for e in items), Fraction(0))


@dataclass(frozen=True)
class CounterExample:
    A: tuple
    B: tuple
    e: Hashable
    needed: int


@dataclass(frozen=True)
class SystemCertificate:
    """Greedy output with the uniform multiplier ``gamma`` on its elements."""

    solution: tuple
    gamma: Fraction


def graph_system(G: WeightedGraph) -> IndependenceSystem:
    adj = G.adjacency

    def feasible(items: frozenset) -> bool:
        return all(not (adj[u] & items) for u in items)

    return IndependenceSystem(
        "graph-is", tuple(G.vertices), {u: G.weight(u) for u in G.vertices}, feasible,
        max(1, G.max_degree),
    )


def matching_system(G: WeightedGraph, edge_weights: Mapping[tuple[int, int], object] | None = None) -> IndependenceSystem:
    edges = tuple(sorted(G.edges))
    if edge_weights is None:
        weights = {e: Fraction(1) for e in edges}
    else:
        weights = {e: Fraction(edge_weights[e]) for e in edges}

    def feasible(items: frozenset) -> bool:
        ends = [x for e in items for x in e]
        return len(ends) == len(set(ends))

    return IndependenceSystem("matching", edges, weights, feasible, 2, {"graph": G})


def knapsack_system(items: Mapping[Hashable, tuple[object, object]], capacity) -> IndependenceSystem:
    """``items`` maps id -> (value, size)."""
    capacity = Fraction(capacity)
    sizes = {i: Fraction(s) for i, (_, s) in items.items()}
    values = {i: Fraction(v) for i, (v, _) in items.items()}
    if any(v <= 0 for v in values.values()) or any(s < 0 for s in sizes.values()):
        raise ValueError("values must be positive and sizes non-negative")

    def feasible(chosen: frozenset) -> bool:
        return sum((sizes[i] for i in chosen), Fraction(0)) <= capacity

    return IndependenceSystem("knapsack", tuple(sorted(items)), values, feasible, None,
                              {"sizes": sizes, "capacity": capacity})


def make_system(kind: str, **params) -> IndependenceSystem:
    builders = {"graph-is": graph_system, "matching": matching_system, "knapsack": knapsack_system}
    if kind not in builders:
        raise ValueError(f"unknown system kind {kind!r}")
    return builders[kind](**params)


def knapsack_fixture(m: int = 5) -> IndependenceSystem:
    """Capacity 1; item 0 has value 2 and size 1; items 1..m have value 1 and size 1/m."""
    items = {0: (2, 1)}
    items.update({i: (1, Fraction(1, m)) for i in range(1, m + 1)})
    return knapsack_system(items, 1)


def feasible_sets(system: IndependenceSystem, limit: int = ENUM_LIMIT) -> Iterator[frozenset]:
    """All feasible sets; relies on downward closure to prune."""
    if len(system.ground) > limit:
        raise ValueError(f"ground set of {len(system.ground)} exceeds limit {limit}")
    ground = system.ground

    def grow(start: int, current: frozenset):
        yield current
        for i in range(start, len(ground)):
            bigger = current | {ground[i]}
            if system.feasible(bigger):
                yield from grow(i + 1, bigger)

    yield from grow(0, frozenset())


def check_p_extendible(system: IndependenceSystem, p: int, limit: int = ENUM_LIMIT) -> CounterExample | None:
    """Exhaustive p-extendibility check.  None means verified."""
    order = {e: i for i, e in enumerate(system.ground)}

    def key(s):
        return tuple(sorted(order[e] for e in s))

    for B in sorted(feasible_sets(system, limit), key=lambda s: (len(s), key(s))):
        Bl = sorted(B, key=order.get)
        for r in range(len(Bl) + 1):
            for A in combinations(Bl, r):
                Aset = frozenset(A)
                for e in system.ground:
                    if e in B or not system.feasible(Aset | {e}):
                        continue
                    rest = [x for x in Bl if x not in Aset]
                    needed = next(
                        size
                        for size in range(len(rest) + 1)
                        for Z in combinations(rest, size)
                        if system.feasible((B - set(Z)) | {e})
                    )
                    if needed > p:
                        return CounterExample(tuple(A), tuple(Bl), e, needed)
    return None


def is_downward_closed(system: IndependenceSystem, items: frozenset) -> bool:
    """Every one-element removal of a feasible set is feasible (hence every subset)."""
    if not system.feasible(items):
        return True
    return all(system.feasible(items - {e}) for e in items)


def greedy_p_extendible(system: IndependenceSystem, multiplier=None) -> SystemCertificate:
    """Heaviest-first greedy; certificate multiplier defaults to the system's p."""
    order = {e: i for i, e in enumerate(system.ground)}
    chosen: frozenset = frozenset()
    for e in sorted(system.ground, key=lambda e: (-system.weights[e], order[e])):
        if system.feasible(chosen | {e}):
            chosen = chosen | {e}
    gamma = multiplier if multiplier is not None else system.p
    if gamma is None:
        raise ValueError("system is not p-extendible; pass an explicit multiplier")
    return SystemCertificate(tuple(sorted(chosen, key=order.get)), Fraction(gamma))


def is_system_certified(system: IndependenceSystem, solution, multiplier, limit: int = ENUM_LIMIT) -> bool:
    """multiplier * w(S - I) >= w(I - S) for every feasible I."""
    S = frozenset(solution)
    M = Fraction(multiplier)
    return all(M * system.weight(S - I) >= system.weight(I - S) for I in feasible_sets(system, limit))


# ------------------------------------------------------------ knapsack text


def parse_knapsack(text: str) -> IndependenceSystem:
    items: dict[int, tuple[Fraction, Fraction]] = {}
    capacity = None
    seen_header = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#") or parts[0] == "c":
            continue
        try:
            if parts[0] == "p" and len(parts) >= 2 and parts[1] == "knap":
                seen_header = True
            elif parts[0] == "i" and len(parts) == 4:
                ident = int(parts[1])
                if ident in items:
                    raise GraphFormatError(f"duplicate item {ident}", ln)
                items[ident] = (parse_rational(parts[2]), parse_rational(parts[3]))
            elif parts[0] == "capacity" and len(parts) == 2:
                capacity = parse_rational(parts[1])
            else:
                raise GraphFormatError(f"malformed line {raw.strip()!r}", ln)
        except GraphFormatError:
            raise
        except ValueError as exc:
            raise GraphFormatError(str(exc), ln) from None
    if not seen_header or capacity is None:
        raise GraphFormatError("knapsack text needs 'p knap' and 'capacity'")
    return knapsack_system(items, capacity)


def render_knapsack(system: IndependenceSystem) -> str:
    sizes, capacity = system.data["sizes"], system.data["capacity"]
    lines = [f"p knap {len(system.ground)}"]
    lines += [f"i {i} {format_rational(system.weights[i])} {format_rational(sizes[i])}" for i in system.ground]
    lines.append(f"capacity {format_rational(Fraction(capacity))}")
    return "\n".join(lines) + "\n"
