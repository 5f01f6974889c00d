"""Node Multiway Cut: remove non-terminal vertices so no two terminals stay
connected, at minimum total weight.

Stability for this minimisation problem uses the ratio form: the optimum X*
is gamma-stable iff w(X - X*) > gamma * w(X* - X) for every other feasible X.
Scaling every vertex of X* by gamma is the worst perturbation for each
competitor, which gives the equivalence.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .graph import GraphFormatError, VertexSet, WeightedGraph, parse_graph_text, render_graph
from .lp.simplex import OPTIMAL, LinearProgram, LPSolution, simplex_solve
from .oracle import ENUM_LIMIT, check_limit, integer_weights
from .rounding import as_rng

HALF = Fraction(1, 2)
HALF_LIMIT = 12


@dataclass(frozen=True)
class NMCInstance:
    graph: WeightedGraph
    terminals: tuple[int, ...]

    def __post_init__(self) -> None:
        G, T = self.graph, self.terminals
        if len(T) < 2:
            raise ValueError("need at least two terminals")
        if len(set(T)) != len(T):
            raise ValueError("duplicate terminal")
        for s in T:
            G._check_vertex(s)
        for a in T:
            for b in T:
                if a < b and G.has_edge(a, b):
                    raise ValueError(f"terminals {a} and {b} are adjacent")
        if not G.is_connected():
            raise ValueError("graph must be connected")

    @property
    def k(self) -> int:
        return len(self.terminals)

    @property
    def inner(self) -> VertexSet:
        """Removable (non-terminal) vertices."""
        T = set(self.terminals)
        return tuple(u for u in self.graph.vertices if u not in T)


def parse_nmc(text: str) -> NMCInstance:
    G, terminals = parse_graph_text(text, "nmc")
    try:
        return NMCInstance(G, tuple(terminals))
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def render_nmc(inst: NMCInstance) -> str:
    return render_graph(inst.graph, "nmc", inst.terminals)


def is_cut(inst: NMCInstance, X) -> bool:
    """True when X avoids terminals and separates every terminal pair."""
    removed = set(X)
    if removed & set(inst.terminals):
        return False
    G = inst.graph
    owner: dict[int, int] = {}
    stack = []
    for s in inst.terminals:
        owner[s] = s
        stack.append(s)
    while stack:
        u = stack.pop()
        for v in G.neighbors(u):
            if v in removed:
                continue
            if v not in owner:
                owner[v] = owner[u]
                stack.append(v)
            elif owner[v] != owner[u]:
                return False
    return True


@dataclass(frozen=True)
class NMCOptimum:
    cut: VertexSet
    weight: Fraction
    threshold: Fraction | None  # None: no competing cut, stable for every gamma

    def is_stable(self, gamma) -> bool:
        return self.threshold is None or self.threshold > Fraction(gamma)


def exact_nmc(inst: NMCInstance) -> NMCOptimum:
    """Minimum cut and stability threshold by enumerating every subset."""
    inner = inst.inner
    check_limit(len(inner), ENUM_LIMIT, "multiway cut enumeration")
    G = inst.graph
    feasible = []
    for mask in range(1 << len(inner)):
        X = tuple(u for i, u in enumerate(inner) if mask >> i & 1)
        if is_cut(inst, X):
            feasible.append((G.total_weight(X), X))
    weight, best = min(feasible)
    best_set = set(best)
    threshold = None
    for _, X in feasible:
        lost = best_set - set(X)
        if lost:
            ratio = G.total_weight(set(X) - best_set) / G.total_weight(lost)
            if threshold is None or ratio < threshold:
                threshold = ratio
    return NMCOptimum(best, weight, threshold)


# ------------------------------------------------------------ path LP


def _lightest_paths(inst: NMCInstance, x: Mapping[int, Fraction], source: int):
    """Dijkstra on the split graph: u_in -> u_out costs x_u, u_out -> v_in is free.

    Returns (distance, predecessor) keyed by original vertex (via u_out).
    """
    G = inst.graph
    cost = {u: Fraction(x.get(u, 0)) for u in G.vertices}
    dist = {(source, "in"): Fraction(0)}
    pred: dict = {}
    heap = [(Fraction(0), source, "in")]
    done = set()
    while heap:
        d, u, side = heapq.heappop(heap)
        if (u, side) in done:
            continue
        done.add((u, side))
        if side == "in":
            steps = [((u, "out"), cost[u])]
        else:
            steps = [((v, "in"), Fraction(0)) for v in sorted(G.neighbors(u))]
        for node, c in steps:
            nd = d + c
            if node not in dist or nd < dist[node]:
                dist[node] = nd
                pred[node] = (u, side)
                heapq.heappush(heap, (nd, node[0], node[1]))
    out = {u: dist[(u, "out")] for u in G.vertices if (u, "out") in dist}
    return out, pred


def _walk_back(pred, target: int) -> list[int]:
    path, node = [], (target, "out")
    while True:
        if node[1] == "out":
            path.append(node[0])
        if node not in pred:
            return path[::-1]
        node = pred[node]


def nmc_lp_solve(inst: NMCInstance, max_rounds: int = 10_000) -> LPSolution:
    """Path LP by cutting planes: min w.x with sum over each terminal path >= 1."""
    G, T = inst.graph, set(inst.terminals)
    inner = inst.inner
    lp = LinearProgram(list(inner), {u: G.weight(u) for u in inner}, "min")
    seen: set[frozenset] = set()
    for _ in range(max_rounds):
        sol = simplex_solve(lp)
        if sol.status != OPTIMAL:
            raise AssertionError(f"multiway cut LP reported {sol.status}")
        x = dict(sol.assignment)
        fresh: set[frozenset] = set()
        for s in inst.terminals:
            dist, pred = _lightest_paths(inst, x, s)
            for t in inst.terminals:
                if t > s and dist.get(t, Fraction(1)) < 1:
                    support = frozenset(u for u in _walk_back(pred, t) if u not in T)
                    if support in fresh:  # several terminal pairs can share a path
                        continue
                    if support in seen:
                        raise AssertionError("separation returned a known constraint")
                    fresh.add(support)
                    lp.add({u: 1 for u in support}, ">=", 1)
        seen |= fresh
        if not fresh:
            full = {u: x.get(u, Fraction(0)) for u in G.vertices}
            return LPSolution(OPTIMAL, sol.value, full)
    raise AssertionError("cutting-plane loop did not converge")


# ------------------------------------------------------------ half-integral


@dataclass(frozen=True)
class NMCHalfIntegral:
    instance: NMCInstance
    x: Mapping[int, Fraction]
    value: Fraction
    zero: VertexSet
    half: VertexSet
    one: VertexSet
    regions: Mapping[int, VertexSet]   # terminal -> B_i
    boundary: Mapping[int, VertexSet]  # terminal -> delta(B_i)


def _half_feasible(inst: NMCInstance, doubled: Mapping[int, int]) -> bool:
    """Every terminal path has x-length >= 1, for x in {0, 1/2, 1} (doubled)."""
    G = inst.graph
    owner: dict[int, int] = {s: s for s in inst.terminals}
    stack = list(inst.terminals)
    while stack:
        u = stack.pop()
        for v in G.neighbors(u):
            if doubled.get(v, 0) != 0:
                continue
            if v not in owner:
                owner[v] = owner[u]
                stack.append(v)
            elif owner[v] != owner[u]:
                return False
    for u, d in doubled.items():
        if d == 1:
            touching = {owner[v] for v in G.neighbors(u) if v in owner}
            if len(touching) > 1:
                return False
    return True


def half_integral_structure(inst: NMCInstance, x: Mapping[int, Fraction]) -> NMCHalfIntegral:
    G = inst.graph
    T = set(inst.terminals)
    zero = tuple(u for u in G.vertices if u in T or x[u] == 0)
    half = tuple(u for u in G.vertices if u not in T and x[u] == HALF)
    one = tuple(u for u in G.vertices if u not in T and x[u] == 1)
    if len(zero) + len(half) + len(one) != G.n:
        raise ValueError("assignment is not half-integral")
    zero_set, half_set = set(zero), set(half)
    regions, boundary = {}, {}
    for s in inst.terminals:
        region, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for v in G.neighbors(u):
                if v in zero_set and v not in region:
                    region.add(v)
                    stack.append(v)
        regions[s] = tuple(sorted(region))
        boundary[s] = tuple(sorted(v for v in G.neighborhood(region) if v in half_set))
    for u in half:
        count = sum(u in boundary[s] for s in inst.terminals)
        assert count == 1, f"half vertex {u} lies on {count} region boundaries"
    value = sum((G.weight(u) * x[u] for u in G.vertices if u not in T), Fraction(0))
    full = {u: (Fraction(0) if u in T else Fraction(x[u])) for u in G.vertices}
    return NMCHalfIntegral(inst, full, value, zero, half, one, regions, boundary)


def nmc_half_integral(inst: NMCInstance, lp_value: Fraction | None = None) -> NMCHalfIntegral:
    """Cheapest feasible x in {0, 1/2, 1}^inner by exhaustive search.

    Its value must equal the LP optimum; a mismatch raises AssertionError.
    """
    inner = inst.inner
    check_limit(len(inner), HALF_LIMIT, "half-integral search")
    w, den = integer_weights([inst.graph.weight(u) for u in inner])
    # x = 1 everywhere is feasible because terminals are pairwise non-adjacent
    best = {u: 2 for u in inner}
    best_cost = 2 * sum(w)
    current: dict[int, int] = {}

    def search(i: int, cost: int) -> None:
        nonlocal best, best_cost
        if cost >= best_cost:
            return
        if i == len(inner):
            if _half_feasible(inst, current):
                best, best_cost = dict(current), cost
            return
        for c in (0, 1, 2):
            current[inner[i]] = c
            search(i + 1, cost + c * w[i])
        del current[inner[i]]

    search(0, 0)
    best_value = Fraction(best_cost, 2 * den)
    if lp_value is None:
        lp_value = nmc_lp_solve(inst).value
    assert best_value == lp_value, f"half-integral optimum {best_value} != LP optimum {lp_value}"
    x = {u: Fraction(best[u], 2) for u in inner}
    return half_integral_structure(inst, x)


def nmc_round(h: NMCHalfIntegral, seed) -> VertexSet:
    """V_1 plus every region boundary except that of one random terminal,
    drawn independently for each component of G[V_0 + V_half]."""
    rng = as_rng(seed)
    inst = h.instance
    k = inst.k
    chosen = set(h.one)
    for comp in inst.graph.components(h.zero + h.half):
        members = set(comp)
        j = rng.randrange(k)
        for i, s in enumerate(inst.terminals):
            if s in members and i != j:
                chosen.update(h.boundary[s])
    return tuple(sorted(chosen))


def robust_nmc(inst: NMCInstance) -> VertexSet | None:
    """The optimum when the LP optimum is integral, otherwise None."""
    x = nmc_lp_solve(inst).assignment
    if any(v not in (0, 1) for v in x.values()):
        return None
    return tuple(u for u in inst.inner if x[u] == 1)


# ------------------------------------------------------------ constructions


def vc_to_nmc(G: WeightedGraph) -> NMCInstance:
    """Attach terminal n+i to vertex i; minimum cuts are minimum vertex covers."""
    if G.n < 2:
        raise ValueError("reduction needs at least 2 vertices")
    n = G.n
    edges = list(G.edges) + [(u, n + u) for u in G.vertices]
    weights = list(G.weights) + [Fraction(1)] * n
    H = WeightedGraph.build(2 * n, edges, weights)
    return NMCInstance(H, tuple(range(n + 1, 2 * n + 1)))


def gap_instance(k: int, epsilon) -> NMCInstance:
    """Star with spokes u_1..u_k (ids 1..k), hub c (id k+1) and terminal
    s_i (id k+1+i) hanging off u_i.  w(u_i) = 1 for i < k,
    w(u_k) = k - 1 - epsilon/2, w(c) = k^3."""
    epsilon = Fraction(epsilon)
    if k < 3:
        raise ValueError("gap instance needs k >= 3")
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie strictly between 0 and 1")
    hub = k + 1
    edges = [(i, hub) for i in range(1, k + 1)] + [(i, hub + i) for i in range(1, k + 1)]
    weights = [Fraction(1)] * (k - 1) + [k - 1 - epsilon / 2, Fraction(k**3)] + [Fraction(1)] * k
    G = WeightedGraph.build(2 * k + 1, edges, weights)
    return NMCInstance(G, tuple(range(hub + 1, hub + k + 1)))

