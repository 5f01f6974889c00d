"""LP relaxations of maximum-weight independent set.

* the standard edge relaxation, solved by simplex or by the bipartite-doubling
  max-flow construction (which always yields a half-integral optimum);
* the level-t Sherali-Adams lift;
* the generic robust solver: solve, and answer only if the optimum is integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb
from typing import Mapping

from ..graph import VertexSet, WeightedGraph
from ..oracle import integer_weights
from .flow import FlowNetwork
from .simplex import OPTIMAL, LinearProgram, LPSolution, simplex_solve, solve_with_row_generation

HALF = Fraction(1, 2)
SA_BUDGET = 500_000


class BudgetExceeded(ValueError):
    """The lifted program would exceed the configured row budget."""


def standard_lp(G: WeightedGraph) -> LinearProgram:
    lp = LinearProgram(list(G.vertices), {u: G.weight(u) for u in G.vertices}, "max")
    for u in G.vertices:
        lp.bounds[u] = (Fraction(0), Fraction(1))
    for u, v in sorted(G.edges):
        lp.add({u: 1, v: 1}, "<=", 1)
    return lp


def nemhauser_trotter(G: WeightedGraph) -> LPSolution:
    """Half-integral optimum of the standard LP via min-weight vertex cover
    of the bipartite double cover."""
    n = G.n
    w, den = integer_weights(G.weights)
    s, t = 0, 2 * n + 1
    net = FlowNetwork(2 * n + 2)
    for u in G.vertices:
        net.add_arc(s, u, w[u - 1])
        net.add_arc(n + u, t, w[u - 1])
    for u, v in sorted(G.edges):
        net.add_arc(u, n + v, None)
        net.add_arc(v, n + u, None)
    net.max_flow(s, t)
    reach = net.source_side(s)
    x = {}
    for u in G.vertices:
        cover = (u not in reach) + (n + u in reach)
        x[u] = 1 - Fraction(cover, 2)
    _settle_bipartite_halves(G, x)
    value = sum((G.weight(u) * x[u] for u in G.vertices), Fraction(0))
    return LPSolution(OPTIMAL, value, x)


def _settle_bipartite_halves(G: WeightedGraph, x: dict) -> None:
    """Round bipartite components of G[V_half] to one side, in place.

    All-1/2 is optimal on G[V_half], so both sides of a bipartite component
    weigh the same and the side holding the smallest vertex is an equally
    good integral choice.  Bipartite inputs thus get integral optima.
    """
    half = [u for u in G.vertices if x[u] == HALF]
    for comp in G.components(half):
        side = {comp[0]: 0}
        queue = [comp[0]]
        bipartite = True
        while queue and bipartite:
            u = queue.pop()
            for v in G.neighbors(u):
                if x[v] != HALF:
                    continue
                if v not in side:
                    side[v] = 1 - side[u]
                    queue.append(v)
                elif side[v] == side[u]:
                    bipartite = False
        if not bipartite:
            continue
        first = [u for u in comp if side[u] == 0]
        assert 2 * G.total_weight(first) == G.total_weight(comp), "all-1/2 was not optimal on V_half"
        for u in comp:
            x[u] = Fraction(1 - side[u])


def solve_standard_lp(G: WeightedGraph, method: str = "simplex") -> LPSolution:
    if method == "simplex":
        return simplex_solve(standard_lp(G))
    if method in ("nt", "nemhauser-trotter"):
        return nemhauser_trotter(G)
    raise ValueError(f"unknown method {method!r}")


def is_integral(x: Mapping[int, Fraction]) -> bool:
    return all(v in (0, 1) for v in x.values())


def half_partition(x: Mapping[int, Fraction]) -> tuple[VertexSet, VertexSet, VertexSet]:
    """(V_0, V_half, V_1) of a half-integral vector."""
    zero, half, one = [], [], []
    for u in sorted(x):
        if x[u] == 0:
            zero.append(u)
        elif x[u] == HALF:
            half.append(u)
        elif x[u] == 1:
            one.append(u)
        else:
            raise ValueError(f"x[{u}] = {x[u]} is not half-integral")
    return tuple(zero), tuple(half), tuple(one)


# ------------------------------------------------------------ Sherali-Adams


@dataclass(frozen=True)
class SASolution:
    level: int
    value: Fraction
    assignment: Mapping[VertexSet, Fraction]

    def projection(self) -> dict[int, Fraction]:
        return {S[0]: y for S, y in self.assignment.items() if len(S) == 1}


def sa_row_count(G: WeightedGraph, t: int) -> int:
    pairs = sum(comb(G.n, m) * 2**m for m in range(t + 1))
    return pairs * (len(G.edges) + 2 * G.n)


def _key(*parts) -> VertexSet:
    s = set()
    for p in parts:
        s.update(p)
    return tuple(sorted(s))


def sherali_adams_lp(G: WeightedGraph, t: int, budget: int = SA_BUDGET) -> LinearProgram:
    if t < 0:
        raise ValueError("level must be non-negative")
    rows = sa_row_count(G, t)
    if rows > budget:
        raise BudgetExceeded(f"level {t} on n={G.n} needs {rows} rows (budget {budget})")
    V = list(G.vertices)
    variables = [S for size in range(t + 2) for S in combinations(V, size)]
    lp = LinearProgram(variables, {(u,): G.weight(u) for u in V}, "max")
    for S in variables:
        lp.bounds[S] = (Fraction(1), Fraction(1)) if not S else (Fraction(0), Fraction(1))
    edges = sorted(G.edges)
    for size in range(t + 1):
        for U in combinations(V, size):
            for split in product((0, 1), repeat=size):
                S = tuple(u for u, side in zip(U, split) if side == 0)
                T = tuple(u for u, side in zip(U, split) if side == 1)
                subsets = [
                    (Tp, -1 if len(Tp) % 2 else 1)
                    for r in range(len(T) + 1)
                    for Tp in combinations(T, r)
                ]
                for u, v in edges:
                    row: dict[VertexSet, int] = {}
                    for Tp, sgn in subsets:
                        for key, c in ((_key(S, Tp, (u,)), sgn), (_key(S, Tp, (v,)), sgn), (_key(S, Tp), -sgn)):
                            row[key] = row.get(key, 0) + c
                    lp.add(row, "<=", 0)
                for u in V:
                    low: dict[VertexSet, int] = {}
                    high: dict[VertexSet, int] = {}
                    for Tp, sgn in subsets:
                        a, b = _key(S, Tp, (u,)), _key(S, Tp)
                        low[a] = low.get(a, 0) + sgn
                        high[a] = high.get(a, 0) + sgn
                        high[b] = high.get(b, 0) - sgn
                    lp.add(low, ">=", 0)
                    lp.add(high, "<=", 0)
    return lp


def sherali_adams_solve(G: WeightedGraph, t: int, budget: int = SA_BUDGET) -> tuple[SASolution, LPSolution]:
    sol = solve_with_row_generation(sherali_adams_lp(G, t, budget))
    if sol.status != OPTIMAL:
        raise AssertionError(f"Sherali-Adams LP reported {sol.status}")
    sa = SASolution(t, sol.value, dict(sol.assignment))
    proj = sa.projection()
    return sa, LPSolution(OPTIMAL, sol.value, {u: proj[u] for u in G.vertices})


def robust_solve(G: WeightedGraph, relaxation="standard") -> VertexSet | None:
    """Optimum if the relaxation's optimum is integral, else None (not stable).

    ``relaxation`` is ``"standard"``, ``"nt"`` or ``("sa", t)``.
    """
    if relaxation == "standard":
        x = solve_standard_lp(G, "simplex").assignment
    elif relaxation == "nt":
        x = nemhauser_trotter(G).assignment
    elif isinstance(relaxation, tuple) and relaxation[0] == "sa":
        x = sherali_adams_solve(G, relaxation[1])[1].assignment
    else:
        raise ValueError(f"unknown relaxation {relaxation!r}")
    if not is_integral(x):
        return None
    return tuple(u for u in sorted(x) if x[u] == 1)
