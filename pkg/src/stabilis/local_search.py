"""Local search for unit-weight independent sets by connected improvements.

An improvement for I is a connected vertex set X such that I xor X is
independent and larger than I.  At a fixed point with cap sigma, the final
set is certified with factor (max degree + 1)/3 + 1/(3k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .graph import Certificate, Perturbation, VertexSet, WeightedGraph, is_independent


@dataclass(frozen=True)
class BFConfig:
    sigma: int
    k: int
    max_degree: int

    def __post_init__(self) -> None:
        if self.sigma < 1:
            raise ValueError("sigma must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @classmethod
    def for_graph(cls, G: WeightedGraph, k: int = 1, sigma: int | None = None) -> "BFConfig":
        """Without ``sigma``, use 32 k D^(4k) ceil(log2 n) capped at n."""
        if sigma is None:
            sigma = min(G.n, full_sigma(G.n, G.max_degree, k))
        return cls(max(1, sigma), k, G.max_degree)

    @property
    def epsilon(self) -> Fraction:
        return Fraction(1, 3 * self.k)

    @property
    def gamma(self) -> Fraction:
        """(D + 1)/3 + epsilon, raised to 1 on graphs of degree <= 1."""
        return max(Fraction(1), Fraction(self.max_degree + 1, 3) + self.epsilon)


def full_sigma(n: int, max_degree: int, k: int) -> int:
    log = max(1, (n - 1).bit_length())  # ceil(log2 n)
    return 32 * k * max(1, max_degree) ** (4 * k) * log


def _require_unit(G: WeightedGraph) -> None:
    if any(w != 1 for w in G.weights):
        raise ValueError("local search needs unit weights")


def connected_subsets(G: WeightedGraph, limit: int, allowed=None) -> Iterator[tuple[frozenset[int], frozenset[int]]]:
    """Every connected vertex set of size <= limit, exactly once.

    Sets are grown from their smallest vertex, adding only larger neighbours
    through an extension frontier.  ``allowed(X, u)`` may veto adding u to X;
    vetoed branches are not explored.  Yields (X, frontier).
    """
    def grow(root, X, ext, nbhd):
        yield X
        if len(X) >= limit:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            if allowed is not None and not allowed(X, w):
                continue
            new = {z for z in G.neighbors(w) if z > root and z not in nbhd}
            yield from grow(root, X | {w}, ext + sorted(new, reverse=True), nbhd | new)

    for r in G.vertices:
        if allowed is not None and not allowed(frozenset(), r):
            continue
        start = {z for z in G.neighbors(r) if z > r}
        yield from grow(r, frozenset({r}), sorted(start, reverse=True), start | {r})


def find_improvement(G: WeightedGraph, I, sigma: int) -> VertexSet | None:
    """First connected X (|X| <= sigma) with I xor X independent and larger."""
    _require_unit(G)
    I = frozenset(I)
    if not is_independent(G, I):
        raise ValueError("I is not independent")

    def allowed(X, u):
        # X - I must stay independent; supersets of a dependent one are too
        return u in I or not any(v in X and v not in I for v in G.neighbors(u))

    for X in connected_subsets(G, sigma, allowed):
        gain = X - I
        if len(gain) <= len(X & I):
            continue
        kept = I - X
        if all(v not in kept for u in gain for v in G.neighbors(u)):
            return tuple(sorted(X))
    return None


def apply_improvement(I, X) -> VertexSet:
    return tuple(sorted(set(I) ^ set(X)))


def bf_solve(G: WeightedGraph, cfg: BFConfig, start=()) -> Certificate:
    """Apply first improvements until none exists; certify the fixed point."""
    _require_unit(G)
    if cfg.max_degree != G.max_degree:
        raise ValueError("config was built for a different maximum degree")
    I = tuple(sorted(start))
    if not is_independent(G, I):
        raise ValueError("start set is not independent")
    while True:
        X = find_improvement(G, I, cfg.sigma)
        if X is None:
            break
        nxt = apply_improvement(I, X)
        assert len(nxt) > len(I) and is_independent(G, nxt)
        I = nxt
    chosen = set(I)
    # single vertices are connected, so the fixed point is maximal
    assert all(u in chosen or G.neighbors(u) & chosen for u in G.vertices), "fixed point is not maximal"
    return Certificate(I, Perturbation.uniform(cfg.gamma, I))
