"""Iterative certified algorithm built on a relaxation plus an (alpha, beta)-rounding.

Each iteration boosts the current solution S by alpha*beta, solves the
relaxation on the boosted graph and either certifies S (the relaxation value
equals the boosted weight of S) or rounds repeatedly looking for a heavier
independent set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Callable

from .graph import Certificate, Perturbation, VertexSet, WeightedGraph, is_independent
from .greedy import greedy_independent_set
from .lp.mis import nemhauser_trotter, sherali_adams_solve
from .rounding import as_rng, hochbaum_round, planar_round, trial_rng
from .stable import welsh_powell

LN2_UPPER = Fraction(693148, 10**6)  # > ln 2
MAX_WEIGHT = 10**9


@dataclass(frozen=True)
class FrameworkConfig:
    alpha: Fraction
    beta: Fraction
    epsilon: Fraction
    n: int
    W: int

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.epsilon < self.epsilon_floor:
            raise ValueError(f"epsilon below 1/n^3 = {self.epsilon_floor}")
        if self.W > MAX_WEIGHT:
            raise ValueError(f"max weight {self.W} exceeds {MAX_WEIGHT}")

    @classmethod
    def build(cls, alpha, beta, epsilon, G: WeightedGraph) -> "FrameworkConfig":
        W = max(integer_weights(G), default=1)
        return cls(Fraction(alpha), Fraction(beta), Fraction(epsilon), G.n, W)

    @property
    def epsilon_floor(self) -> Fraction:
        return Fraction(1, max(self.n, 2) ** 3)

    @property
    def boost(self) -> Fraction:
        return self.alpha * self.beta

    @property
    def gamma(self) -> Fraction:
        return self.boost + self.epsilon

    @property
    def delta(self) -> Fraction:
        return self.epsilon / (self.alpha * (self.boost + self.epsilon))

    @property
    def M(self) -> int:
        """Roundings per step: ceil(2 ln 2 / delta), with ln 2 rounded up."""
        return ceil(2 * LN2_UPPER / self.delta)

    @property
    def T(self) -> int:
        return self.n * self.W

    @property
    def t(self) -> int:
        """Smallest t with 2^t >= n*T."""
        return max(1, (self.n * self.T - 1).bit_length())


def integer_weights(G: WeightedGraph) -> list[int]:
    out = []
    for u in G.vertices:
        w = G.weight(u)
        if w.denominator != 1:
            raise ValueError(f"vertex {u} has non-integer weight {w}")
        out.append(w.numerator)
    return out


# ------------------------------------------------------------ plugs


@dataclass(frozen=True)
class Plug:
    """A relaxation and a rounding for it.

    ``relax(G)`` returns (value, payload); ``round(G, payload, rng)`` returns
    an independent set of G.
    """

    name: str
    alpha: Fraction
    beta: Fraction
    relax: Callable
    round: Callable


def hochbaum_plug(G: WeightedGraph) -> Plug:
    """Standard LP (half-integral via the flow construction) with colour-class
    rounding; k is the number of Welsh-Powell colours on G, at least 2."""
    coloring, _ = welsh_powell(G)
    k = max(2, max(coloring.values(), default=1))

    def relax(H):
        sol = nemhauser_trotter(H)
        return sol.value, sol.assignment

    def round_(H, x, rng):
        return hochbaum_round(H, x, coloring, rng, k)

    return Plug(f"hochbaum(k={k})", Fraction(k, 2), Fraction(2 * (k - 1), k), relax, round_)


def planar_plug(G: WeightedGraph, k: int = 2, level: int = 3) -> Plug:
    """Sherali-Adams level ``level`` with Baker-slab rounding (needs layers)."""
    if G.layers is None:
        raise ValueError("planar plug needs a layered graph")
    if k < 2:
        raise ValueError("planar rounding needs k >= 2")
    cache: dict = {}

    def relax(H):
        _, proj = sherali_adams_solve(H, level)
        return proj.value, proj.assignment

    def round_(H, y, rng):
        return planar_round(H, k, y, rng, cache)

    return Plug(f"planar(k={k},t={level})", Fraction(k, k - 1), Fraction(k + 1, k), relax, round_)


# ------------------------------------------------------------ steps


@dataclass(frozen=True)
class Improved:
    solution: VertexSet


@dataclass(frozen=True)
class CertifiedHere:
    certificate: Certificate


@dataclass(frozen=True)
class Missed:
    """No rounding beat S although the relaxation says S is not optimal."""


def boosted(G: WeightedGraph, S, factor: Fraction) -> WeightedGraph:
    chosen = set(S)
    return G.with_weights([w * factor if u in chosen else w for u, w in enumerate(G.weights, start=1)])


def best_rounding(G: WeightedGraph, Gp: WeightedGraph, payload, plug: Plug, rounds: int, rng: random.Random) -> VertexSet:
    """Heaviest (by original weight) of ``rounds`` independent roundings."""
    best: VertexSet | None = None
    best_w = None
    for _ in range(rounds):
        cand = plug.round(Gp, payload, rng)
        assert is_independent(G, cand), f"{plug.name} rounding produced a dependent set"
        w = G.total_weight(cand)
        if best is None or w > best_w:
            best, best_w = cand, w
    return best


def certified_step(G: WeightedGraph, S, plug: Plug, cfg: FrameworkConfig, seed, repeats: int = 1):
    """One step: CertifiedHere, Improved or Missed."""
    S = tuple(sorted(S))
    rng = as_rng(seed)
    Gp = boosted(G, S, cfg.boost)
    value, payload = plug.relax(Gp)
    if value == Gp.total_weight(S):
        return CertifiedHere(Certificate(S, Perturbation.uniform(cfg.gamma, S, cfg.boost)))
    best = best_rounding(G, Gp, payload, plug, repeats * cfg.M, rng)
    if G.total_weight(best) > G.total_weight(S):
        return Improved(best)
    return Missed()


class CertificationFailed(RuntimeError):
    def __init__(self, trace):
        super().__init__(f"no certificate after {len(trace) - 1} iterations")
        self.trace = trace


@dataclass
class Run:
    certificate: Certificate
    trace: list = field(default_factory=list)  # (iteration, weight, action)

    def tsv(self) -> str:
        return "".join(f"{i}\t{w}\t{a}\n" for i, w, a in self.trace)


def certified_solve(G: WeightedGraph, plug: Plug, epsilon, seed, start=None) -> Run:
    """Iterate certified steps from the greedy solution until S is certified.

    Each iteration pools t repetitions of M roundings; at most T = n*W
    iterations are made before CertificationFailed is raised.
    """
    cfg = FrameworkConfig.build(plug.alpha, plug.beta, epsilon, G)
    S = tuple(sorted(start)) if start is not None else greedy_independent_set(G)
    if not is_independent(G, S):
        raise ValueError("start set is not independent")
    weight = G.total_weight(S)
    trace = [(0, weight, "start")]
    for it in range(1, cfg.T + 1):
        outcome = certified_step(G, S, plug, cfg, trial_rng(seed, it), cfg.t)
        if isinstance(outcome, CertifiedHere):
            trace.append((it, weight, "certified"))
            return Run(outcome.certificate, trace)
        if isinstance(outcome, Improved):
            new_weight = G.total_weight(outcome.solution)
            assert new_weight > weight, "improvement did not increase the weight"
            S, weight = outcome.solution, new_weight
            trace.append((it, weight, "improved"))
        else:
            trace.append((it, weight, "missed"))
    raise CertificationFailed(trace)
