"""Vertex-weighted undirected graphs with exact rational weights.

Vertices are numbered ``1..n``.  Weights are :class:`fractions.Fraction`
values, strictly positive.  An optional layer label per vertex supports
Baker-style decompositions; when present every edge must join layers that
differ by at most one.

The module also holds the perturbation and certificate types together with
their line-oriented text formats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

VertexSet = tuple[int, ...]

_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


class GraphFormatError(ValueError):
    """Raised for malformed or invalid graph text; carries the line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"{message} at line {line}")


class PerturbationError(ValueError):
    """A multiplier lies outside ``[1, gamma]``."""


def parse_rational(text: str) -> Fraction:
    """Parse ``"7"`` or ``"7/4"``.  Decimal and float notation is rejected."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise ValueError(f"not a rational: {text!r}")
    value = Fraction(text)
    return value


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: frozenset[tuple[int, int]]
    weights: tuple[Fraction, ...]
    layers: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        if len(self.weights) != self.n:
            raise ValueError("one weight per vertex required")
        for w in self.weights:
            if w <= 0:
                raise ValueError("weights must be positive")
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise ValueError(f"bad edge ({u}, {v})")
        if self.layers is not None:
            if len(self.layers) != self.n or any(l < 0 for l in self.layers):
                raise ValueError("layers must be non-negative, one per vertex")
            for u, v in self.edges:
                if abs(self.layers[u - 1] - self.layers[v - 1]) > 1:
                    raise ValueError(f"edge ({u}, {v}) spans more than one layer")

    @classmethod
    def build(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        weights: Sequence | Mapping[int, object] | None = None,
        layers: Sequence[int] | Mapping[int, int] | None = None,
    ) -> "WeightedGraph":
        """Convenience constructor; edges may come in any orientation."""
        norm = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            e = _edge(u, v)
            if e in norm:
                raise ValueError(f"duplicate edge {e}")
            norm.add(e)
        if weights is None:
            w = tuple(Fraction(1) for _ in range(n))
        elif isinstance(weights, Mapping):
            w = tuple(Fraction(weights.get(u, 1)) for u in range(1, n + 1))
        else:
            w = tuple(Fraction(x) for x in weights)
        lay = None
        if layers is not None:
            if isinstance(layers, Mapping):
                lay = tuple(int(layers[u]) for u in range(1, n + 1))
            else:
                lay = tuple(int(x) for x in layers)
        return cls(n, frozenset(norm), w, lay)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def weight(self, u: int) -> Fraction:
        return self.weights[u - 1]

    def total_weight(self, vertices: Iterable[int] | None = None) -> Fraction:
        if vertices is None:
            return sum(self.weights, Fraction(0))
        return sum((self.weights[u - 1] for u in vertices), Fraction(0))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        # index 0 is a placeholder so that adjacency[u] works for 1-based ids
        adj: list[set[int]] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        """Neighbourhood bitmasks, bit ``u`` for vertex ``u``."""
        out = [0] * (self.n + 1)
        for u, v in self.edges:
            out[u] |= 1 << v
            out[v] |= 1 << u
        return tuple(out)

    def neighbors(self, u: int) -> frozenset[int]:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    @cached_property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency[1:]), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def neighborhood(self, vertices: Iterable[int]) -> set[int]:
        """N(S): vertices outside S adjacent to some vertex of S."""
        s = set(vertices)
        out: set[int] = set()
        for u in s:
            out |= self.adjacency[u]
        return out - s

    def with_weights(self, weights: Sequence[Fraction]) -> "WeightedGraph":
        return WeightedGraph(self.n, self.edges, tuple(Fraction(w) for w in weights), self.layers)

    def induced(self, keep: Iterable[int]) -> tuple["WeightedGraph", VertexSet]:
        """Induced subgraph relabelled to ``1..m``; also returns the old ids in order."""
        labels = tuple(sorted(set(keep)))
        for u in labels:
            self._check_vertex(u)
        index = {u: i + 1 for i, u in enumerate(labels)}
        edges = frozenset(
            _edge(index[u], index[v]) for u, v in self.edges if u in index and v in index
        )
        weights = tuple(self.weights[u - 1] for u in labels)
        layers = None if self.layers is None else tuple(self.layers[u - 1] for u in labels)
        return WeightedGraph(len(labels), edges, weights, layers), labels

    def components(self, within: Iterable[int] | None = None) -> list[VertexSet]:
        """Connected components (of the subgraph induced by ``within``), sorted."""
        pool = set(self.vertices if within is None else within)
        seen: set[int] = set()
        comps = []
        for start in sorted(pool):
            if start in seen:
                continue
            stack, comp = [start], []
            seen.add(start)
            while stack:
                u = stack.pop()
                comp.append(u)
                for v in self.adjacency[u]:
                    if v in pool and v not in seen:
                        seen.add(v)
                        stack.append(v)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_connected(self) -> bool:
        return self.n == 0 or len(self.components()) == 1

    def _check_vertex(self, u: int) -> None:
        if not (1 <= u <= self.n):
            raise ValueError(f"vertex {u} out of range 1..{self.n}")


def is_independent(G: WeightedGraph, S: Iterable[int]) -> bool:
    members = set(S)
    for u in members:
        G._check_vertex(u)
    return all(not (G.adjacency[u] & members) for u in members)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for u in vertices:
        m |= 1 << u
    return m


def vertices_of(mask: int) -> VertexSet:
    out = []
    u = 0
    while mask:
        if mask & 1:
            out.append(u)
        mask >>= 1
        u += 1
    return tuple(out)


@dataclass(frozen=True)
class Perturbation:
    gamma: Fraction
    multipliers: Mapping[int, Fraction] = field(default_factory=dict)

    def multiplier(self, u: int) -> Fraction:
        return Fraction(self.multipliers.get(u, 1))

    @classmethod
    def uniform(cls, gamma, vertices: Iterable[int], factor=None) -> "Perturbation":
        """Multiplier ``factor`` (default ``gamma``) on ``vertices``, 1 elsewhere."""
        gamma = Fraction(gamma)
        factor = gamma if factor is None else Fraction(factor)
        mult = {u: factor for u in vertices} if factor != 1 else {}
        return cls(gamma, mult)


@dataclass(frozen=True)
class Certificate:
    solution: VertexSet
    perturbation: Perturbation

    @property
    def gamma(self) -> Fraction:
        return self.perturbation.gamma


def apply_perturbation(G: WeightedGraph, p: Perturbation) -> WeightedGraph:
    if p.gamma < 1:
        raise PerturbationError(f"gamma {p.gamma} < 1")
    for u, m in p.multipliers.items():
        G._check_vertex(u)
        if not (1 <= m <= p.gamma):
            raise PerturbationError(f"multiplier {m} of vertex {u} outside [1, {p.gamma}]")
    return G.with_weights([G.weight(u) * p.multiplier(u) for u in G.vertices])


# ---------------------------------------------------------------- text formats

def _tokens(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#") or parts[0] == "c":
            continue
        yield number, parts


def parse_graph_text(text: str, kind: str = "mis") -> tuple[WeightedGraph, list[int]]:
    """Shared parser for ``p mis`` and ``p nmc`` files.

    Returns the graph and the terminal list (empty for ``mis``).
    """
    n = m = None
    weights: dict[int, Fraction] = {}
    edges: dict[tuple[int, int], int] = {}
    layers: dict[int, int] = {}
    terminals: list[int] = []

    def vertex(tok: str, ln: int) -> int:
        try:
            u = int(tok)
        except ValueError:
            raise GraphFormatError(f"bad vertex id {tok!r}", ln) from None
        if not (1 <= u <= n):
            raise GraphFormatError(f"vertex {u} out of range", ln)
        return u

    for ln, parts in _tokens(text):
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("second header", ln)
            if len(parts) != 4 or parts[1] != kind:
                raise GraphFormatError(f"expected header 'p {kind} <n> <m>'", ln)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError("header counts must be integers", ln) from None
            if n < 0 or m < 0:
                raise GraphFormatError("header counts must be non-negative", ln)
            continue
        if n is None:
            raise GraphFormatError("line before header", ln)
        if tag == "v" and len(parts) == 3:
            u = vertex(parts[1], ln)
            if u in weights:
                raise GraphFormatError(f"duplicate weight for vertex {u}", ln)
            try:
                w = parse_rational(parts[2])
            except ValueError:
                raise GraphFormatError(f"bad weight {parts[2]!r}", ln) from None
            if w <= 0:
                raise GraphFormatError("weight ≤ 0", ln)
            weights[u] = w
        elif tag == "e" and len(parts) == 3:
            u, v = vertex(parts[1], ln), vertex(parts[2], ln)
            if u == v:
                raise GraphFormatError(f"self-loop at {u}", ln)
            e = _edge(u, v)
            if e in edges:
                raise GraphFormatError(f"duplicate edge {u} {v}", ln)
            edges[e] = ln
        elif tag == "l" and len(parts) == 3:
            u = vertex(parts[1], ln)
            try:
                layer = int(parts[2])
            except ValueError:
                raise GraphFormatError(f"bad layer {parts[2]!r}", ln) from None
            if layer < 0 or u in layers:
                raise GraphFormatError(f"bad or repeated layer for vertex {u}", ln)
            layers[u] = layer
        elif tag == "t" and kind == "nmc" and len(parts) == 2:
            u = vertex(parts[1], ln)
            if u in terminals:
                raise GraphFormatError(f"duplicate terminal {u}", ln)
            terminals.append(u)
        else:
            raise GraphFormatError(f"malformed line {' '.join(parts)!r}", ln)

    if n is None:
        raise GraphFormatError("missing header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but {len(edges)} given")
    layer_tuple = None
    if layers:
        missing = [u for u in range(1, n + 1) if u not in layers]
        if missing:
            raise GraphFormatError(f"vertex {missing[0]} has no layer")
        for (u, v), ln in edges.items():
            if abs(layers[u] - layers[v]) > 1:
                raise GraphFormatError(f"edge {u} {v} violates the layer rule", ln)
        layer_tuple = tuple(layers[u] for u in range(1, n + 1))
    G = WeightedGraph(
        n,
        frozenset(edges),
        tuple(weights.get(u, Fraction(1)) for u in range(1, n + 1)),
        layer_tuple,
    )
    return G, terminals


def parse_graph(text: str) -> WeightedGraph:
    G, _ = parse_graph_text(text, "mis")
    return G


def render_graph(G: WeightedGraph, kind: str = "mis", terminals: Sequence[int] = ()) -> str:
    lines = [f"p {kind} {G.n} {len(G.edges)}"]
    lines += [f"v {u} {format_rational(G.weight(u))}" for u in G.vertices]
    lines += [f"e {u} {v}" for u, v in sorted(G.edges)]
    if G.layers is not None:
        lines += [f"l {u} {G.layers[u - 1]}" for u in G.vertices]
    lines += [f"t {s}" for s in terminals]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    gamma = None
    solution: VertexSet | None = None
    mult: dict[int, Fraction] = {}
    for ln, parts in _tokens(text):
        tag = parts[0]
        try:
            if tag == "gamma" and len(parts) == 2:
                gamma = parse_rational(parts[1])
            elif tag == "solution":
                solution = tuple(sorted(int(x) for x in parts[1:]))
            elif tag == "perturb" and len(parts) == 3:
                mult[int(parts[1])] = parse_rational(parts[2])
            else:
                raise GraphFormatError(f"malformed line {' '.join(parts)!r}", ln)
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(str(exc), ln) from None
    if gamma is None or solution is None:
        raise GraphFormatError("certificate needs 'gamma' and 'solution' lines")
    if len(set(solution)) != len(solution):
        raise GraphFormatError("repeated vertex in solution")
    return Certificate(solution, Perturbation(gamma, mult))


def render_certificate(c: Certificate) -> str:
    lines = [
        f"gamma {format_rational(c.gamma)}",
        "solution " + " ".join(map(str, c.solution)) if c.solution else "solution",
    ]
    for u in sorted(c.perturbation.multipliers):
        m = c.perturbation.multipliers[u]
        if m != 1:
            lines.append(f"perturb {u} {format_rational(m)}")
    return "\n".join(lines) + "\n"
