"""Integrality gap of the standard LP on stable instances, and a vertex-cover
value estimate built from the half-integral LP optimum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import VertexSet, WeightedGraph, format_rational
from .lp.mis import half_partition, nemhauser_trotter
from .oracle import max_independent_set_exact, stability_threshold


def degree_alpha(G: WeightedGraph) -> Fraction:
    """max(1, (max degree + 1) / 2): an integrality-gap bound for the standard LP."""
    return max(Fraction(1), Fraction(G.max_degree + 1, 2))


def _check_alpha(alpha: Fraction) -> None:
    if alpha < 1:
        raise ValueError("alpha bounds an integrality gap and must be >= 1")


def _fmt(x) -> str:
    return "inf" if x is None else format_rational(x)


def ig_bound(alpha, beta) -> Fraction:
    """min{alpha, 1 + 1/(beta - 1)}; just alpha when beta <= 1."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if beta <= 1:
        return alpha
    return min(alpha, 1 + 1 / (beta - 1))


@dataclass(frozen=True)
class GapReport:
    threshold: Fraction | None
    lp_value: Fraction
    opt: Fraction
    bound: Fraction
    premise: bool  # instance is (alpha * beta)-stable

    @property
    def ratio(self) -> Fraction:
        return self.lp_value / self.opt if self.opt else Fraction(1)

    @property
    def ok(self) -> bool:
        return not self.premise or self.ratio <= self.bound

    def tsv(self, name: str = "-") -> str:
        cells = [name, _fmt(self.threshold), _fmt(self.lp_value), _fmt(self.opt),
                 _fmt(self.ratio), _fmt(self.bound), "pass" if self.ok else "FAIL"]
        return "\t".join(cells)


def ig_check(G: WeightedGraph, alpha, beta) -> GapReport:
    """LP/OPT against min{alpha, 1 + 1/(beta-1)} when threshold > alpha*beta;
    vacuous pass otherwise."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    _check_alpha(alpha)
    rep = stability_threshold(G)
    lp = nemhauser_trotter(G).value
    return GapReport(rep.threshold, lp, rep.optimum_weight, ig_bound(alpha, beta), rep.is_stable(alpha * beta))


@dataclass(frozen=True)
class EstimateReport:
    A: Fraction
    FRAC: Fraction
    E: Fraction
    bracket: tuple[Fraction, Fraction] | None  # only when beta > 2
    two_approx: Fraction  # weight of {u : x_u < 1}, a feasible cover
    estimate: Fraction
    factor: Fraction
    partition: tuple[VertexSet, VertexSet, VertexSet]

    def tsv(self) -> str:
        low, high = self.bracket if self.bracket else (None, None)
        cells = [_fmt(self.A), _fmt(self.FRAC), _fmt(self.E), _fmt(low), _fmt(high),
                 _fmt(self.two_approx), _fmt(self.estimate), _fmt(self.factor)]
        return "\t".join(cells)


def vc_estimate(G: WeightedGraph, alpha, beta) -> EstimateReport:
    """Estimate the minimum vertex cover weight.

    From the half-integral LP optimum (V_0, V_half, V_1): FRAC is the LP value
    of G[V_half] and E = w(V_0) + w(V_half) - FRAC.  For beta > 2 the optimum
    lies in [E, E / (2 - A)] on (alpha*beta)-stable inputs, A = min{alpha,
    beta/(beta-1)}.  The estimate is the smaller of E / (2 - A) and the weight
    of the LP-rounded cover V_0 + V_half.
    """
    alpha, beta = Fraction(alpha), Fraction(beta)
    _check_alpha(alpha)
    x = nemhauser_trotter(G).assignment
    zero, half, one = half_partition(x)
    if half:
        H, _ = G.induced(half)
        frac = nemhauser_trotter(H).value
    else:
        frac = Fraction(0)
    E = G.total_weight(zero) + G.total_weight(half) - frac
    two_approx = G.total_weight(zero) + G.total_weight(half)
    A = min(alpha, beta / (beta - 1)) if beta > 1 else alpha
    if beta > 2:
        if not A < 2:
            raise ValueError("need A < 2 for the bracket")
        high = E / (2 - A)
        bracket = (E, high)
        estimate = min(high, two_approx)
        factor = min(Fraction(2), 1 + 1 / (beta - 2))
    else:
        bracket = None
        estimate = two_approx
        factor = Fraction(2)
    return EstimateReport(A, frac, E, bracket, two_approx, estimate, factor, (zero, half, one))


@dataclass(frozen=True)
class EstimateCheck:
    report: EstimateReport
    vc_opt: Fraction
    threshold: Fraction | None
    premise: bool

    @property
    def in_bracket(self) -> bool:
        if self.report.bracket is None:
            return True
        low, high = self.report.bracket
        return low <= self.vc_opt <= high

    @property
    def within_factor(self) -> bool:
        est = self.report.estimate
        return self.vc_opt <= est <= self.report.factor * self.vc_opt

    @property
    def ok(self) -> bool:
        return not self.premise or (self.in_bracket and self.within_factor)


def check_estimate(G: WeightedGraph, alpha, beta) -> EstimateCheck:
    """vc_estimate against the exact optimum, on the (alpha*beta)-stability premise."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    report = vc_estimate(G, alpha, beta)
    rep = stability_threshold(G)
    vc_opt = G.total_weight() - max_independent_set_exact(G)[1]
    return EstimateCheck(report, vc_opt, rep.threshold, rep.is_stable(alpha * beta))
