"""Command-line front end.

Reports go to stdout as ``key value`` lines or TSV; files are written only
through ``--out``.  Exit codes: 0 success, 2 negative verdict (not stable,
certificate rejected, rounding bound violated), 1 error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .framework import CertificationFailed, certified_solve, hochbaum_plug, planar_plug
from .gaps import degree_alpha, vc_estimate
from .generators import FIXTURE_NAMES, boost_to_stable, fixture_suite, planted_instance
from .graph import (
    Certificate, Perturbation, WeightedGraph, format_rational, parse_certificate,
    parse_graph, parse_rational, render_certificate, render_graph,
)
from .greedy import greedy_certified, greedy_independent_set, modified_greedy
from .local_search import BFConfig, bf_solve
from .lp.mis import is_integral, nemhauser_trotter, robust_solve, sherali_adams_solve, solve_standard_lp
from .multiway import (
    NMCInstance, exact_nmc, gap_instance, nmc_half_integral, nmc_lp_solve, nmc_round,
    parse_nmc, render_nmc, robust_nmc, vc_to_nmc,
)
from .oracle import stability_threshold, verify_certificate
from .rounding import RoundingScheme, check_rounding_properties
from .stable import NotStableEvidence, bounded_alg, robust_bounded_degree, unbounded_alg, welsh_powell
from .systems import IndependenceSystem, render_knapsack

NOT_STABLE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for verdicts here
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or num/den, got {text!r}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x) -> str:
    return "inf" if x is None else format_rational(x)


def _set(tag: str, S) -> str:
    return " ".join([tag, *map(str, S)])


def _not_stable(reason: str) -> int:
    print(f"not-stable {reason}")
    return NOT_STABLE


# ------------------------------------------------------------ solve


def _report_solution(G: WeightedGraph, S, cert: Certificate | None, out: str | None) -> int:
    print(_set("solution", S))
    print(f"weight {format_rational(G.total_weight(S))}")
    if cert is not None:
        print(f"gamma {format_rational(cert.gamma)}")
        if out:
            _emit(render_certificate(cert), out)
    elif out:
        print("note: this algorithm does not produce a certificate", file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    G = parse_graph(_read(args.graph))
    alg = args.alg
    if alg == "greedy":
        cert = greedy_certified(G)
    elif alg == "modified-greedy":
        cert = modified_greedy(G)
    elif alg == "bf":
        cert = bf_solve(G, BFConfig.for_graph(G, args.k or 1, args.sigma))
    elif alg == "certified":
        if args.plug == "planar":
            plug = planar_plug(G, args.k or 2, args.sa or 3)
        else:
            plug = hochbaum_plug(G)
        try:
            run = certified_solve(G, plug, args.epsilon, args.seed)
        except CertificationFailed as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        if args.trace:
            sys.stdout.write(run.tsv())
        cert = run.certificate
    elif alg in ("robust-lp", "robust-deg"):
        if alg == "robust-lp":
            S = robust_solve(G, ("sa", args.sa) if args.sa else "standard")
        else:
            S = robust_bounded_degree(G)
        if S is None:
            return _not_stable("relaxation optimum is fractional")
        # an integral relaxation optimum is an optimum, so gamma = 1 certifies it
        cert = Certificate(S, Perturbation(Fraction(1)))
    elif alg == "bounded":
        try:
            if args.approx == "greedy":
                # greedy is a max-degree approximation, so gamma grows past the degree
                print("warning: with greedy as the approximation gamma exceeds the max degree; "
                      "only far more stable inputs are guaranteed", file=sys.stderr)
                S = bounded_alg(G, greedy_independent_set, max(1, G.max_degree))
            else:
                S = bounded_alg(G)
        except NotStableEvidence as exc:
            return _not_stable(str(exc))
        return _report_solution(G, S, None, args.out)
    elif alg == "unbounded":
        return _report_solution(G, unbounded_alg(G, args.k or 1), None, args.out)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown algorithm {alg}")
    return _report_solution(G, cert.solution, cert, args.out)


def cmd_stability(args) -> int:
    G = parse_graph(_read(args.graph))
    rep = stability_threshold(G)
    print(_set("optimum", rep.optimum))
    print(f"weight {format_rational(rep.optimum_weight)}")
    if rep.threshold is None:
        print("threshold inf")
    else:
        print(f"threshold {format_rational(rep.threshold)} {_set('witness', rep.witness)}")
    if args.gamma is not None and not rep.is_stable(args.gamma):
        return _not_stable(f"threshold {_fmt(rep.threshold)} <= {format_rational(args.gamma)}")
    return 0


def cmd_verify(args) -> int:
    G = parse_graph(_read(args.graph))
    cert = parse_certificate(_read(args.cert))
    ok = verify_certificate(G, cert, args.method)
    print(f"{'verified' if ok else 'rejected'} gamma {format_rational(cert.gamma)}")
    return 0 if ok else NOT_STABLE


def _print_assignment(value, x) -> None:
    print(f"value {format_rational(value)}")
    print(f"integral {'yes' if is_integral(x) else 'no'}")
    for u in sorted(x):
        print(f"x {u} {format_rational(x[u])}")


def cmd_lp(args) -> int:
    G = parse_graph(_read(args.graph))
    if args.sa:
        _, sol = sherali_adams_solve(G, args.sa)
    elif args.method == "nt":
        sol = nemhauser_trotter(G)
    else:
        sol = solve_standard_lp(G, "simplex")
    _print_assignment(sol.value, sol.assignment)
    return 0


# ------------------------------------------------------------ nmc


def cmd_nmc(args) -> int:
    action = args.action
    if action == "gap":
        if args.k is None or args.epsilon is None:
            raise UsageError("nmc gap needs --k and --epsilon")
        _emit(render_nmc(gap_instance(args.k, args.epsilon)), args.out)
        return 0
    if action == "from-vc":
        if args.graph is None:
            raise UsageError("nmc from-vc needs --graph")
        _emit(render_nmc(vc_to_nmc(parse_graph(_read(args.graph)))), args.out)
        return 0
    inst = parse_nmc(_read(args.instance))
    G = inst.graph
    if action == "solve":
        opt = exact_nmc(inst)
        print(_set("cut", opt.cut))
        print(f"weight {format_rational(opt.weight)}")
        print(f"threshold {_fmt(opt.threshold)}")
    elif action == "lp":
        sol = nmc_lp_solve(inst)
        x = {u: sol.assignment[u] for u in inst.inner}
        _print_assignment(sol.value, x)
    elif action == "round":
        X = nmc_round(nmc_half_integral(inst), args.seed)
        print(_set("cut", X))
        print(f"weight {format_rational(G.total_weight(X))}")
    elif action == "robust":
        X = robust_nmc(inst)
        if X is None:
            return _not_stable("LP optimum is fractional")
        print(_set("cut", X))
        print(f"weight {format_rational(G.total_weight(X))}")
    return 0


# ------------------------------------------------------------ gen


def _render_fixture(obj) -> str:
    if isinstance(obj, WeightedGraph):
        return render_graph(obj)
    if isinstance(obj, NMCInstance):
        return render_nmc(obj)
    if isinstance(obj, IndependenceSystem) and obj.name == "knapsack":
        return render_knapsack(obj)
    raise UsageError(f"fixture of kind {getattr(obj, 'name', type(obj).__name__)} has no text format")


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "planted":
        if args.n is None or args.k is None:
            raise UsageError("gen planted needs --n and --k")
        G, S = planted_instance(args.n, args.k, args.seed)
        _emit(f"c {_set('planted', S)}\n" + render_graph(G), args.out)
    elif kind == "boost":
        if args.graph is None or args.gamma is None:
            raise UsageError("gen boost needs --graph and --gamma")
        _emit(render_graph(boost_to_stable(parse_graph(_read(args.graph)), args.gamma)), args.out)
    elif kind == "fixture":
        if args.list or args.name is None:
            print("\n".join(FIXTURE_NAMES))
            return 0
        _emit(_render_fixture(fixture_suite(args.name)), args.out)
    return 0


# ------------------------------------------------------------ reports


def cmd_estimate_vc(args) -> int:
    G = parse_graph(_read(args.graph))
    alpha = args.alpha if args.alpha is not None else degree_alpha(G)
    rep = vc_estimate(G, alpha, args.beta)
    print("A\tFRAC\tE\tlow\thigh\ttwo_approx\testimate\tfactor")
    print(rep.tsv())
    return 0


def cmd_check_rounding(args) -> int:
    text = _read(args.graph)
    if args.scheme == "nmc":
        inst = parse_nmc(text)
        scheme = RoundingScheme("nmc", inst.k)
        report = check_rounding_properties(scheme, inst, nmc_half_integral(inst), args.trials, args.seed, args.jobs)
    else:
        G = parse_graph(text)
        if args.scheme == "hochbaum":
            coloring, _ = welsh_powell(G)
            k = args.k or max(2, max(coloring.values(), default=1))
            x = nemhauser_trotter(G).assignment
            scheme = RoundingScheme("hochbaum", k, coloring)
        else:
            _, sol = sherali_adams_solve(G, args.sa or 3)
            x = sol.assignment
            scheme = RoundingScheme("planar", args.k or 2)
        report = check_rounding_properties(scheme, G, x, args.trials, args.seed, args.jobs)
    sys.stdout.write(report.tsv())
    return 0 if report.ok else NOT_STABLE


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stabilis", description="Exact tools for stable independent set and multiway cut instances.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run an independent set algorithm")
    s.add_argument("--alg", required=True, choices=[
        "greedy", "modified-greedy", "bounded", "unbounded", "bf", "robust-lp", "robust-deg", "certified"])
    s.add_argument("--graph", default="-")
    s.add_argument("--k", type=int, help="unbounded: stability parameter; bf: local search k; planar plug: Baker k")
    s.add_argument("--epsilon", type=_rational, default=Fraction(1, 2))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--sigma", type=int, help="bf improvement size cap (default: full formula capped at n)")
    s.add_argument("--sa", type=int, help="Sherali-Adams level (robust-lp, planar plug)")
    s.add_argument("--plug", choices=["hochbaum", "planar"], default="hochbaum")
    s.add_argument("--approx", choices=["exact", "greedy"], default="exact")
    s.add_argument("--trace", action="store_true", help="print the certified run's iteration trace")
    s.add_argument("--out", help="write the certificate here")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("stability", help="exact stability threshold of the optimum")
    s.add_argument("--graph", default="-")
    s.add_argument("--gamma", type=_rational, help="exit 2 unless the instance is gamma-stable")
    s.set_defaults(func=cmd_stability)

    s = sub.add_parser("verify", help="check a certificate with the exact oracle")
    s.add_argument("--graph", required=True)
    s.add_argument("--cert", default="-")
    s.add_argument("--method", choices=["both", "enumerate", "fast"], default="both")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("lp", help="solve the standard or Sherali-Adams relaxation")
    s.add_argument("--graph", default="-")
    s.add_argument("--method", choices=["nt", "simplex"], default="nt")
    s.add_argument("--sa", type=int, help="Sherali-Adams level instead of the standard LP")
    s.set_defaults(func=cmd_lp)

    s = sub.add_parser("nmc", help="node multiway cut tools")
    s.add_argument("action", choices=["solve", "lp", "round", "robust", "gap", "from-vc"])
    s.add_argument("--instance", default="-")
    s.add_argument("--graph")
    s.add_argument("--k", type=int)
    s.add_argument("--epsilon", type=_rational)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_nmc)

    s = sub.add_parser("gen", help="generate instances")
    s.add_argument("kind", choices=["planted", "boost", "fixture"])
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int, help="planted set size")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--graph")
    s.add_argument("--gamma", type=_rational)
    s.add_argument("--name")
    s.add_argument("--list", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("estimate-vc", help="vertex cover estimate from the half-integral LP")
    s.add_argument("--graph", default="-")
    s.add_argument("--alpha", type=_rational, help="LP integrality-gap bound (default (max degree + 1)/2)")
    s.add_argument("--beta", type=_rational, required=True)
    s.set_defaults(func=cmd_estimate_vc)

    s = sub.add_parser("check-rounding", help="empirical rounding bounds")
    s.add_argument("--scheme", choices=["hochbaum", "planar", "nmc"], required=True)
    s.add_argument("--graph", default="-", help="graph file (nmc: instance file)")
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--k", type=int)
    s.add_argument("--sa", type=int, help="planar: Sherali-Adams level (default 3)")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_check_rounding)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
