from fractions import Fraction
from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stabilis.graph import WeightedGraph

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

rationals = st.builds(Fraction, st.integers(1, 20), st.integers(1, 6))


@st.composite
def graphs(draw, min_n=1, max_n=9, weights=rationals, max_degree=None):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(1, n + 1), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    if max_degree is not None:
        deg = [0] * (n + 1)
        kept = []
        for u, v in chosen:
            if deg[u] < max_degree and deg[v] < max_degree:
                kept.append((u, v))
                deg[u] += 1
                deg[v] += 1
        chosen = kept
    w = [draw(weights) for _ in range(n)]
    return WeightedGraph.build(n, chosen, w)


def unit_graphs(**kw):
    return graphs(weights=st.just(Fraction(1)), **kw)


def int_graphs(max_weight=9, **kw):
    return graphs(weights=st.builds(Fraction, st.integers(1, max_weight)), **kw)


# acceptance criteria record one line each; the lines are repeated in the summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for num in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[num])
