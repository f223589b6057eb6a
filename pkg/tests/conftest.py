import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from strongmatch.graph_core import Graph, Matching

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = "abcdefghij"


def complete_graph(n: int, weight=lambda u, v: 1) -> Graph:
    vs = list(NAMES[:n]) if n <= len(NAMES) else [f"v{i}" for i in range(n)]
    return Graph(vs, [(u, v, Fraction(weight(u, v))) for u, v in itertools.combinations(vs, 2)])


def random_complete(rng: random.Random, n: int, low: int = 1, high: int = 10) -> Graph:
    return complete_graph(n, lambda u, v: rng.randint(low, high))


def random_graph(rng: random.Random, n: int, p: float = 0.5, weights=(1, 1)) -> Graph:
    vs = [f"v{i}" for i in range(n)]
    edges = [(u, v, Fraction(rng.randint(*weights)))
             for u, v in itertools.combinations(vs, 2) if rng.random() < p]
    return Graph(vs, edges)


def random_matching(rng: random.Random, g: Graph) -> Matching:
    ids = list(g.edges)
    rng.shuffle(ids)
    used, chosen = set(), []
    for eid in ids:
        e = g.edges[eid]
        if e.u not in used and e.v not in used and rng.random() < 0.6:
            chosen.append(eid)
            used.update(e.ends)
    return Matching(g, chosen)


@st.composite
def graphs(draw, max_n=7, weights=st.just(Fraction(1)), min_n=0):
    n = draw(st.integers(min_n, max_n))
    vs = [f"v{i}" for i in range(n)]
    pairs = list(itertools.combinations(vs, 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [(u, v, draw(weights)) for (u, v), keep in zip(pairs, mask) if keep]
    return Graph(vs, edges)


@st.composite
def graph_and_matching(draw, max_n=7, weights=st.just(Fraction(1))):
    g = draw(graphs(max_n=max_n, weights=weights))
    order = draw(st.permutations(sorted(g.edges)))
    used, chosen = set(), []
    for eid in order:
        e = g.edges[eid]
        if e.u not in used and e.v not in used and draw(st.booleans()):
            chosen.append(eid)
            used.update(e.ends)
    return g, Matching(g, chosen)


small_weights = st.integers(-2, 3).map(Fraction)
rational_weights = st.fractions(min_value=Fraction(1, 4), max_value=5, max_denominator=4)


@pytest.fixture
def rng():
    return random.Random(20241019)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
