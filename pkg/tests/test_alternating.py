from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from strongmatch import oracle
from strongmatch.alternating import (PathClass, classify_path, even_reachable,
                                     find_finitely_improving_path, has_maximal_support,
                                     is_strongly_maximal, is_strongly_w_maximal, maximum_matching)
from strongmatch.graph_core import Graph, Matching

from conftest import complete_graph, graph_and_matching, graphs, small_weights


def p3():
    return Graph("abcd", [("a", "b", 1), ("b", "c", 1), ("c", "d", 1)])


def test_perfect_matching_on_k4():
    g = complete_graph(4)
    assert find_finitely_improving_path(g, Matching(g, [0, 5])) is None


def test_middle_edge_of_path():
    g = p3()
    path = find_finitely_improving_path(g, Matching(g, [1]))
    assert path.vertices == tuple("abcd")
    assert path.edges == (0, 1, 2)
    assert classify_path(g, Matching(g, [1]), path.vertices) is PathClass.FINITELY_IMPROVING


def test_blossom_is_handled():
    # triangle a b c with a stem c-d-e; augmenting path must pass the odd cycle
    g = Graph("abcdef", [("a", "b", 1), ("b", "c", 1), ("c", "a", 1), ("c", "d", 1),
                         ("d", "e", 1), ("a", "f", 1)])
    m = Matching(g, [0, 3])
    path = find_finitely_improving_path(g, m)
    assert path is not None
    improved = m.switch(path.edges)
    assert len(improved) == 3


@given(graph_and_matching(max_n=7))
def test_improving_path_iff_not_maximum(gm):
    g, m = gm
    path = find_finitely_improving_path(g, m)
    assert (path is None) == (not oracle.has_improving_alternative(g, m))
    if path is not None:
        assert len(m.switch(path.edges)) == len(m) + 1
        assert classify_path(g, m, path.vertices) is PathClass.FINITELY_IMPROVING
    assert has_maximal_support(g, m) == is_strongly_maximal(g, m)


@given(graph_and_matching(max_n=8))
def test_maximum_matching_keeps_support(gm):
    g, m = gm
    best = maximum_matching(g, m)
    assert len(best) == oracle.maximum_cardinality(g)
    assert best.support() >= m.support()


@given(graphs(max_n=7))
def test_even_reachable_is_missed_by_some_maximum(g):
    m = maximum_matching(g)
    size = len(m)
    missed = {v for n in oracle.enumerate_matchings(g) if len(n) == size for v in n.exposed()}
    assert even_reachable(g, m) == missed


class TestClassify:
    def test_single_free_edge(self):
        g = Graph("ab", [("a", "b", 1)])
        assert classify_path(g, Matching(g), "ab") is PathClass.FINITELY_IMPROVING

    def test_indifferent(self):
        g = p3()
        m = Matching(g, [1])
        assert classify_path(g, m, ["a", "b", "c"]) is PathClass.INDIFFERENT

    def test_both_ends_covered(self):
        g = Graph("abcd", [("a", "b", 1), ("b", "c", 1), ("c", "d", 1)])
        m = Matching(g, [0, 2])
        assert classify_path(g, m, ["a", "b", "c", "d"]) is PathClass.NEUTRAL

    def test_not_alternating(self):
        g = p3()
        assert classify_path(g, Matching(g), "abc") is PathClass.NOT_ALTERNATING
        assert classify_path(g, Matching(g), "ac") is PathClass.NOT_ALTERNATING
        assert classify_path(g, Matching(g), "a") is PathClass.NOT_ALTERNATING

    def test_random_walks_on_k5(self, rng):
        g = complete_graph(5)
        for _ in range(200):
            m = Matching(g, rng.choice([[], [0], [0, 7], [3, 5]]))
            walk = rng.sample(g.vertices, rng.randint(2, 5))
            flags = [any(e in m.edges for e in g.edges_between(a, b)) for a, b in zip(walk, walk[1:])]
            alternating = all(x != y for x, y in zip(flags, flags[1:]))
            got = classify_path(g, m, walk)
            if not alternating:
                assert got is PathClass.NOT_ALTERNATING
            else:
                ends = [m.covers(walk[0]), m.covers(walk[-1])]
                want = {0: PathClass.FINITELY_IMPROVING, 1: PathClass.INDIFFERENT,
                        2: PathClass.NEUTRAL}[sum(ends)]
                assert got is want


class TestWeighted:
    def test_single_positive_edge(self):
        g = Graph("ab", [("a", "b", 1)])
        imp = is_strongly_w_maximal(g, Matching(g))
        assert imp is not None and imp.gain == 1

    def test_single_negative_edge(self):
        g = Graph("ab", [("a", "b", -1)])
        assert is_strongly_w_maximal(g, Matching(g)) is None

    def test_witness_json(self):
        g = Graph("abcd", [("a", "b", Fraction(1, 2)), ("b", "c", 1), ("c", "d", Fraction(1, 2))])
        imp = is_strongly_w_maximal(g, Matching(g, [0]))
        data = imp.to_json()
        assert data["certified"] is False
        assert data["gain"] == "1/2"

    @given(graph_and_matching(max_n=6, weights=small_weights))
    def test_verdict_matches_brute_force(self, gm):
        g, m = gm
        imp = is_strongly_w_maximal(g, m)
        assert (imp is None) == (oracle.weight_improvement(g, m) is None)
        if imp is not None:
            gain = imp.matching.weight() - m.weight()
            assert gain == imp.gain > 0

    @given(graphs(max_n=6, weights=st.fractions(-2, 3, max_denominator=3)))
    def test_maximum_weight_is_certified(self, g):
        best = oracle.max_weight_matching(g)
        assert is_strongly_w_maximal(g, best) is None
