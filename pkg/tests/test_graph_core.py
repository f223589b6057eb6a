import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strongmatch.graph_core import (Graph, GraphFormatError, HalfInt, Matching, MatchingError,
                                    format_edge_list, format_rational, matching_from_pairs,
                                    matching_to_json, matching_weight, normalize_weights,
                                    parse_edge_list, parse_rational, read_matching,
                                    symmetric_difference_decompose)

from conftest import complete_graph, graph_and_matching, graphs, random_matching, rational_weights


def path_abcd():
    return Graph("abcd", [("a", "b", 1), ("b", "c", 1), ("c", "d", 1)])


class TestHalfInt:
    def test_arithmetic(self):
        x = HalfInt.from_value(Fraction(3, 2))
        assert x.doubled == 3
        assert x + HalfInt(1) == 2
        assert (x - HalfInt(4)).to_fraction() == Fraction(-1, 2)
        assert -x == Fraction(-3, 2)
        assert not x.is_integral()
        assert str(x) == "3/2"

    def test_rejects_thirds(self):
        with pytest.raises(ValueError):
            HalfInt.from_value(Fraction(1, 3))

    @given(st.integers(-50, 50), st.integers(-50, 50))
    def test_order_matches_fractions(self, a, b):
        assert (HalfInt(a) < HalfInt(b)) == (Fraction(a, 2) < Fraction(b, 2))


class TestGraph:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            Graph(["a"], [("a", "a", 1)])

    def test_parallel_edges_kept(self):
        g = Graph("ab", [("a", "b", 1), ("a", "b", 2)])
        assert g.edges_between("a", "b") == [0, 1]
        assert g.neighbors("a") == ["b"]

    def test_components_in_vertex_order(self):
        g = Graph("abcde", [("d", "e", 1), ("a", "c", 1)])
        assert g.components() == [["a", "c"], ["b"], ["d", "e"]]

    def test_complete(self):
        assert complete_graph(5).is_complete()
        assert not path_abcd().is_complete()


class TestMatching:
    def test_rejects_shared_vertex(self):
        with pytest.raises(MatchingError):
            Matching(path_abcd(), [0, 1])

    def test_weights_exact(self):
        g = Graph("abcd", [("a", "b", Fraction(1, 2)), ("c", "d", Fraction(1, 3)), ("a", "c", Fraction(5, 3))])
        assert matching_weight(Matching(g, [])) == 0
        assert matching_weight(Matching(g, [2])) == Fraction(5, 3)
        assert matching_weight(Matching(g, [0, 1])) == Fraction(5, 6)

    def test_switch(self):
        m = Matching(path_abcd(), [1])
        assert m.switch([0, 1, 2]).edges == {0, 2}


class TestSymmetricDifference:
    def test_equal_matchings(self):
        g = path_abcd()
        assert symmetric_difference_decompose(Matching(g, [1]), Matching(g, [1])) == []

    def test_single_path(self):
        g = path_abcd()
        (comp,) = symmetric_difference_decompose(Matching(g, [1]), Matching(g, [0, 2]))
        assert comp.kind == "path"
        assert comp.vertices == tuple("abcd")
        assert comp.in_first == (False, True, False)

    def test_cycle(self):
        g = Graph("abcd", [("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1)])
        (comp,) = symmetric_difference_decompose(Matching(g, [0, 2]), Matching(g, [1, 3]))
        assert comp.kind == "cycle" and len(comp) == 4

    def test_random_on_k6(self, rng):
        g = complete_graph(6)
        for _ in range(100):
            m, n = random_matching(rng, g), random_matching(rng, g)
            comps = symmetric_difference_decompose(m, n)
            edges = [e for c in comps for e in c.edges]
            assert sorted(edges) == sorted(m.edges ^ n.edges)
            deg = {}
            for e in edges:
                for x in g.edges[e].ends:
                    deg[x] = deg.get(x, 0) + 1
            assert max(deg.values(), default=0) <= 2
            for c in comps:
                # consecutive edges alternate between the two matchings
                assert all(a != b for a, b in zip(c.in_first, c.in_first[1:]))

    @given(graph_and_matching(), st.data())
    def test_components_alternate(self, gm, data):
        g, m = gm
        order = data.draw(st.permutations(sorted(g.edges)))
        used, other = set(), []
        for eid in order:
            if not used & set(g.edges[eid].ends):
                other.append(eid)
                used.update(g.edges[eid].ends)
        n = Matching(g, other)
        for c in symmetric_difference_decompose(m, n):
            if c.kind == "cycle":
                assert len(c) % 2 == 0


class TestNormalize:
    def test_halves(self):
        g = Graph("abc", [("a", "b", Fraction(1, 2)), ("b", "c", Fraction(3, 2))])
        h, scale, shift = normalize_weights(g)
        assert (scale, shift) == (2, 0)
        assert [e.weight for e in h.edges.values()] == [1, 3]

    def test_nonpositive_shift(self):
        g = Graph("abc", [("a", "b", 0), ("b", "c", -1)])
        h, scale, shift = normalize_weights(g)
        assert (scale, shift) == (1, 2)
        assert [e.weight for e in h.edges.values()] == [2, 1]

    def test_truncated_irrational_round_trip(self):
        a = Fraction(1010010001, 10 ** 9)
        g = Graph("abcd", [("a", "b", 2 * a - 1), ("b", "c", a), ("c", "d", 2 * a)])
        h, scale, shift = normalize_weights(g)
        for e in g.edges.values():
            w = h.edges[e.id].weight
            assert w.denominator == 1 and w >= 1
            assert (w - shift) / scale == e.weight

    @given(graphs(max_n=6, weights=rational_weights, min_n=2))
    def test_integral_and_order_preserving(self, g):
        h, scale, shift = normalize_weights(g)
        assert all(e.weight.denominator == 1 and e.weight >= 1 for e in h.edges.values())
        ids = sorted(g.edges)
        for a in ids:
            for b in ids:
                assert (g.weight(a) < g.weight(b)) == (h.weight(a) < h.weight(b))


class TestFormats:
    def test_parse_with_comments_and_isolated(self):
        g = parse_edge_list("# header\na b 3/2\nc\nb d 2  # trailing\n")
        assert g.vertices == ("a", "b", "c", "d")
        assert g.weight(0) == Fraction(3, 2)

    @pytest.mark.parametrize("text,line", [
        ("a b 1\nb c 0.5\n", 2),
        ("a b 1\nc c 1\n", 2),
        ("a b 1 2\n", 1),
        ("a b 1/0\n", 1),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(GraphFormatError) as info:
            parse_edge_list(text)
        assert info.value.line == line
        assert f"line {line}" in str(info.value)

    def test_decimal_rejected(self):
        with pytest.raises(ValueError):
            parse_rational("1.5")
        assert format_rational(Fraction(6, 4)) == "3/2"

    @given(graphs(max_n=6, weights=rational_weights))
    def test_round_trip(self, g):
        h = parse_edge_list(format_edge_list(g))
        assert set(h.vertices) == {str(v) for v in g.vertices}
        assert sorted((str(e.u), str(e.v), e.weight) for e in h.edges.values()) == \
            sorted((str(e.u), str(e.v), e.weight) for e in g.edges.values())

    def test_matching_json_round_trip(self, tmp_path):
        g = complete_graph(4)
        m = Matching(g, [0, 5])
        p = tmp_path / "m.json"
        p.write_text(json.dumps({"matching": matching_to_json(m)}))
        assert read_matching(p, g) == m
        p.write_text("a b\nc d\n")
        assert read_matching(p, g) == m

    def test_unknown_vertex(self):
        with pytest.raises(MatchingError, match="unknown vertex"):
            matching_from_pairs(complete_graph(3), [["a", "z"]])
