from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strongmatch import counterexample as cx
from strongmatch.counterexample import A, ONE, LinearForm


@pytest.fixture(scope="module")
def prefix3():
    return cx.build_prefix(3)


@pytest.fixture(scope="module")
def prefix2():
    return cx.build_prefix(2)


class TestIrrationalA:
    def test_bracket_nests(self):
        prev = cx.IrrationalA(1)
        for k in range(2, 9):
            cur = cx.IrrationalA(k)
            assert prev.lower < cur.lower < cur.upper <= prev.upper
            prev = cur

    def test_first_terms(self):
        assert cx.IrrationalA(3).lower == Fraction(1, 1) + Fraction(1, 100) + Fraction(1, 100000)

    def test_a_minus_one(self):
        a = cx.IrrationalA(5)
        assert a.sign(A - ONE, -Fraction(1, 100)) == 1
        assert a.sign(A - ONE, -Fraction(1, 10)) == -1

    def test_undecidable_without_widening(self):
        d = cx.Decider(1, widen=False)
        with pytest.raises(cx.UndecidableInequality):
            d.sign(LinearForm(-101, 100))

    def test_widening(self):
        d = cx.Decider(1)
        assert d.sign(LinearForm(-101, 100)) == 1
        assert d.widenings > 0

    @given(st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 5, 10 ** 5))
    def test_truncation_stable(self, c0, c1):
        verdicts = {cx.IrrationalA(k).sign(LinearForm(c0, c1)) for k in range(1, 9)}
        verdicts.discard(None)
        assert len(verdicts) <= 1

    def test_linear_form_text(self):
        assert str(LinearForm(-1, 2)) == "2a - 1"
        assert str(LinearForm(0, 1)) == "a"
        assert str(LinearForm(3, 0)) == "3"


class TestBuild:
    def test_lengths(self, prefix3):
        assert prefix3.ns == [1, 101, 101001]
        assert [p.edge_count for p in prefix3.paths] == [3, 203, 202003]

    def test_first_path(self, prefix3):
        p = prefix3.path(1)
        assert [str(p.weight(t)) for t in range(3)] == ["a", "2a - 1", "2a"]
        assert [p.vertex(i) for i in range(4)] == ["x", "x1_1", "x1_2", "y"]

    def test_weight_shapes(self, prefix2):
        for p in prefix2.paths:
            for t in range(p.edge_count):
                w = p.weight(t)
                assert w.c1 in (1, 2) and w.c0 in (0, -1)
                if t % 2:
                    assert w == LinearForm(-1, 2)

    def test_budget(self, monkeypatch):
        with pytest.raises(cx.EdgeBudgetExceeded):
            cx.build_prefix(4)
        monkeypatch.setenv(cx.BUDGET_ENV, "100")
        with pytest.raises(cx.EdgeBudgetExceeded):
            cx.build_prefix(2)

    def test_same_weights_at_other_truncations(self, prefix2):
        other = cx.build_prefix(2, truncation=10)
        assert [p.odd_c1 for p in other.paths] == [p.odd_c1 for p in prefix2.paths]


class TestInequalities:
    def test_all_hold(self, prefix3):
        report = cx.verify_inequalities(prefix3)
        assert report.all_hold
        names = {c.name for c in report.checks}
        assert {"almost_integral", "evenodd", "evenlength", "oddlength", "k_count",
                "sandwich", "increasing", "last_odd_edge", "even_total"} <= names
        assert [c.detail["i"] for c in report.get("almost_integral")] == [1, 2, 3, 4, 5, 6]
        assert [c.detail["k"] for c in report.get("k_count")] == [1, 100, 100000]
        assert [c.detail["positions"] for c in report.get("evenodd")] == [3, 103, 101003]

    def test_report_is_exact_text(self, prefix2):
        data = cx.verify_inequalities(prefix2).to_json()
        assert data["depth"] == 2 and "finite prefix" in data["note"]
        assert data["checks"][0]["n"][:2] == ["1", "101"]
        for c in data["checks"]:
            for key in ("bracket", "min_bracket", "max_bracket"):
                if key in c:
                    for bound in c[key].values():
                        assert "." not in bound
                        Fraction(bound)

    def test_independent_prefix_sums(self, prefix2):
        # recompute odd - even along P_2 with Fractions at a fine bracket
        a = cx.IrrationalA(12)
        p = prefix2.path(2)
        lo = hi = Fraction(0)
        for t in range(p.edge_count):
            w = p.weight(t)
            wl, wh = a.bounds(w)
            if t % 2 == 0:
                lo, hi = lo + wl, hi + wh
                assert lo >= a.lower  # prefix ending after an odd edge is at least a
            else:
                lo, hi = lo - wh, hi - wl
                assert hi < 1

    def test_sandwich_values(self, prefix3):
        fs = [p.odd_minus_even() for p in prefix3.paths]
        assert fs[0] == LinearForm(1, 1)
        d = prefix3.decider
        for j, f in enumerate(fs, start=1):
            assert d.sign(f - 2 * A, Fraction(1, 10 ** j)) > 0
            assert d.sign(f - 2 * A, Fraction(1, 10 ** (j + 1))) < 0


class TestImprovement:
    def test_swap_chain(self, prefix3):
        d = prefix3.decider
        gains = []
        for i in (1, 2):
            w = cx.demonstrate_improvement(prefix3, cx.odd_path_matching(prefix3, i))
            assert w.kind == "swap"
            assert [s[0] for s in w.segments] == [i, i + 1]
            assert d.sign(w.gain) > 0
            assert w.improved.weight_of(w.improved.edges) - \
                w.improved.weight_of(cx.odd_path_matching(prefix3, i).edges) == w.gain
            gains.append(w.gain)
        assert d.less(gains[1], gains[0])

    def test_last_path_is_prefix_optimal(self, prefix2):
        w = cx.demonstrate_improvement(prefix2, cx.odd_path_matching(prefix2, 2))
        assert w.kind == "prefix_optimal" and w.gain is None
        assert "beyond the prefix" in w.note

    def test_subpath_switch(self, prefix2):
        base = cx.odd_path_matching(prefix2, 1).edges
        m = cx.PrefixMatching(prefix2, base - {(2, 41), (2, 77)})
        w = cx.demonstrate_improvement(prefix2, m)
        assert w.kind == "subpath" and w.segments == [(2, 41, 42)]
        assert w.gain == LinearForm(-1, 2)
        assert prefix2.decider.sign(w.gain - (A - ONE)) > 0

    def test_cross_switch(self, prefix2):
        p2 = prefix2.path(2)
        edges = {(1, 0)} | {(2, t) for t in range(1, 200, 2)} | {(2, p2.edge_count - 1)}
        m = cx.PrefixMatching(prefix2, frozenset(edges))
        w = cx.demonstrate_improvement(prefix2, m)
        assert w.kind == "cross"
        assert prefix2.decider.sign(w.gain - (A - ONE)) >= 0

    def test_invalid_matching(self, prefix2):
        with pytest.raises(cx.PrefixMatchingError):
            cx.PrefixMatching(prefix2, frozenset({(1, 0), (1, 1)}))
        with pytest.raises(cx.PrefixMatchingError):
            cx.PrefixMatching(prefix2, frozenset({(5, 0)}))

    def test_json_forms(self, prefix2):
        m = cx.matching_from_json(prefix2, {"odd_path": 1})
        again = cx.matching_from_json(prefix2, {"edges": [list(e) for e in m.edges]})
        assert m.edges == again.edges
        data = cx.demonstrate_improvement(prefix2, m).to_json()
        assert data["kind"] == "swap" and "/" in data["gain_bracket"]["lower"]
