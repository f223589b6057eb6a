"""Finite prefixes of the two-terminal path family with weights a, 2a, 2a-1.

``a = sum_{i>=1} 10^(1 - i(i+1)/2) = 1.010010001...`` is irrational, so
every weight is kept as an integer linear form ``c0 + c1*a`` and every
comparison is decided by bracketing ``a`` between two rationals.  If a
bracket is too coarse to decide, it is tightened (more series terms) and
the comparison retried.

A finite prefix cannot show that no strongly w-maximal matching exists;
what is checked here is every inequality the construction relies on, and
the explicit improving switches for matchings of the prefix.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .graph_core import format_rational

DEFAULT_EDGE_BUDGET = 250_000
BUDGET_ENV = "STRONGMATCH_EDGE_BUDGET"
MAX_WIDENING = 12
PREFIX_NOTE = ("finite prefix: every inequality is checked exactly for the listed indices; "
               "non-existence of a strongly w-maximal matching needs all infinitely many paths "
               "and is not a finite computation")


class EdgeBudgetExceeded(ValueError):
    pass


class UndecidableInequality(ArithmeticError):
    pass


@dataclass(frozen=True)
class LinearForm:
    """``c0 + c1 * a`` with integer coefficients."""

    c0: int
    c1: int

    def __add__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.c0 + other.c0, self.c1 + other.c1)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return LinearForm(self.c0 - other.c0, self.c1 - other.c1)

    def __neg__(self) -> "LinearForm":
        return LinearForm(-self.c0, -self.c1)

    def __mul__(self, k: int) -> "LinearForm":
        return LinearForm(self.c0 * k, self.c1 * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.c1 == 0:
            return str(self.c0)
        a = "a" if self.c1 == 1 else "-a" if self.c1 == -1 else f"{self.c1}a"
        if self.c0 == 0:
            return a
        return f"{a} {'+' if self.c0 > 0 else '-'} {abs(self.c0)}"


ZERO = LinearForm(0, 0)
ONE = LinearForm(1, 0)
A = LinearForm(0, 1)
TWO_A = LinearForm(0, 2)
EVEN_WEIGHT = LinearForm(-1, 2)


class IrrationalA:
    """Rational bracket ``a_k < a < a_k + tail`` from the first k series terms.

    Internally ``scale * a_k`` and ``scale * (a_k + tail)`` are integers, so
    sign tests are integer comparisons.
    """

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("truncation must be at least 1")
        self.k = k
        tail_exp = (k + 1) * (k + 2) // 2 - 1
        self.scale = 10 ** tail_exp
        self.lo = sum(10 ** (tail_exp + 1 - i * (i + 1) // 2) for i in range(1, k + 1))
        self.hi = self.lo + 2
        self.tail = Fraction(2, self.scale)

    @property
    def value(self) -> Fraction:
        return Fraction(self.lo, self.scale)

    @property
    def lower(self) -> Fraction:
        return self.value

    @property
    def upper(self) -> Fraction:
        return Fraction(self.hi, self.scale)

    def bounds(self, form: LinearForm, offset: Fraction = Fraction(0)) -> tuple[Fraction, Fraction]:
        """Interval containing ``form(a) + offset``."""
        lo = form.c0 + form.c1 * (self.lower if form.c1 >= 0 else self.upper) + offset
        hi = form.c0 + form.c1 * (self.upper if form.c1 >= 0 else self.lower) + offset
        return lo, hi

    def sign(self, form: LinearForm, offset: Fraction | int = 0) -> int | None:
        """Sign of ``form(a) + offset``; None when the bracket cannot decide.

        ``c1 != 0`` makes the value irrational, hence never zero.
        """
        if form.c1 == 0:
            v = form.c0 + offset
            return (v > 0) - (v < 0)
        if isinstance(offset, Fraction):
            p, q = offset.numerator, offset.denominator
        else:
            p, q = offset, 1
        # q * scale * value = (c0*q + p) * scale + c1*q * (scale * a)
        base = (form.c0 * q + p) * self.scale
        slope = form.c1 * q
        lo = base + slope * (self.lo if slope > 0 else self.hi)
        hi = base + slope * (self.hi if slope > 0 else self.lo)
        if lo >= 0:
            return 1
        if hi <= 0:
            return -1
        return None


class Decider:
    """Decides signs, tightening the bracket on demand."""

    def __init__(self, truncation: int, widen: bool = True, max_widening: int = MAX_WIDENING):
        self.start = truncation
        self.a = IrrationalA(truncation)
        self.widen = widen
        self.limit = truncation + (max_widening if widen else 0)
        self.widenings = 0

    @property
    def truncation(self) -> int:
        return self.a.k

    def sign(self, form: LinearForm, offset: Fraction | int = 0) -> int:
        while True:
            s = self.a.sign(form, offset)
            if s is not None:
                return s
            if self.a.k >= self.limit:
                raise UndecidableInequality(
                    f"cannot decide the sign of {form} + {offset} at truncation {self.a.k}")
            self.a = IrrationalA(self.a.k + 1)
            self.widenings += 1

    def less(self, f: LinearForm, g: LinearForm) -> bool:
        return self.sign(f - g) < 0

    def at_least(self, f: LinearForm, g: LinearForm) -> bool:
        """``f >= g`` with exact equality recognised symbolically."""
        return f == g or self.sign(f - g) > 0


def path_lengths(count: int) -> list[int]:
    """Path lengths: 1, then ``10^(i+1) * previous + 1`` for the (i+1)-st."""
    ns = [1]
    for i in range(1, count):
        ns.append(10 ** (i + 1) * ns[-1] + 1)
    return ns[:count]


@dataclass
class PathData:
    """Path ``index`` through positions 0..2n+1; position 0 is x, 2n+1 is y.

    Edge ``t`` joins positions t and t+1; even ``t`` is an odd edge (weight a or
    2a, coefficient stored in ``odd_c1``), odd ``t`` an even edge (2a - 1).
    """

    index: int
    n: int
    odd_c1: bytearray

    @property
    def edge_count(self) -> int:
        return 2 * self.n + 1

    def weight(self, t: int) -> LinearForm:
        if t % 2:
            return EVEN_WEIGHT
        return LinearForm(0, self.odd_c1[t // 2])

    def vertex(self, p: int) -> str:
        if p == 0:
            return "x"
        if p == 2 * self.n + 1:
            return "y"
        return f"x{self.index}_{p}"

    def odd_minus_even(self, stop: int | None = None) -> LinearForm:
        """odd - even over the edges 0 .. stop-1 (default: the whole path)."""
        stop = self.edge_count if stop is None else stop
        odd_edges = (stop + 1) // 2
        even_edges = stop // 2
        c1 = sum(self.odd_c1[:odd_edges])
        return LinearForm(0, c1) - EVEN_WEIGHT * even_edges


@dataclass
class CounterexamplePrefix:
    depth: int
    ns: list[int]
    paths: list[PathData]
    decider: Decider

    @property
    def truncation(self) -> int:
        return self.decider.truncation

    @property
    def edge_count(self) -> int:
        return sum(p.edge_count for p in self.paths)

    def path(self, i: int) -> PathData:
        return self.paths[i - 1]


def edge_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    return int(raw) if raw else DEFAULT_EDGE_BUDGET


def build_prefix(depth: int, truncation: int | None = None, budget: int | None = None,
                 decider: Decider | None = None) -> CounterexamplePrefix:
    """Paths P_1..P_depth with the odd-edge rule: odd edge k gets 2a when the
    odd edges before it sum to less than k(2a - 1), else a."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    budget = edge_budget() if budget is None else budget
    ns = path_lengths(depth)
    total = sum(2 * n + 1 for n in ns)
    if total > budget:
        raise EdgeBudgetExceeded(f"depth {depth} needs {total} edges, budget is {budget}")
    if decider is None:
        decider = Decider(depth + 4 if truncation is None else truncation)
    paths = []
    for i, n in enumerate(ns, start=1):
        c1s = bytearray()
        s = 0
        for k in range(n + 1):
            # running odd sum s*a against k(2a-1)
            lower = decider.sign(LinearForm(k, s - 2 * k)) < 0
            c = 2 if lower else 1
            c1s.append(c)
            s += c
        paths.append(PathData(i, n, c1s))
    return CounterexamplePrefix(depth, ns, paths, decider)


# -- inequality report -----------------------------------------------------

@dataclass
class Check:
    name: str
    holds: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, **self.detail}


@dataclass
class InequalityReport:
    depth: int
    truncation: int
    checks: list[Check]
    a_bounds: tuple[Fraction, Fraction]

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def get(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.name == name]

    def to_json(self) -> dict:
        return {
            "note": PREFIX_NOTE,
            "depth": self.depth,
            "truncation": self.truncation,
            "a": {"lower": format_rational(self.a_bounds[0]), "upper": format_rational(self.a_bounds[1])},
            "all_hold": self.all_hold,
            "checks": [c.to_json() for c in self.checks],
        }


def _interval(a: IrrationalA, form: LinearForm, offset: Fraction = Fraction(0)) -> dict:
    lo, hi = a.bounds(form, offset)
    return {"lower": format_rational(lo), "upper": format_rational(hi)}


def verify_inequalities(prefix: CounterexamplePrefix, extra: int = 3) -> InequalityReport:
    """Check every displayed inequality of the construction on the prefix.

    ``almost_integral`` runs for i <= depth + extra.
    """
    d = prefix.decider
    checks: list[Check] = []
    ns_long = path_lengths(prefix.depth + extra)

    rec = all(ns_long[i] == 10 ** (i + 1) * ns_long[i - 1] + 1 for i in range(1, len(ns_long)))
    checks.append(Check("n_recursion", rec and ns_long[0] == 1,
                        {"n": [str(n) for n in ns_long]}))

    for i, n in enumerate(ns_long, start=1):
        form = LinearForm(-n, 10 ** (i * (i + 1) // 2 - 1))
        lo_ok = d.sign(form, -Fraction(1, 10 ** (i + 1))) > 0
        hi_ok = d.sign(form, -Fraction(1, 10 ** i)) < 0
        checks.append(Check("almost_integral", lo_ok and hi_ok,
                            {"i": i, "value": str(form), "lower": f"1/{10 ** (i + 1)}",
                             "upper": f"1/{10 ** i}", "bracket": _interval(d.a, form)}))

    for p in prefix.paths:
        checks.extend(_path_checks(p, d))

    fs = [p.odd_minus_even() for p in prefix.paths]
    for j, (p, f) in enumerate(zip(prefix.paths, fs), start=1):
        lo_ok = d.sign(f - TWO_A, Fraction(1, 10 ** j)) > 0
        hi_ok = d.sign(f - TWO_A, Fraction(1, 10 ** (j + 1))) < 0
        checks.append(Check("sandwich", lo_ok and hi_ok,
                            {"j": j, "odd_minus_even": str(f),
                             "lower": f"2a - 1/{10 ** j}", "upper": f"2a - 1/{10 ** (j + 1)}",
                             "bracket": _interval(d.a, f)}))
    for j in range(1, len(fs)):
        checks.append(Check("increasing", d.less(fs[j - 1], fs[j]),
                            {"j": j, "difference": str(fs[j] - fs[j - 1]),
                             "bracket": _interval(d.a, fs[j] - fs[j - 1])}))
    return InequalityReport(prefix.depth, d.truncation, checks, (d.a.lower, d.a.upper))


def _path_checks(p: PathData, d: Decider) -> list[Check]:
    j, n = p.index, p.n
    out = []
    # running sums of the odd edges before odd edge k against k(2a - 1)
    evenodd_ok, s = True, 0
    worst_low = worst_high = None
    for k in range(n + 2):
        diff = LinearForm(k, s - 2 * k)
        ok = d.at_least(diff, ONE - A) and d.less(diff, ONE)
        evenodd_ok &= ok
        if worst_low is None or d.less(diff, worst_low):
            worst_low = diff
        if worst_high is None or d.less(worst_high, diff):
            worst_high = diff
        if k <= n:
            s += p.odd_c1[k]
    out.append(Check("evenodd", evenodd_ok,
                     {"path": j, "positions": n + 2, "min": str(worst_low), "max": str(worst_high),
                      "min_bracket": _interval(d.a, worst_low), "max_bracket": _interval(d.a, worst_high)}))

    # prefix x P x_t, accumulated edge by edge
    acc = ZERO
    even_ok = odd_ok = True
    for t in range(p.edge_count + 1):
        if t % 2 == 0:
            even_ok &= d.less(acc, ONE)
        else:
            odd_ok &= d.at_least(acc, A)
        if t < p.edge_count:
            w = p.weight(t)
            acc = acc + w if t % 2 == 0 else acc - w
    out.append(Check("evenlength", even_ok, {"path": j, "positions": p.edge_count // 2 + 1}))
    out.append(Check("oddlength", odd_ok, {"path": j, "positions": (p.edge_count + 1) // 2}))

    expected = 10 ** (j * (j + 1) // 2 - 1)
    k_count = sum(1 for c in p.odd_c1[:n] if c == 1)
    out.append(Check("k_count", k_count == expected, {"path": j, "k": k_count, "expected": expected}))
    out.append(Check("last_odd_edge", p.odd_c1[n] == 2, {"path": j, "weight": str(p.weight(2 * n))}))
    even_sum = EVEN_WEIGHT * n
    computed = sum((p.weight(t) for t in range(1, p.edge_count, 2)), ZERO)
    out.append(Check("even_total", computed == even_sum, {"path": j, "even": str(computed)}))
    return out


# -- matchings on the prefix and improving switches -------------------------

class PrefixMatchingError(ValueError):
    pass


@dataclass
class PrefixMatching:
    """Edges as ``(i, t)``: edge t of path i, joining positions t and t+1."""

    prefix: CounterexamplePrefix
    edges: frozenset

    def __post_init__(self):
        seen: dict = {}
        for i, t in self.edges:
            if not 1 <= i <= self.prefix.depth:
                raise PrefixMatchingError(f"no path {i} in a depth-{self.prefix.depth} prefix")
            p = self.prefix.path(i)
            if not 0 <= t < p.edge_count:
                raise PrefixMatchingError(f"path {i} has no edge {t}")
            for pos in (t, t + 1):
                v = p.vertex(pos)
                if v in seen:
                    raise PrefixMatchingError(f"vertex {v} is covered twice")
                seen[v] = (i, t)
        object.__setattr__(self, "_cover", seen)

    def covers(self, v: str) -> bool:
        return v in self._cover

    def edge_at(self, v: str):
        return self._cover.get(v)

    def weight_of(self, edges: Iterable[tuple[int, int]]) -> LinearForm:
        return sum((self.prefix.path(i).weight(t) for i, t in edges), ZERO)


def odd_path_matching(prefix: CounterexamplePrefix, i: int) -> PrefixMatching:
    """Odd edges of path i and even edges of every other path (a perfect matching)."""
    edges = set()
    for p in prefix.paths:
        start = 0 if p.index == i else 1
        edges.update((p.index, t) for t in range(start, p.edge_count, 2))
    return PrefixMatching(prefix, frozenset(edges))


def matching_from_json(prefix: CounterexamplePrefix, data: dict) -> PrefixMatching:
    if "odd_path" in data:
        return odd_path_matching(prefix, int(data["odd_path"]))
    return PrefixMatching(prefix, frozenset((int(i), int(t)) for i, t in data["edges"]))


@dataclass
class SwitchWitness:
    kind: str  # "subpath", "cross", "swap", or "prefix_optimal"
    segments: list[tuple[int, int, int]]  # (path, first vertex position, last vertex position)
    gain: LinearForm | None
    gain_bracket: tuple[Fraction, Fraction] | None
    improved: PrefixMatching | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {"kind": self.kind,
               "segments": [{"path": i, "from": a, "to": b} for i, a, b in self.segments],
               "note": self.note}
        if self.gain is not None:
            out["gain"] = str(self.gain)
            out["gain_bracket"] = {"lower": format_rational(self.gain_bracket[0]),
                                   "upper": format_rational(self.gain_bracket[1])}
        return out


def _switch(m: PrefixMatching, segments) -> tuple[PrefixMatching, LinearForm]:
    flip = {(i, t) for i, a, b in segments for t in range(min(a, b), max(a, b))}
    new_edges = m.edges.symmetric_difference(flip)
    improved = PrefixMatching(m.prefix, frozenset(new_edges))
    gain = m.weight_of(new_edges - m.edges) - m.weight_of(m.edges - new_edges)
    return improved, gain


def _witness(m: PrefixMatching, kind: str, segments, note: str = "") -> SwitchWitness:
    d = m.prefix.decider
    improved, gain = _switch(m, segments)
    if d.sign(gain) <= 0:
        raise AssertionError(f"{kind} switch does not improve: gain {gain}")
    return SwitchWitness(kind, segments, gain, d.a.bounds(gain), improved, note)


def demonstrate_improvement(prefix: CounterexamplePrefix, m: PrefixMatching) -> SwitchWitness:
    """An explicit improving switch of M inside the prefix.

    Two exposed vertices on one path: switch the subpath between
    consecutive ones.  x and y matched along different paths: switch the
    path through x joining the exposed vertices of those two paths.  M
    perfect along the odd edges of path i: swap paths i and i+1, which needs
    i < depth; for i = depth the improving swap lies beyond the prefix.
    """
    for p in prefix.paths:
        free = [pos for pos in range(p.edge_count + 1) if not m.covers(p.vertex(pos))]
        if len(free) >= 2:
            a, b = free[0], free[1]
            return _witness(m, "subpath", [(p.index, a, b)],
                            "two exposed vertices on one path")
    ex, ey = m.edge_at("x"), m.edge_at("y")
    if ex is None or ey is None:
        raise AssertionError("an exposed terminal forces two exposed vertices on one path")
    i, j = ex[0], ey[0]
    if i != j:
        pa, pb = prefix.path(i), prefix.path(j)
        mi = next(pos for pos in range(pa.edge_count + 1) if not m.covers(pa.vertex(pos)))
        nj = next(pos for pos in range(pb.edge_count + 1) if not m.covers(pb.vertex(pos)))
        return _witness(m, "cross", [(i, mi, 0), (j, 0, nj)],
                        "x and y matched along different paths")
    if i == prefix.depth:
        return SwitchWitness("prefix_optimal", [], None, None, None,
                             f"M uses the odd edges of path {i}; the improving swap needs path {i + 1}, "
                             "which lies beyond the prefix")
    p, q = prefix.path(i), prefix.path(i + 1)
    return _witness(m, "swap", [(i, 0, p.edge_count), (i + 1, 0, q.edge_count)],
                    f"swap the odd edges of path {i} for those of path {i + 1}")
