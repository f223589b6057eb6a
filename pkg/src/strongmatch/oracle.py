"""Brute-force ground truth at desk scale.

Deliberately naive: nothing here reuses the search code of the other
modules, only the plain ``Graph``/``Matching`` containers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from .graph_core import Graph, Matching

FULL_ENUMERATION_EDGES = 24
DEFAULT_LIMIT = 2_000_000


class OracleBoundExceeded(RuntimeError):
    pass


class NoPerfectMatching(ValueError):
    pass


def _edge_recursion(g: Graph) -> Iterator[frozenset]:
    ids = sorted(g.edges)
    ends = [g.edges[e].ends for e in ids]

    def rec(k: int, covered: frozenset, chosen: tuple) -> Iterator[frozenset]:
        if k == len(ids):
            yield frozenset(chosen)
            return
        yield from rec(k + 1, covered, chosen)
        u, v = ends[k]
        if u not in covered and v not in covered:
            yield from rec(k + 1, covered | {u, v}, chosen + (ids[k],))

    yield from rec(0, frozenset(), ())


def _vertex_branching(g: Graph) -> Iterator[frozenset]:
    # Lowest undecided vertex is either left exposed or matched through one
    # of its edges; no branch is ever dead, so large sparse graphs stay cheap.
    order = g.vertices

    def rec(k: int, covered: frozenset, chosen: tuple) -> Iterator[frozenset]:
        while k < len(order) and order[k] in covered:
            k += 1
        if k == len(order):
            yield frozenset(chosen)
            return
        v = order[k]
        yield from rec(k + 1, covered | {v}, chosen)
        for eid in sorted(g.incident(v)):
            u = g.edges[eid].other(v)
            if u not in covered:
                yield from rec(k + 1, covered | {u, v}, chosen + (eid,))

    yield from rec(0, frozenset(), ())


def enumerate_matchings(g: Graph, max_edges: int = FULL_ENUMERATION_EDGES,
                        limit: int = DEFAULT_LIMIT) -> Iterator[Matching]:
    """Yield every matching of ``g`` exactly once.

    Up to ``max_edges`` edges the plain include/exclude recursion is used;
    beyond it, vertex branching.  More than ``limit`` matchings raises
    :class:`OracleBoundExceeded`.
    """
    source = _edge_recursion(g) if len(g.edges) <= max_edges else _vertex_branching(g)
    for count, edges in enumerate(source, start=1):
        if count > limit:
            raise OracleBoundExceeded(f"more than {limit} matchings")
        yield Matching(g, edges)


def count_matchings(g: Graph) -> int:
    return sum(1 for _ in enumerate_matchings(g))


def _near_perfect_sets(g: Graph, allow_exposed: int) -> Iterator[frozenset]:
    """Matchings leaving at most ``allow_exposed`` vertices uncovered."""
    order = g.vertices

    def rec(k: int, covered: frozenset, chosen: tuple, skips: int) -> Iterator[frozenset]:
        while k < len(order) and order[k] in covered:
            k += 1
        if k == len(order):
            yield frozenset(chosen)
            return
        v = order[k]
        for eid in sorted(g.incident(v)):
            u = g.edges[eid].other(v)
            if u not in covered:
                yield from rec(k + 1, covered | {u, v}, chosen + (eid,), skips)
        if skips:
            yield from rec(k + 1, covered | {v}, chosen, skips - 1)

    yield from rec(0, frozenset(), (), allow_exposed)


def _best(g: Graph, candidates, better) -> frozenset | None:
    best = best_w = None
    for edges in candidates:
        w = sum((g.edges[e].weight for e in edges), Fraction(0))
        key = tuple(sorted(edges))
        if best is None or better(w, best_w) or (w == best_w and key < best):
            best, best_w = key, w
    return None if best is None else frozenset(best)


def min_weight_perfect(g: Graph) -> Matching:
    """Cheapest perfect matching (odd order: cheapest almost perfect one)."""
    allow = len(g.vertices) % 2
    edges = _best(g, _near_perfect_sets(g, allow), lambda a, b: a < b)
    if edges is None:
        raise NoPerfectMatching("no perfect or almost perfect matching")
    return Matching(g, edges)


def max_weight_matching(g: Graph) -> Matching:
    edges = _best(g, (m.edges for m in enumerate_matchings(g)), lambda a, b: a > b)
    return Matching(g, edges)


def maximum_cardinality(g: Graph) -> int:
    return max((len(m) for m in enumerate_matchings(g)), default=0)


def has_perfect_matching(g: Graph) -> bool:
    if len(g.vertices) % 2:
        return False
    return next(_near_perfect_sets(g, 0), None) is not None


def is_uniformly_almost_matchable(g: Graph) -> bool:
    return all(has_perfect_matching(g.without([v])) for v in g.vertices)


def is_factor_critical(g: Graph) -> bool:
    return is_uniformly_almost_matchable(g) and not has_perfect_matching(g)


def has_improving_alternative(g: Graph, m: Matching) -> bool:
    """Is there a matching N with |N \\ M| > |M \\ N|?"""
    return maximum_cardinality(g) > len(m)


def weight_improvement(g: Graph, m: Matching) -> Matching | None:
    """A matching N with w[N \\ M] > w[M \\ N], or None."""
    for n in enumerate_matchings(g):
        gain = (sum((g.edges[e].weight for e in n.edges - m.edges), Fraction(0))
                - sum((g.edges[e].weight for e in m.edges - n.edges), Fraction(0)))
        if gain > 0:
            return n
    return None


def alternating_paths(g: Graph, m: Matching, start, max_len: int | None = None):
    """Every M-alternating path from ``start`` whose first edge is not in M.

    Yields vertex tuples (including the trivial path).  Exponential; for
    cross-checks on tiny graphs only.
    """
    def rec(path: list, used: set, need_matched: bool):
        yield tuple(path)
        if max_len is not None and len(path) > max_len:
            return
        x = path[-1]
        for eid in sorted(g.incident(x)):
            if (eid in m.edges) != need_matched:
                continue
            y = g.edges[eid].other(x)
            if y in used:
                continue
            path.append(y)
            used.add(y)
            yield from rec(path, used, not need_matched)
            path.pop()
            used.discard(y)

    yield from rec([start], {start}, False)


def alternating_reach(g: Graph, m: Matching, sources, within=None) -> tuple[set, set]:
    """(odd, even) sets of vertices reached by alternating paths from sources.

    ``within`` restricts the paths to a vertex subset.
    """
    h = g if within is None else g.induced(within)
    odd: set = set()
    even: set = set()
    for s in sources:
        if s not in h:
            continue
        for p in alternating_paths(h, m if within is None else Matching(h, m.edges & h.edges.keys()), s):
            (even if (len(p) - 1) % 2 == 0 else odd).add(p[-1])
    return odd, even
