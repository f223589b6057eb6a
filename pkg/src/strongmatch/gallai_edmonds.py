"""Gallai-Edmonds structure and strongly maximal matchings built from it."""

from __future__ import annotations

from dataclasses import dataclass, field

from .alternating import even_reachable, maximum_matching
from .graph_core import Graph, Matching, Vertex, symmetric_difference_decompose


@dataclass
class GEDecomposition:
    """``T`` is the barrier; ``components`` are all components of G - T.

    ``factor_critical[k]`` flags component ``k``; those flagged form F.
    ``f_map[t]`` is the index of the component matched to ``t`` and
    ``v_of_t[t]`` the contact vertex there.  ``rest`` is the union of the
    unflagged components, which has a perfect matching.
    """

    graph: Graph
    T: list
    components: list[list]
    factor_critical: list[bool]
    f_map: dict
    v_of_t: dict
    rest: list = field(default_factory=list)

    @property
    def F(self) -> list[list]:
        return [c for c, fc in zip(self.components, self.factor_critical) if fc]

    def to_json(self) -> dict:
        s = str
        return {
            "T": [s(t) for t in self.T],
            "components": [[s(v) for v in c] for c in self.components],
            "factor_critical": list(self.factor_critical),
            "f_map": {s(t): {"component": k, "contact": s(self.v_of_t[t])}
                      for t, k in self.f_map.items()},
            "rest": [s(v) for v in self.rest],
        }


def gallai_edmonds(g: Graph) -> GEDecomposition:
    """Barrier ``T`` = neighbours of the vertices missed by some maximum
    matching; the injection is read off a maximum matching, which sends each
    barrier vertex into a distinct deficient component."""
    m = maximum_matching(g)
    deficient = even_reachable(g, m)
    barrier = [v for v in g.vertices
               if v not in deficient and any(u in deficient for u in g.neighbors(v))]
    comps = g.without(barrier).components()
    flags = [c[0] in deficient for c in comps]
    where = {v: k for k, c in enumerate(comps) for v in c}
    f_map, v_of_t = {}, {}
    for t in barrier:
        partner = m.mate(t)
        if partner is None or partner not in deficient:
            raise AssertionError(f"barrier vertex {t!r} not matched into a deficient component")
        f_map[t] = where[partner]
        v_of_t[t] = partner
    if len(set(f_map.values())) != len(f_map):
        raise AssertionError("barrier map is not injective")
    rest = [v for v in g.vertices if v not in deficient and v not in set(barrier)]
    return GEDecomposition(g, barrier, comps, flags, f_map, v_of_t, rest)


def _perfect(g: Graph) -> Matching:
    m = maximum_matching(g)
    if 2 * len(m) != len(g.vertices):
        raise AssertionError("expected a perfect matching")
    return m


def strongly_maximal_matching(g: Graph, dec: GEDecomposition | None = None) -> Matching:
    """Build a maximum matching from the decomposition.

    Each barrier vertex takes the edge to its contact vertex and the rest of
    that component is matched perfectly.  An unmapped factor-critical
    component is matched with its first vertex left exposed, and the
    remainder gets a perfect matching.
    """
    if dec is None:
        dec = gallai_edmonds(g)
    chosen: list[int] = []
    for t in dec.T:
        v = dec.v_of_t[t]
        chosen.append(min(g.edges_between(t, v)))
        comp = dec.components[dec.f_map[t]]
        chosen.extend(_perfect(g.induced(comp).without([v])).edges)
    mapped = set(dec.f_map.values())
    for k, comp in enumerate(dec.components):
        if not dec.factor_critical[k] or k in mapped:
            continue
        chosen.extend(_perfect(g.induced(comp).without([comp[0]])).edges)
    chosen.extend(_perfect(g.induced(dec.rest)).edges)
    return Matching(g, chosen)


def extend_to_strongly_maximal(g: Graph, m: Matching) -> Matching:
    """A strongly maximal N with supp(N) containing supp(M).

    Take a strongly maximal K and switch it along every component of
    K xor M that is a K-indifferent path (one end covered by K, the other not).
    """
    k = strongly_maximal_matching(g)
    switch: list[int] = []
    for comp in symmetric_difference_decompose(k, m):
        if comp.kind != "path":
            continue
        ends = (comp.vertices[0], comp.vertices[-1])
        if k.covers(ends[0]) != k.covers(ends[1]):
            switch.extend(comp.edges)
    n = k.switch(switch)
    if not n.support() >= m.support():
        raise AssertionError("support shrank; K was not strongly maximal")
    return n


def walk_stays_inside(dec: GEDecomposition, m: Matching, path_vertices) -> bool:
    """Once an M-alternating path from an exposed vertex enters
    T + (mapped components) it never leaves it."""
    inside = set(dec.T)
    for t in dec.T:
        inside.update(dec.components[dec.f_map[t]])
    entered = False
    for v in path_vertices:
        if v in inside:
            entered = True
        elif entered:
            return False
    return True
