"""Strongly w-maximal matchings of arbitrary finite graphs, obtained from a
strongly w-minimal (almost) perfect matching of the completed, negated
instance."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph_core import Edge, Graph, Matching, normalize_weights
from .primal_dual import DualCertificate, run


@dataclass
class ReductionResult:
    matching: Matching
    completed: Graph
    origin: dict[int, int | None]
    completed_matching: Matching
    certificate: DualCertificate
    scale: Fraction
    shift: Fraction


def complete_and_negate(g: Graph) -> tuple[Graph, dict[int, int | None]]:
    """Negate every weight and join each non-adjacent pair by a weight-0 edge.

    The origin map sends edge ids of the result to the original id, or to
    None for fill edges.  Original edges keep their ids.
    """
    edges = [Edge(e.id, e.u, e.v, -e.weight) for e in g.edges.values()]
    origin: dict[int, int | None] = {e.id: e.id for e in edges}
    nxt = max(g.edges, default=-1) + 1
    vs = g.vertices
    for a in range(len(vs)):
        near = set(g.neighbors(vs[a]))
        for b in range(a + 1, len(vs)):
            if vs[b] not in near:
                edges.append(Edge(nxt, vs[a], vs[b], Fraction(0)))
                origin[nxt] = None
                nxt += 1
    return Graph(vs, edges), origin


def strongly_w_maximal(g: Graph) -> Matching:
    return solve_max(g).matching


def solve_max(g: Graph) -> ReductionResult:
    """Run the reduction and keep the intermediate objects.

    Edges of weight <= 0 are dropped first: none of them can lie in a
    strongly w-maximal matching with a negative weight, and dropping a
    zero-weight edge changes no weight comparison.
    """
    positive = g.edge_subgraph(eid for eid, e in g.edges.items() if e.weight > 0)
    completed, origin = complete_and_negate(positive)
    normalised, scale, shift = normalize_weights(completed)
    m_full, cert = run(normalised)
    m_completed = Matching(completed, m_full.edges)
    kept = [eid for eid in m_completed.edges if origin[eid] is not None]
    return ReductionResult(Matching(g, kept), completed, origin, m_completed, cert, scale, shift)


def fill_greedily(completed: Graph, origin: dict[int, int | None], m: Matching) -> Matching:
    """Extend M greedily until at most one vertex is exposed, fill edges first."""
    chosen = set(m.edges)
    covered = set(m.support())
    for eid in sorted(completed.edges, key=lambda k: (origin[k] is not None, k)):
        e = completed.edges[eid]
        if e.u not in covered and e.v not in covered:
            chosen.add(eid)
            covered.update(e.ends)
    return Matching(completed, chosen)
