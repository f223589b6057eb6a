"""Alternating-path search and strong-maximality certificates.

On a finite graph a matching is strongly maximal exactly when it has
maximum cardinality, and it has maximal support under the same condition
because there are no infinite alternating paths.  The search below is the
classical alternating forest with blossom shrinking.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .graph_core import Graph, Matching, Vertex, edge_set_weight, symmetric_difference_decompose


class PathClass(str, enum.Enum):
    FINITELY_IMPROVING = "finitely_improving"
    INDIFFERENT = "indifferent"
    # both endpoints covered: alternating, but neither of the named kinds
    NEUTRAL = "neutral"
    NOT_ALTERNATING = "not_alternating"


@dataclass(frozen=True)
class ImprovingPath:
    vertices: tuple
    edges: tuple[int, ...]
    classification: PathClass = PathClass.FINITELY_IMPROVING

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class WeightedImprovement:
    matching: Matching
    gain: Fraction
    switched: tuple[int, ...]

    def to_json(self) -> dict:
        from .graph_core import format_rational, matching_to_json
        g = self.matching.graph
        return {
            "certified": False,
            "gain": format_rational(self.gain),
            "switch": [[str(x) for x in g.edges[e].ends] for e in self.switched],
            "improved_matching": matching_to_json(self.matching),
        }


class _Forest:
    """Index-based state for one alternating-forest search."""

    def __init__(self, g: Graph, mate_edge: dict[Vertex, int]):
        self.g = g
        self.n = n = len(g.vertices)
        idx = g.index
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for e in g.edges.values():
            a, b = idx(e.u), idx(e.v)
            self.adj[a].append((b, e.id))
            self.adj[b].append((a, e.id))
        for row in self.adj:
            row.sort()
        self.mate = [-1] * n
        self.mate_eid = [-1] * n
        for v, eid in mate_edge.items():
            e = g.edges[eid]
            i = idx(v)
            self.mate[i] = idx(e.other(v))
            self.mate_eid[i] = eid

    def search(self, root: int) -> tuple[list[int] | None, list[bool]]:
        """Grow the tree at ``root``.  Returns (augmenting path or None, even marks).

        The path is returned as an alternating list ``[v0, e0, v1, e1, ...]``
        of vertex indices and edge ids, from the exposed end to ``root``.
        """
        n, mate = self.n, self.mate
        used = [False] * n
        parent = [-1] * n
        parent_eid = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            while True:
                a = base[a]
                seen[a] = True
                if mate[a] == -1:
                    break
                a = parent[mate[a]]
            while True:
                b = base[b]
                if seen[b]:
                    return b
                b = parent[mate[b]]

        def mark(v: int, b: int, child: int, ceid: int, blossom: list[bool]) -> None:
            while base[v] != b:
                blossom[base[v]] = blossom[base[mate[v]]] = True
                parent[v] = child
                parent_eid[v] = ceid
                child = mate[v]
                ceid = parent_eid[mate[v]]
                v = parent[mate[v]]

        while q:
            v = q.popleft()
            for to, eid in self.adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    blossom = [False] * n
                    mark(v, cur, to, eid, blossom)
                    mark(to, cur, v, eid, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    parent_eid[to] = eid
                    if mate[to] == -1:
                        path = [to]
                        x = to
                        while x != -1:
                            p = parent[x]
                            path += [parent_eid[x], p]
                            nxt = mate[p]
                            if nxt != -1:
                                path += [self.mate_eid[p], nxt]
                            x = nxt
                        return path, used
                    used[mate[to]] = True
                    q.append(mate[to])
        return None, used

    def augment(self, path: list[int]) -> None:
        # path alternates non-matching / matching edges starting and ending
        # with a non-matching edge
        for k in range(1, len(path), 4):
            eid, a, b = path[k], path[k - 1], path[k + 1]
            self.mate[a], self.mate[b] = b, a
            self.mate_eid[a] = self.mate_eid[b] = eid

    def exposed(self) -> list[int]:
        return [i for i in range(self.n) if self.mate[i] == -1]

    def mate_map(self) -> dict[Vertex, int]:
        vs = self.g.vertices
        return {vs[i]: self.mate_eid[i] for i in range(self.n) if self.mate[i] != -1}


def _path_result(g: Graph, path: list[int]) -> ImprovingPath:
    vs = g.vertices
    verts = tuple(vs[i] for i in path[0::2])
    edges = tuple(path[1::2])
    if g.index(verts[0]) > g.index(verts[-1]):
        verts, edges = verts[::-1], edges[::-1]
    return ImprovingPath(verts, edges)


def find_finitely_improving_path(g: Graph, m: Matching) -> ImprovingPath | None:
    """A finitely M-improving path, or None when M is strongly maximal.

    Trees are grown from the exposed vertices in vertex order and edges are
    scanned by (neighbour index, edge id), so the answer is reproducible.
    """
    forest = _Forest(g, {v: m.edge_at(v) for v in m.support()})
    for root in forest.exposed():
        path, _ = forest.search(root)
        if path is not None:
            return _path_result(g, path)
    return None


def is_strongly_maximal(g: Graph, m: Matching) -> bool:
    return find_finitely_improving_path(g, m) is None


# Finite graphs have no infinitely improving paths, so maximal support and
# strong maximality coincide.
has_maximal_support = is_strongly_maximal


def maximum_matching(g: Graph, initial: Matching | None = None) -> Matching:
    """Augment ``initial`` (default: empty) to maximum cardinality.

    Augmentation never uncovers a vertex, so the support only grows.
    """
    mates = {} if initial is None else {v: initial.edge_at(v) for v in initial.support()}
    forest = _Forest(g, mates)
    # A root whose search fails stays unaugmentable, so one pass suffices.
    for root in range(forest.n):
        if forest.mate[root] != -1:
            continue
        path, _ = forest.search(root)
        if path is not None:
            forest.augment(path)
    return Matching(g, set(forest.mate_map().values()))


def even_reachable(g: Graph, m: Matching) -> set:
    """Vertices reachable from an exposed vertex by an even alternating path.

    Requires M to be of maximum cardinality (then this is the set of vertices
    missed by some maximum matching).
    """
    forest = _Forest(g, {v: m.edge_at(v) for v in m.support()})
    out: set = set()
    for root in forest.exposed():
        path, used = forest.search(root)
        if path is not None:
            raise ValueError("matching is not of maximum cardinality")
        out.update(g.vertices[i] for i, flag in enumerate(used) if flag)
    return out


def classify_path(g: Graph, m: Matching, p: Sequence[Vertex]) -> PathClass:
    """Classify a finite vertex sequence relative to M.

    Consecutive vertices must be adjacent and the sequence simple; a matched
    pair is read through its matching edge.
    """
    if len(p) < 2 or len(set(p)) != len(p) or any(v not in g for v in p):
        return PathClass.NOT_ALTERNATING
    in_m = []
    for a, b in zip(p, p[1:]):
        between = g.edges_between(a, b)
        if not between:
            return PathClass.NOT_ALTERNATING
        in_m.append(any(e in m.edges for e in between))
    if any(x == y for x, y in zip(in_m, in_m[1:])):
        return PathClass.NOT_ALTERNATING
    covered = (m.covers(p[0]), m.covers(p[-1]))
    if not any(covered):
        return PathClass.FINITELY_IMPROVING
    if all(covered):
        return PathClass.NEUTRAL
    return PathClass.INDIFFERENT


def _integer_weights(g: Graph) -> dict[int, int]:
    scale = math.lcm(*(e.weight.denominator for e in g.edges.values())) if g.edges else 1
    return {eid: int(e.weight * scale) for eid, e in g.edges.items()}


def _max_weight_edges(g: Graph) -> set[int]:
    weights = _integer_weights(g)
    best: dict[tuple, int] = {}
    for eid, e in g.edges.items():
        if weights[eid] <= 0:
            continue
        key = tuple(sorted((g.index(e.u), g.index(e.v))))
        if key not in best or weights[eid] > weights[best[key]]:
            best[key] = eid
    h = nx.Graph()
    h.add_nodes_from(range(len(g.vertices)))
    for (a, b), eid in best.items():
        h.add_edge(a, b, weight=weights[eid], eid=eid)
    return {h.edges[a, b]["eid"] for a, b in nx.max_weight_matching(h)}


def is_strongly_w_maximal(g: Graph, m: Matching) -> WeightedImprovement | None:
    """None when M is strongly w-maximal, else a verified positive-gain switch.

    The witness switches a single alternating path or cycle of M xor N for a
    maximum-weight N; its gain is recomputed exactly before it is returned.
    """
    best = Matching(g, _max_weight_edges(g))
    if best.weight() <= m.weight():
        return None
    candidates = []
    for comp in symmetric_difference_decompose(m, best):
        gain = (edge_set_weight(g, (e for e in comp.edges if e not in m.edges))
                - edge_set_weight(g, (e for e in comp.edges if e in m.edges)))
        if gain > 0:
            candidates.append((-gain, min(comp.edges), comp))
    # some component must carry positive gain since the total does
    _, _, comp = min(candidates, key=lambda t: (t[0], t[1]))
    improved = m.switch(comp.edges)
    gain = (edge_set_weight(g, improved.edges - m.edges)
            - edge_set_weight(g, m.edges - improved.edges))
    assert gain > 0
    return WeightedImprovement(improved, gain, tuple(comp.edges))
