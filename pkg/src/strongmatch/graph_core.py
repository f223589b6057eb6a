"""Exact-arithmetic graphs, matchings and the edge-list text format.

Weights are :class:`fractions.Fraction` throughout.  Graphs are finite,
undirected and may carry parallel edges; every edge has a stable integer id
that survives contraction, so a matching found in a contracted view can be
read back as a set of host edges.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import total_ordering
from typing import Hashable, Iterable, Iterator, Sequence

Vertex = Hashable
Rational = Fraction


class GraphFormatError(ValueError):
    """Raised for a malformed edge-list file; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@total_ordering
class HalfInt:
    """An exact multiple of 1/2, stored as its doubled integer value."""

    __slots__ = ("doubled",)

    def __init__(self, doubled: int = 0):
        if not isinstance(doubled, int):
            raise TypeError("HalfInt stores an integer count of halves")
        self.doubled = doubled

    @classmethod
    def from_value(cls, value) -> "HalfInt":
        q = Fraction(value) * 2
        if q.denominator != 1:
            raise ValueError(f"{value} is not a multiple of 1/2")
        return cls(int(q))

    def __add__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled + other.doubled)

    def __sub__(self, other: "HalfInt") -> "HalfInt":
        return HalfInt(self.doubled - other.doubled)

    def __neg__(self) -> "HalfInt":
        return HalfInt(-self.doubled)

    def __eq__(self, other) -> bool:
        if isinstance(other, HalfInt):
            return self.doubled == other.doubled
        if isinstance(other, (int, Fraction)):
            return Fraction(self.doubled, 2) == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        if isinstance(other, HalfInt):
            return self.doubled < other.doubled
        if isinstance(other, (int, Fraction)):
            return Fraction(self.doubled, 2) < other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(Fraction(self.doubled, 2))

    def to_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def is_integral(self) -> bool:
        return self.doubled % 2 == 0

    def __repr__(self) -> str:
        return f"HalfInt({format_rational(self.to_fraction())})"

    def __str__(self) -> str:
        return format_rational(self.to_fraction())


HALF = HalfInt(1)


def parse_rational(token: str) -> Fraction:
    """Parse ``p/q`` or an integer token.  Decimals are rejected on purpose."""
    token = token.strip()
    if "." in token or "e" in token.lower():
        raise ValueError(f"decimal weight {token!r} not allowed; use p/q")
    return Fraction(token)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Edge:
    id: int
    u: Vertex
    v: Vertex
    weight: Fraction = Fraction(0)

    def other(self, x: Vertex) -> Vertex:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ValueError(f"{x!r} is not an endpoint of edge {self.id}")

    @property
    def ends(self) -> tuple[Vertex, Vertex]:
        return (self.u, self.v)


class Graph:
    """Finite undirected multigraph with exact rational edge weights.

    ``vertices`` fixes a total order used for every tie-break in the package.
    Edges are given either as ``Edge`` objects (ids kept) or ``(u, v, w)``
    triples (ids assigned 0, 1, ...).
    """

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable = ()):
        self.vertices: tuple = tuple(dict.fromkeys(vertices))
        self._index = {v: i for i, v in enumerate(self.vertices)}
        if len(self._index) != len(self.vertices):
            raise ValueError("duplicate vertices")
        built: dict[int, Edge] = {}
        for k, e in enumerate(edges):
            if not isinstance(e, Edge):
                u, v, *w = e
                e = Edge(k, u, v, Fraction(w[0]) if w else Fraction(0))
            elif not isinstance(e.weight, Fraction):
                e = Edge(e.id, e.u, e.v, Fraction(e.weight))
            if e.u == e.v:
                raise ValueError(f"self-loop at {e.u!r}")
            if e.u not in self._index or e.v not in self._index:
                raise ValueError(f"edge {e.id} has an endpoint outside the graph")
            if e.id in built:
                raise ValueError(f"duplicate edge id {e.id}")
            built[e.id] = e
        self.edges: dict[int, Edge] = built
        adj: dict[Vertex, list[int]] = {v: [] for v in self.vertices}
        for e in built.values():
            adj[e.u].append(e.id)
            adj[e.v].append(e.id)
        self._adj = {v: tuple(ids) for v, ids in adj.items()}

    @classmethod
    def from_edges(cls, triples: Iterable[tuple], vertices: Iterable[Vertex] = ()) -> "Graph":
        triples = list(triples)
        order = list(vertices)
        for u, v, *_ in triples:
            order.extend((u, v))
        return cls(order, triples)

    # -- queries ---------------------------------------------------------
    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self._index

    def index(self, v: Vertex) -> int:
        return self._index[v]

    def incident(self, v: Vertex) -> tuple[int, ...]:
        return self._adj[v]

    def edge(self, eid: int) -> Edge:
        return self.edges[eid]

    def weight(self, eid: int) -> Fraction:
        return self.edges[eid].weight

    def neighbors(self, v: Vertex) -> list[Vertex]:
        return list(dict.fromkeys(self.edges[e].other(v) for e in self._adj[v]))

    def edges_between(self, u: Vertex, v: Vertex) -> list[int]:
        return [e for e in self._adj[u] if self.edges[e].other(u) == v]

    def is_complete(self) -> bool:
        n = len(self.vertices)
        return all(len(self.neighbors(v)) == n - 1 for v in self.vertices)

    def max_weight(self) -> Fraction:
        return max((e.weight for e in self.edges.values()), default=Fraction(0))

    # -- derived graphs --------------------------------------------------
    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Same vertex set, only the given edges (ids preserved)."""
        keep = set(edge_ids)
        return Graph(self.vertices, [e for e in self.edges.values() if e.id in keep])

    def induced(self, vertices: Iterable[Vertex]) -> "Graph":
        keep = set(vertices)
        order = [v for v in self.vertices if v in keep]
        return Graph(order, [e for e in self.edges.values() if e.u in keep and e.v in keep])

    def without(self, vertices: Iterable[Vertex]) -> "Graph":
        drop = set(vertices)
        return self.induced(v for v in self.vertices if v not in drop)

    def with_weights(self, weights: dict[int, Fraction]) -> "Graph":
        return Graph(self.vertices, [Edge(e.id, e.u, e.v, Fraction(weights[e.id]))
                                     for e in self.edges.values()])

    def components(self) -> list[list[Vertex]]:
        """Connected components in vertex order."""
        seen: set = set()
        out = []
        for s in self.vertices:
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in self.neighbors(x):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            comp.sort(key=self.index)
            out.append(comp)
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class MatchingError(ValueError):
    pass


class Matching:
    """An immutable set of pairwise disjoint edges of a host graph."""

    __slots__ = ("graph", "edges", "_mate")

    def __init__(self, graph: Graph, edges: Iterable[int] = ()):
        self.graph = graph
        self.edges = frozenset(edges)
        mate: dict[Vertex, int] = {}
        for eid in sorted(self.edges):
            if eid not in graph.edges:
                raise MatchingError(f"edge {eid} is not in the graph")
            e = graph.edges[eid]
            for x in e.ends:
                if x in mate:
                    raise MatchingError(f"vertex {x!r} is covered twice")
                mate[x] = eid
        self._mate = mate

    def support(self) -> frozenset:
        return frozenset(self._mate)

    def covers(self, v: Vertex) -> bool:
        return v in self._mate

    def edge_at(self, v: Vertex) -> int | None:
        return self._mate.get(v)

    def mate(self, v: Vertex) -> Vertex | None:
        eid = self._mate.get(v)
        return None if eid is None else self.graph.edges[eid].other(v)

    def exposed(self) -> list[Vertex]:
        return [v for v in self.graph.vertices if v not in self._mate]

    def is_perfect(self) -> bool:
        return len(self._mate) == len(self.graph.vertices)

    def is_almost_perfect(self) -> bool:
        return len(self._mate) == len(self.graph.vertices) - 1

    def weight(self) -> Fraction:
        return matching_weight(self)

    def switch(self, edge_ids: Iterable[int]) -> "Matching":
        """Symmetric difference with an edge set (must yield a matching)."""
        return Matching(self.graph, self.edges.symmetric_difference(edge_ids))

    def pairs(self) -> list[tuple]:
        """Matched endpoint pairs, each pair and the list sorted by vertex order."""
        g = self.graph
        out = []
        for eid in self.edges:
            u, v = g.edges[eid].ends
            if g.index(u) > g.index(v):
                u, v = v, u
            out.append((u, v))
        out.sort(key=lambda p: (g.index(p[0]), g.index(p[1])))
        return out

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.edges))

    def __eq__(self, other) -> bool:
        return isinstance(other, Matching) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def __repr__(self) -> str:
        return f"Matching({self.pairs()!r})"


def matching_weight(m: Matching) -> Fraction:
    return sum((m.graph.edges[e].weight for e in m.edges), Fraction(0))


def edge_set_weight(g: Graph, edge_ids: Iterable[int]) -> Fraction:
    return sum((g.edges[e].weight for e in edge_ids), Fraction(0))


# -- symmetric differences -------------------------------------------------

@dataclass(frozen=True)
class AltComponent:
    """A path or cycle of ``M xor N``; ``edges`` are listed in walking order."""

    kind: str  # "path" or "cycle"
    edges: tuple[int, ...]
    vertices: tuple = field(default=())
    in_first: tuple[bool, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.edges)


def symmetric_difference_decompose(m: Matching, n: Matching) -> list[AltComponent]:
    """Split ``M xor N`` into alternating paths and cycles.

    Components are emitted in order of their smallest edge id; paths are
    walked from their endpoint with the smaller vertex index.
    """
    if m.graph is not n.graph and m.graph.edges.keys() != n.graph.edges.keys():
        raise MatchingError("matchings live on different graphs")
    g = m.graph
    diff = m.edges ^ n.edges
    at: dict[Vertex, list[int]] = {}
    for eid in diff:
        for x in g.edges[eid].ends:
            at.setdefault(x, []).append(eid)

    def walk(start: Vertex, first: int) -> tuple[list[int], list]:
        edges, verts = [first], [start]
        x = g.edges[first].other(start)
        prev = first
        while True:
            verts.append(x)
            nxt = [e for e in at[x] if e != prev]
            if not nxt or nxt[0] == first:
                return edges, verts
            prev = nxt[0]
            edges.append(prev)
            x = g.edges[prev].other(x)

    used: set[int] = set()
    comps: list[tuple[int, AltComponent]] = []
    ends = sorted((x for x, es in at.items() if len(es) == 1), key=g.index)
    for x in ends:
        eid = at[x][0]
        if eid in used:
            continue
        edges, verts = walk(x, eid)
        used.update(edges)
        comps.append((min(edges), AltComponent(
            "path", tuple(edges), tuple(verts), tuple(e in m.edges for e in edges))))
    for eid in sorted(diff - used):
        if eid in used:
            continue
        e = g.edges[eid]
        start = min(e.ends, key=g.index)
        edges, verts = walk(start, eid)
        used.update(edges)
        comps.append((min(edges), AltComponent(
            "cycle", tuple(edges), tuple(verts[:-1]), tuple(e in m.edges for e in edges))))
    comps.sort(key=lambda t: t[0])
    return [c for _, c in comps]


# -- weight normalisation -------------------------------------------------

@dataclass(frozen=True)
class Normalization:
    scale: Fraction
    shift: Fraction

    def forward(self, w) -> Fraction:
        return self.scale * Fraction(w) + self.shift

    def backward(self, w) -> Fraction:
        return (Fraction(w) - self.shift) / self.scale


def normalize_weights(g: Graph) -> tuple[Graph, Fraction, Fraction]:
    """Rescale to positive integer weights, ``w' = scale * w + shift``.

    ``scale`` is the lcm of the weight denominators.  A positive ``shift`` is
    added only when needed; it changes every matching of size ``k`` by
    ``k * shift`` and so is only sound for comparisons between matchings of
    equal cardinality (perfect against perfect).
    """
    weights = [e.weight for e in g.edges.values()]
    scale = Fraction(math.lcm(*(w.denominator for w in weights)) if weights else 1)
    shift = Fraction(0)
    if weights:
        low = min(weights) * scale
        if low < 1:
            shift = 1 - low
    out = g.with_weights({eid: scale * e.weight + shift for eid, e in g.edges.items()})
    return out, scale, shift


# -- text / JSON formats ----------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Read ``u v w`` lines (``w`` an integer or ``p/q``; omitted means 0).

    ``#`` starts a comment; a line with a single token declares an isolated
    vertex.  Vertices are ordered by first appearance.
    """
    order: list[str] = []
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) == 1:
            order.append(toks[0])
            continue
        if len(toks) > 3:
            raise GraphFormatError(f"expected 'u v weight', got {len(toks)} tokens", lineno)
        u, v = toks[0], toks[1]
        if u == v:
            raise GraphFormatError(f"self-loop at {u}", lineno)
        try:
            w = parse_rational(toks[2]) if len(toks) == 3 else Fraction(0)
        except (ValueError, ZeroDivisionError) as exc:
            raise GraphFormatError(str(exc), lineno) from None
        order.extend((u, v))
        triples.append((u, v, w))
    return Graph(order, triples)


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = []
    touched = set()
    for e in g.edges.values():
        touched.update(e.ends)
        lines.append(f"{e.u} {e.v} {format_rational(e.weight)}")
    for v in g.vertices:
        if v not in touched:
            lines.insert(0, str(v))
    return "\n".join(lines) + "\n"


def matching_to_json(m: Matching) -> list[list]:
    return [[str(u), str(v)] for u, v in m.pairs()]


def matching_from_pairs(g: Graph, pairs: Sequence[Sequence]) -> Matching:
    """Resolve endpoint pairs to edges; parallel edges resolve to the lowest id."""
    names = {str(v): v for v in g.vertices}
    chosen = []
    for pair in pairs:
        if len(pair) != 2:
            raise MatchingError(f"matching entry {pair!r} is not a vertex pair")
        try:
            u, v = names[str(pair[0])], names[str(pair[1])]
        except KeyError as exc:
            raise MatchingError(f"unknown vertex {exc.args[0]!r} in matching") from None
        between = g.edges_between(u, v)
        if not between:
            raise MatchingError(f"{u!r} and {v!r} are not adjacent")
        chosen.append(min(between))
    return Matching(g, chosen)


def read_matching(path, g: Graph) -> Matching:
    """Load a matching from JSON (pair list, or an object with ``matching``)
    or from text lines ``u v``."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith(("[", "{")):
        data = json.loads(text)
        if isinstance(data, dict):
            data = data["matching"]
        return matching_from_pairs(g, data)
    pairs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].split()
        if line:
            pairs.append(line[:2])
    return matching_from_pairs(g, pairs)
