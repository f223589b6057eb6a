"""Nested contraction bookkeeping: a laminar family of vertex sets with
half-integral potentials, tight-edge graphs and contracted views."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graph_core import Edge, Graph, HalfInt, Vertex, format_rational

log = logging.getLogger(__name__)


class LaminarError(ValueError):
    pass


@dataclass
class LaminarSet:
    id: int
    vertex: Vertex | None
    children: tuple[int, ...]
    potential: HalfInt
    parent: int | None = None

    @property
    def is_base(self) -> bool:
        return self.vertex is not None


class LaminarFamily:
    """Forest of sets.  Base sets ``{v}`` get ids ``0..n-1`` in vertex order;
    later sets get increasing ids and are never mutated, only removed."""

    def __init__(self, vertices: Iterable[Vertex]):
        self.vertices = tuple(vertices)
        self.sets: dict[int, LaminarSet] = {}
        self._base: dict[Vertex, int] = {}
        self._order = {v: i for i, v in enumerate(self.vertices)}
        self._flat: dict[int, frozenset] = {}
        self._next = 0
        for v in self.vertices:
            sid = self._new(v, (), HalfInt(0))
            self._base[v] = sid
        self.history: list[tuple[str, int]] = []

    def _new(self, vertex, children, potential) -> int:
        sid = self._next
        self._next += 1
        self.sets[sid] = LaminarSet(sid, vertex, tuple(children), potential)
        return sid

    def copy(self) -> "LaminarFamily":
        other = LaminarFamily.__new__(LaminarFamily)
        other.vertices = self.vertices
        other.sets = {k: LaminarSet(s.id, s.vertex, s.children, s.potential, s.parent)
                      for k, s in self.sets.items()}
        other._base = dict(self._base)
        other._order = self._order
        other._flat = dict(self._flat)
        other._next = self._next
        other.history = list(self.history)
        return other

    # -- structure -------------------------------------------------------
    def __getitem__(self, sid: int) -> LaminarSet:
        return self.sets[sid]

    def __contains__(self, sid: int) -> bool:
        return sid in self.sets

    def __len__(self) -> int:
        return len(self.sets)

    def base(self, v: Vertex) -> int:
        return self._base[v]

    def potential(self, sid: int) -> HalfInt:
        return self.sets[sid].potential

    def set_potential(self, sid: int, value: HalfInt) -> None:
        self.sets[sid].potential = value

    def flatten(self, sid: int) -> frozenset:
        """All base vertices nested in the set."""
        flat = self._flat.get(sid)
        if flat is None:
            s = self.sets[sid]
            if s.is_base:
                flat = frozenset((s.vertex,))
            else:
                flat = frozenset().union(*(self.flatten(c) for c in s.children))
            self._flat[sid] = flat
        return flat

    def _sort_key(self, sid: int):
        return min(self._order[v] for v in self.flatten(sid)), sid

    def maximal(self) -> list[int]:
        """Maximal sets, ordered by their first vertex."""
        return sorted((sid for sid, s in self.sets.items() if s.parent is None),
                      key=self._sort_key)

    def is_maximal(self, sid: int) -> bool:
        return self.sets[sid].parent is None

    def ancestors(self, v: Vertex) -> list[int]:
        """Sets containing ``v``, innermost first."""
        out = []
        sid: int | None = self._base[v]
        while sid is not None:
            out.append(sid)
            sid = self.sets[sid].parent
        return out

    def top(self, v: Vertex) -> int:
        return self.ancestors(v)[-1]

    def children(self, sid: int) -> list[int]:
        return sorted(self.sets[sid].children, key=self._sort_key)

    def depth(self) -> int:
        return max((len(self.ancestors(v)) for v in self.vertices), default=0)

    # -- mutation --------------------------------------------------------
    def contract(self, members: Iterable[int], potential: HalfInt | None = None) -> int:
        """New set whose elements are the given maximal sets."""
        members = list(dict.fromkeys(members))
        if not members:
            raise LaminarError("cannot contract an empty collection")
        seen: set = set()
        for sid in members:
            if sid not in self.sets:
                raise LaminarError(f"unknown set {sid}")
            if self.sets[sid].parent is not None:
                raise LaminarError(f"set {sid} is not maximal")
            flat = self.flatten(sid)
            if seen & flat:
                raise LaminarError("members overlap")
            seen |= flat
        new = self._new(None, members, potential if potential is not None else HalfInt(0))
        for sid in members:
            self.sets[sid].parent = new
        self.history.append(("contract", new))
        return new

    def replace(self, sid: int, potential: HalfInt) -> int:
        """Swap a maximal non-base set for a fresh one with the same elements.

        Used instead of wrapping a set in a one-element parent, which would
        make the nesting depth grow with the number of steps.
        """
        s = self.sets.get(sid)
        if s is None or s.is_base or s.parent is not None:
            raise LaminarError(f"set {sid} is not a maximal non-base set")
        new = self._new(None, s.children, potential)
        for c in s.children:
            self.sets[c].parent = new
        self._flat[new] = self.flatten(sid)
        del self.sets[sid]
        self._flat.pop(sid, None)
        self.history.append(("replace", new))
        return new

    def dissolve(self, sid: int) -> list[int]:
        """Remove a maximal non-base set of potential zero; returns its elements."""
        s = self.sets.get(sid)
        if s is None:
            raise LaminarError(f"unknown set {sid}")
        if s.is_base:
            raise LaminarError("base sets {v} cannot be dissolved")
        if s.parent is not None:
            raise LaminarError(f"set {sid} is not maximal")
        if s.potential.doubled != 0:
            raise LaminarError(f"set {sid} has nonzero potential {s.potential}")
        for c in s.children:
            self.sets[c].parent = None
        del self.sets[sid]
        self._flat.pop(sid, None)
        self.history.append(("dissolve", sid))
        return self.children_of_removed(s)

    def children_of_removed(self, s: LaminarSet) -> list[int]:
        return sorted(s.children, key=self._sort_key)

    # -- potentials and edges -------------------------------------------
    def energy(self, x: Vertex) -> HalfInt:
        """Sum of the potentials of all sets containing ``x``."""
        return HalfInt(sum(self.sets[s].potential.doubled for s in self.ancestors(x)))

    def load2(self, u: Vertex, v: Vertex) -> int:
        """Twice the potential sum over sets separating ``u`` from ``v``."""
        au, av = self.ancestors(u), self.ancestors(v)
        common = set(au) & set(av)
        return (sum(self.sets[s].potential.doubled for s in au if s not in common)
                + sum(self.sets[s].potential.doubled for s in av if s not in common))

    def load(self, e: Edge) -> Fraction:
        return Fraction(self.load2(e.u, e.v), 2)

    def boundary(self, sid: int, g: Graph) -> list[int]:
        """Edge ids with exactly one end in the flattened set."""
        flat = self.flatten(sid)
        return [e.id for e in g.edges.values() if (e.u in flat) != (e.v in flat)]

    # -- checks ----------------------------------------------------------
    def check_laminar(self) -> None:
        ids = list(self.sets)
        for k, a in enumerate(ids):
            fa = self.flatten(a)
            for b in ids[k + 1:]:
                fb = self.flatten(b)
                if fa & fb and not (fa <= fb or fb <= fa):
                    raise LaminarError(f"sets {a} and {b} cross")

    def check_partition(self) -> None:
        seen: set = set()
        for sid in self.maximal():
            flat = self.flatten(sid)
            if seen & flat:
                raise LaminarError("maximal sets overlap")
            seen |= flat
        if seen != set(self.vertices):
            raise LaminarError("maximal sets do not cover the vertex set")

    def check_nonnegative(self) -> list[int]:
        """Sets with at least three vertices and negative potential."""
        return [sid for sid, s in self.sets.items()
                if len(self.flatten(sid)) >= 3 and s.potential.doubled < 0]

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> list:
        def node(sid: int) -> dict:
            s = self.sets[sid]
            out: dict = {"potential": format_rational(s.potential.to_fraction())}
            if s.is_base:
                out["vertex"] = str(s.vertex)
            else:
                out["children"] = [node(c) for c in self.children(sid)]
            return out
        return [node(sid) for sid in self.maximal()]

    @classmethod
    def from_json(cls, data: list, vertices: Iterable[Vertex]) -> "LaminarFamily":
        fam = cls(vertices)
        names = {str(v): v for v in fam.vertices}

        def build(node: dict) -> int:
            pot = HalfInt.from_value(Fraction(node["potential"]))
            if "vertex" in node:
                try:
                    sid = fam._base[names[node["vertex"]]]
                except KeyError:
                    raise LaminarError(f"unknown vertex {node['vertex']!r}") from None
                fam.sets[sid].potential = pot
                return sid
            kids = [build(c) for c in node["children"]]
            return fam.contract(kids, pot)

        for node in data:
            build(node)
        fam.history.clear()
        fam.check_laminar()
        fam.check_partition()
        return fam


def flatten(fam: LaminarFamily, sid: int) -> frozenset:
    return fam.flatten(sid)


def boundary(fam: LaminarFamily, sid: int, g: Graph) -> list[int]:
    return fam.boundary(sid, g)


def energy(fam: LaminarFamily, x: Vertex) -> HalfInt:
    return fam.energy(x)


def tight_edges(g: Graph, fam: LaminarFamily) -> list[int]:
    """Edges whose separating potential sum equals their weight.

    Weights must be integers (or half-integers); comparison is exact.
    """
    out = []
    for e in g.edges.values():
        if Fraction(fam.load2(e.u, e.v)) == 2 * e.weight:
            out.append(e.id)
    return out


def tight_subgraph(g: Graph, fam: LaminarFamily) -> Graph:
    return g.edge_subgraph(tight_edges(g, fam))


def undersaturation_violations(g: Graph, fam: LaminarFamily) -> list[int]:
    return [e.id for e in g.edges.values() if Fraction(fam.load2(e.u, e.v)) > 2 * e.weight]


class ContractedView(Graph):
    """A graph on laminar-set ids whose edges are host edges (ids kept)
    running between distinct members."""

    def __init__(self, host: Graph, members: list[int], owner: dict[Vertex, int]):
        edges = []
        for e in host.edges.values():
            a, b = owner.get(e.u), owner.get(e.v)
            if a is None or b is None or a == b:
                continue
            edges.append(Edge(e.id, a, b, e.weight))
        super().__init__(members, edges)
        self.host = host
        self.owner = owner

    def host_endpoint(self, eid: int, member: int) -> Vertex:
        """The end of host edge ``eid`` lying inside ``member``."""
        e = self.host.edges[eid]
        return e.u if self.owner[e.u] == member else e.v


def contracted_view(g: Graph, fam: LaminarFamily, within: int | None = None) -> ContractedView:
    """The contracted graph on the maximal sets or, with ``within=U``, the graph
    on the elements of U.  ``g`` is normally the tight subgraph."""
    members = fam.maximal() if within is None else fam.children(within)
    owner = {v: sid for sid in members for v in fam.flatten(sid)}
    return ContractedView(g, members, owner)
