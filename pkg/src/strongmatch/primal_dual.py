"""Primal-dual construction of strongly w-minimal (almost) perfect matchings
in complete graphs with positive integer weights.

Each step grows potentials on the even-reachable part of the contracted
tight graph, shrinks the components that are reachable with both parities,
dissolves odd-side sets whose potential drops back to zero and re-extends
the matching to maximum cardinality.  When at most one contracted vertex is
left exposed the laminar family is unfolded and the potentials are returned
as a certificate.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracle
from .alternating import even_reachable, find_finitely_improving_path, maximum_matching
from .gallai_edmonds import extend_to_strongly_maximal, strongly_maximal_matching
from .graph_core import HALF, Graph, HalfInt, Matching, Vertex, format_rational, matching_to_json
from .laminar import (ContractedView, LaminarFamily, contracted_view, tight_subgraph,
                      undersaturation_violations)

log = logging.getLogger(__name__)

EXHAUSTIVE_VIEW_LIMIT = 12


class StepCapExceeded(RuntimeError):
    """More potential updates than the largest edge weight: a bug."""


class InvariantViolation(AssertionError):
    pass


@dataclass
class StepState:
    index: int
    fam: LaminarFamily
    tight: Graph
    view: ContractedView
    matching: Matching


@dataclass
class Labeling:
    exposed: set
    odd: set
    even: set

    @property
    def odd_only(self) -> set:
        return self.odd - self.even


@dataclass
class PotentialUpdate:
    new_sets: list[int]
    odd_sets: list[int]
    dissolved: list[tuple[int, list[int]]]
    # new set -> the contracted-graph vertices it was formed from
    members: dict[int, list[int]] = field(default_factory=dict)


@dataclass
class StepRecord:
    index: int
    sets: int
    maximal: int
    exposed: int
    component_sizes: list[int]
    dissolved: int
    matching_size: int
    checks: int = 0


@dataclass
class VerificationResult:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class DualCertificate:
    family: LaminarFamily
    matching: Matching
    steps: int
    exposed: Vertex | None = None
    records: list[StepRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "exposed": None if self.exposed is None else str(self.exposed),
            "family": self.family.to_json(),
            "matching": matching_to_json(self.matching),
        }


# -- one step ---------------------------------------------------------------

def label(state: StepState) -> Labeling:
    """Even/odd alternating reachability from the exposed vertices of the view.

    With M of maximum cardinality the even-reachable vertices are the outer
    vertices of the alternating forest, and a matched vertex is odd-reachable
    exactly when its partner is even-reachable.
    """
    view, m = state.view, state.matching
    exposed = set(m.exposed())
    even = even_reachable(view, m)
    odd = {v for v in view.vertices if m.covers(v) and m.mate(v) in even}
    return Labeling(exposed, odd, even)


def find_blossom_components(state: StepState, lab: Labeling) -> list[list[int]]:
    """Components of the view minus the odd-only vertices that meet an even
    vertex; they coincide with the components spanned by the even vertices."""
    view = state.view
    outer = view.without(lab.odd_only).components()
    via_rest = [c for c in outer if any(v in lab.even for v in c)]
    via_even = view.induced(lab.even).components()
    if sorted(map(sorted, via_rest)) != sorted(map(sorted, via_even)):
        raise InvariantViolation("blossom components disagree between the two characterisations")
    return via_even


def update_potentials(state: StepState, lab: Labeling, comps: list[list[int]],
                      checker: "StepChecker | None" = None) -> PotentialUpdate:
    """Contract the components, raise them to 1/2, lower the odd-only sets by
    1/2 and dissolve odd-only sets (with at least two vertices) that hit 0."""
    fam = state.fam
    odd_sets = sorted(lab.odd_only, key=state.view.index)
    new_sets, members = [], {}
    for comp in comps:
        if len(comp) == 1 and not fam[comp[0]].is_base:
            # a lone contracted set keeps its elements; a wrapper would only add depth
            sid = fam.replace(comp[0], fam.potential(comp[0]) + HALF)
        else:
            sid = fam.contract(comp, HALF)
        new_sets.append(sid)
        members[sid] = list(comp)
    if checker is not None:
        checker.after_contraction(state, lab, new_sets, odd_sets)
    for sid in odd_sets:
        fam.set_potential(sid, fam.potential(sid) - HALF)
    dissolved = []
    for sid in odd_sets:
        s = fam[sid]
        if not s.is_base and len(fam.flatten(sid)) > 1 and s.potential.doubled == 0:
            kids = fam.children(sid)
            fam.dissolve(sid)
            dissolved.append((sid, kids))
    return PotentialUpdate(new_sets, odd_sets, dissolved, members)


def rebuild_matching(state: StepState, upd: PotentialUpdate, view: ContractedView) -> tuple[Matching, Matching]:
    """Carry the matching over, fill every dissolved set internally, then extend
    to maximum cardinality without uncovering anything.  Returns the filled
    matching and its extension."""
    carried = [e for e in state.matching.edges if e in view.edges]
    for eid in set(state.matching.edges).difference(carried):
        # only edges swallowed by a new set may drop out
        e = state.tight.edges[eid]
        if state.fam.top(e.u) != state.fam.top(e.v):
            raise InvariantViolation(f"matching edge {eid} lost its tightness")
    chosen = list(carried)
    carried_m = Matching(view, carried)
    for sid, kids in upd.dissolved:
        covered = [k for k in kids if carried_m.covers(k)]
        if len(covered) != 1:
            raise InvariantViolation(
                f"dissolved set {sid} has {len(covered)} externally matched elements")
        inner = view.induced(kids).without(covered)
        fill = maximum_matching(inner)
        if 2 * len(fill) != len(inner.vertices):
            raise InvariantViolation(f"elements of {sid} minus the matched one have no perfect matching")
        chosen.extend(fill.edges)
    filled = Matching(view, chosen)
    return filled, extend_to_strongly_maximal(view, filled)


# -- the whole procedure ---------------------------------------------------

def _check_input(g: Graph) -> int:
    for e in g.edges.values():
        if e.weight.denominator != 1 or e.weight <= 0:
            raise ValueError("weights must be positive integers; normalise first")
    if not g.is_complete():
        raise ValueError("graph must be complete; route other graphs through the reduction")
    return int(g.max_weight()) if g.edges else 0


def _state(index: int, g: Graph, fam: LaminarFamily, matching_edges=None) -> StepState:
    tight = tight_subgraph(g, fam)
    view = contracted_view(tight, fam)
    if matching_edges is None:
        m = strongly_maximal_matching(view)
    else:
        m = Matching(view, matching_edges)
    return StepState(index, fam, tight, view, m)


def run(g: Graph, *, check: bool = False) -> tuple[Matching, DualCertificate]:
    """Strongly w-minimal perfect (even order) or almost perfect (odd order)
    matching of a complete graph with positive integer weights."""
    cap = _check_input(g)
    fam = LaminarFamily(g.vertices)
    state = _state(0, g, fam)
    checker = StepChecker(g) if check else None
    never_matched = set(g.vertices)
    records: list[StepRecord] = []
    max_depth = 1
    while True:
        if checker is not None:
            checker.at_state(state, never_matched)
        never_matched = {x for x in never_matched if not state.matching.covers(fam.top(x))}
        exposed = state.matching.exposed()
        if len(exposed) <= 1:
            break
        if state.index >= cap:
            raise StepCapExceeded(f"still {len(exposed)} exposed after {cap} steps")
        lab = label(state)
        comps = find_blossom_components(state, lab)
        if checker is not None:
            checker.at_labeling(state, lab, comps)
        n_sets, n_max = len(fam), len(state.view.vertices)
        upd = update_potentials(state, lab, comps, checker)
        tight = tight_subgraph(g, fam)
        view = contracted_view(tight, fam)
        filled, m_next = rebuild_matching(state, upd, view)
        nxt = StepState(state.index + 1, fam, tight, view, m_next)
        rec = StepRecord(state.index, n_sets, n_max, len(exposed), [len(c) for c in comps],
                         len(upd.dissolved), len(state.matching))
        if checker is not None:
            checker.after_rebuild(state, upd, filled, nxt)
            rec.checks = checker.take_count()
        records.append(rec)
        max_depth = max(max_depth, fam.depth())
        state = nxt
    log.debug("finished after %d steps, laminar depth %d", state.index, max_depth)
    m, x = decontract(g, state)
    cert = DualCertificate(fam.copy(), m, state.index, x, records)
    return m, cert


def decontract(g: Graph, state: StepState) -> tuple[Matching, Vertex | None]:
    """Unfold the final matching on the contracted graph into a matching of G.

    Inside each set the element holding the externally matched vertex is
    left out of a perfect matching of the other elements, recursively.
    In the exposed set the held vertex is one of largest energy.
    """
    fam, tight, top = state.fam, state.tight, state.matching
    order = {v: i for i, v in enumerate(fam.vertices)}
    chosen: list[int] = list(top.edges)
    exposed: list[Vertex] = []

    def expand(sid: int, hold: Vertex, free: bool) -> None:
        if fam[sid].is_base:
            if free:
                exposed.append(hold)
            return
        h = contracted_view(tight, fam, within=sid)
        keep = h.owner[hold]
        inner = h.without([keep])
        fill = maximum_matching(inner)
        if 2 * len(fill) != len(inner.vertices):
            raise InvariantViolation(f"elements of set {sid} are not uniformly almost matchable")
        chosen.extend(fill.edges)
        for kid in h.vertices:
            if kid == keep:
                expand(kid, hold, free)
            else:
                expand(kid, h.host_endpoint(fill.edge_at(kid), kid), False)

    for sid in state.view.vertices:
        eid = top.edge_at(sid)
        if eid is not None:
            expand(sid, state.view.host_endpoint(eid, sid), False)
        else:
            flat = fam.flatten(sid)
            best = max(fam.energy(v).doubled for v in flat)
            hold = min((v for v in flat if fam.energy(v).doubled == best), key=order.get)
            expand(sid, hold, True)
    return Matching(g, chosen), (exposed[0] if exposed else None)


# -- certificate -----------------------------------------------------------

def verify_certificate(g: Graph, m: Matching, cert: DualCertificate) -> VerificationResult:
    """Recheck tightness of M, undersaturation of every edge, nonnegativity,
    the one-edge-per-boundary property and, for an almost perfect M, that the
    exposed vertex carries the maximum energy ``steps / 2``."""
    fam = cert.family
    bad: list[str] = []
    if set(fam.vertices) != set(g.vertices):
        return VerificationResult(False, ["family does not cover the graph's vertices"])
    try:
        fam.check_laminar()
        fam.check_partition()
    except ValueError as exc:
        bad.append(f"family: {exc}")
    if not (m.is_perfect() or m.is_almost_perfect()):
        bad.append(f"matching leaves {len(m.exposed())} vertices exposed")
    for eid in sorted(m.edges):
        e = g.edges[eid]
        if Fraction(fam.load2(e.u, e.v)) != 2 * e.weight:
            bad.append(f"tightness fails on matching edge {e.u}-{e.v}")
    for eid in undersaturation_violations(g, fam):
        e = g.edges[eid]
        bad.append(f"edge {e.u}-{e.v} oversaturated: load {format_rational(fam.load(e))} > {format_rational(e.weight)}")
    for sid in fam.check_nonnegative():
        bad.append(f"set {sid} with {len(fam.flatten(sid))} vertices has negative potential")
    for sid, s in fam.sets.items():
        size = len(fam.flatten(sid))
        if size == 2 and s.potential.doubled != 0:
            bad.append(f"two-vertex set {sid} carries potential")
    exposed = m.exposed()
    x = exposed[0] if len(exposed) == 1 else None
    for sid in fam.sets:
        flat = fam.flatten(sid)
        crossing = sum(1 for eid in m.edges if (g.edges[eid].u in flat) != (g.edges[eid].v in flat))
        want_zero = x is not None and x in flat
        if crossing > 1 or (crossing == 0) != want_zero:
            bad.append(f"set {sid} has {crossing} matching edges on its boundary")
    if x is not None:
        px = fam.energy(x)
        if px.doubled != cert.steps:
            bad.append(f"exposed vertex {x} has energy {px}, expected {format_rational(Fraction(cert.steps, 2))}")
        top = max(fam.energy(v).doubled for v in g.vertices)
        if px.doubled < top:
            bad.append(f"exposed vertex {x} does not have maximum energy")
    return VerificationResult(not bad, bad)


def certificate_from_json(data: dict, g: Graph) -> DualCertificate:
    from .graph_core import matching_from_pairs
    fam = LaminarFamily.from_json(data["family"], g.vertices)
    m = matching_from_pairs(g, data["matching"])
    names = {str(v): v for v in g.vertices}
    exposed = data.get("exposed")
    return DualCertificate(fam, m, int(data["steps"]), names.get(exposed) if exposed else None)


# -- per-step instrumentation ---------------------------------------------

class StepChecker:
    """Runtime assertions of the invariants the construction relies on.

    Brute-force parts use the oracle module; views larger than
    ``EXHAUSTIVE_VIEW_LIMIT`` fall back to the polynomial labelling.
    """

    def __init__(self, g: Graph):
        self.g = g
        self.count = 0
        self._uam_ok: set = set()
        self._connected_ok: set = set()

    def take_count(self) -> int:
        n, self.count = self.count, 0
        return n

    def _assert(self, cond: bool, what: str) -> None:
        self.count += 1
        if not cond:
            raise InvariantViolation(what)

    def _uam(self, h: Graph) -> bool:
        key = (tuple(h.vertices), frozenset(h.edges))
        if key not in self._uam_ok:
            if not oracle.is_uniformly_almost_matchable(h):
                return False
            self._uam_ok.add(key)
        return True

    def at_state(self, state: StepState, never_matched: set) -> None:
        fam, view, m, g = state.fam, state.view, state.matching, self.g
        i = state.index
        fam.check_laminar()
        fam.check_partition()
        self._assert(not fam.check_nonnegative(), f"step {i}: negative potential on a large set")
        self._assert(not undersaturation_violations(g, fam), f"step {i}: oversaturated edge")
        for sid, s in fam.sets.items():
            flat = fam.flatten(sid)
            self._assert(len(flat) != 2, f"step {i}: two-vertex set {sid}")
            if s.is_base:
                continue
            h = contracted_view(state.tight, fam, within=sid)
            self._assert(self._uam(h), f"step {i}: elements of set {sid} not uniformly almost matchable")
            key = (sid, frozenset(e for e in state.tight.edges.values() if e.u in flat and e.v in flat))
            if key not in self._connected_ok:
                self._assert(state.tight.induced(flat).is_connected(),
                             f"step {i}: tight graph inside set {sid} is disconnected")
                self._connected_ok.add(key)
        self._assert(find_finitely_improving_path(view, m) is None,
                     f"step {i}: matching is not strongly maximal in the view")
        for x in never_matched:
            self._assert(fam.energy(x).doubled == i, f"step {i}: energy of never-matched {x} is {fam.energy(x)}")
        for sid in m.exposed():
            inside = [x for x in never_matched if x in fam.flatten(sid)]
            self._assert(len(inside) == 1, f"step {i}: exposed set {sid} holds {len(inside)} never-matched vertices")

    def at_labeling(self, state: StepState, lab: Labeling, comps: list[list[int]]) -> None:
        view, m, i = state.view, state.matching, state.index
        self._assert(lab.exposed <= lab.even, f"step {i}: exposed vertex not even-reachable")
        for v in lab.even:
            self._assert(all(u in lab.even or u in lab.odd for u in view.neighbors(v)),
                         f"step {i}: neighbour of an even vertex is unlabelled")
        if len(view.vertices) <= EXHAUSTIVE_VIEW_LIMIT:
            odd, even = oracle.alternating_reach(view, m, lab.exposed)
            self._assert(odd == lab.odd and even == lab.even,
                         f"step {i}: labelling differs from path enumeration")
        for comp in comps:
            cs = set(comp)
            self._assert(self._uam(view.induced(comp)), f"step {i}: component {comp} not uniformly almost matchable")
            crossing = [e for e in m.edges if (view.edges[e].u in cs) != (view.edges[e].v in cs)]
            meets_x = bool(cs & lab.exposed)
            self._assert(len(crossing) == (0 if meets_x else 1),
                         f"step {i}: component {comp} has {len(crossing)} matching edges leaving it")
            if meets_x:
                (dom,) = cs & lab.exposed
            else:
                e = view.edges[crossing[0]]
                dom = e.u if e.u in cs else e.v
            _, even = oracle.alternating_reach(view, m, [dom], within=comp)
            self._assert(cs <= even, f"step {i}: {dom} does not dominate component {comp}")

    def after_contraction(self, state: StepState, lab: Labeling, new_sets: list[int], odd_sets: list[int]) -> None:
        i = state.index
        star = contracted_view(state.tight, state.fam)
        m_star = Matching(star, [e for e in state.matching.edges if e in star.edges])
        exposed = m_star.exposed()
        if len(star.vertices) <= EXHAUSTIVE_VIEW_LIMIT:
            odd, even = oracle.alternating_reach(star, m_star, exposed)
        else:
            even = even_reachable(star, m_star)
            odd = {v for v in star.vertices if m_star.covers(v) and m_star.mate(v) in even}
        self._assert(odd == set(odd_sets), f"step {i}: odd set after contraction differs from the odd-only vertices")
        self._assert(even == set(new_sets), f"step {i}: even set after contraction differs from the new sets")

    def after_rebuild(self, prev: StepState, upd: PotentialUpdate, filled: Matching, nxt: StepState) -> None:
        i = prev.index
        self._assert(filled.support() <= nxt.matching.support(), f"step {i}: support of the filled matching not kept")
        fresh = set(upd.new_sets)
        for sid in nxt.matching.exposed():
            self._assert(sid in fresh, f"step {i + 1}: exposed vertex {sid} is not a new set")
            unmatched = [k for k in upd.members[sid] if not prev.matching.covers(k)]
            self._assert(len(unmatched) == 1,
                         f"step {i + 1}: exposed set {sid} has {len(unmatched)} elements exposed before")
