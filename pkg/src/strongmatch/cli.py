"""Command-line entry point: ``strongmatch <command> ...``.

JSON goes to stdout, diagnostics to stderr.  Exit status: 0 success or
certified, 1 refuted (a witness is printed), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys

from . import counterexample as cx
from . import oracle
from .alternating import find_finitely_improving_path, is_strongly_w_maximal
from .gallai_edmonds import gallai_edmonds
from .graph_core import (Graph, GraphFormatError, MatchingError, format_rational,
                         matching_to_json, normalize_weights, read_graph, read_matching)
from .primal_dual import certificate_from_json, run, verify_certificate
from .reduction import complete_and_negate, solve_max

log = logging.getLogger("strongmatch")

OK, REFUTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(data) -> None:
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _solver_instance(g: Graph, objective: str) -> Graph:
    """The positive-integer complete graph the procedure actually runs on."""
    if objective == "max":
        positive = g.edge_subgraph(eid for eid, e in g.edges.items() if e.weight > 0)
        g = complete_and_negate(positive)[0]
    return normalize_weights(g)[0]


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    if args.objective == "max":
        res = solve_max(g)
        m, cert, scale, shift = res.matching, res.certificate, res.scale, res.shift
    else:
        if not g.is_complete():
            raise UsageError("min-perfect needs a complete graph")
        h, scale, shift = normalize_weights(g)
        m_h, cert = run(h)
        m = type(m_h)(g, m_h.edges)
    certificate = cert.to_json()
    certificate.update(objective=args.objective, scale=format_rational(scale),
                       shift=format_rational(shift))
    _emit({"objective": args.objective, "matching": matching_to_json(m),
           "weight": format_rational(m.weight()), "steps": cert.steps,
           "certificate": certificate})
    return OK


def cmd_check(args) -> int:
    g = read_graph(args.graph)
    m = read_matching(args.matching, g)
    if args.weighted:
        imp = is_strongly_w_maximal(g, m)
        if imp is None:
            _emit({"certified": True, "weight": format_rational(m.weight())})
            return OK
        _emit(imp.to_json())
        return REFUTED
    path = find_finitely_improving_path(g, m)
    if path is None:
        _emit({"certified": True, "size": len(m)})
        return OK
    _emit({"certified": False, "improving_path": [str(v) for v in path.vertices],
           "classification": path.classification.value})
    return REFUTED


def cmd_decompose(args) -> int:
    _emit(gallai_edmonds(read_graph(args.graph)).to_json())
    return OK


def cmd_verify(args) -> int:
    g = read_graph(args.graph)
    data = _load_json(args.certificate)
    if "certificate" in data:
        data = data["certificate"]
    objective = data.get("objective", "min-perfect")
    if objective not in ("min-perfect", "max"):
        raise UsageError(f"unknown objective {objective!r}")
    h = _solver_instance(g, objective)
    cert = certificate_from_json(data, h)
    result = verify_certificate(h, cert.matching, cert)
    _emit({"verified": result.ok, "violations": result.violations})
    return OK if result.ok else REFUTED


def cmd_counterexample(args) -> int:
    depth = args.depth
    data = None
    if args.action == "improve":
        if not args.matching:
            raise UsageError("counterexample improve needs --matching")
        data = _load_json(args.matching)
        depth = int(data.get("depth", depth))
    try:
        prefix = cx.build_prefix(depth, args.truncation)
    except cx.EdgeBudgetExceeded as exc:
        raise UsageError(f"{exc} (raise {cx.BUDGET_ENV} to allow more)") from None
    if data is None:
        report = cx.verify_inequalities(prefix)
        _emit(report.to_json())
        return OK if report.all_hold else REFUTED
    try:
        m = cx.matching_from_json(prefix, data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed prefix matching: {exc}") from None
    witness = cx.demonstrate_improvement(prefix, m)
    out = witness.to_json()
    out["note_prefix"] = cx.PREFIX_NOTE
    _emit(out)
    return OK


def cmd_oracle(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        n = args.random
        lines = [f"v{i} v{j} {rng.randint(1, args.max_weight)}"
                 for i in range(n) for j in range(i + 1, n)]
        sys.stdout.write("\n".join(lines) + "\n")
        return OK
    if not args.graph:
        raise UsageError("oracle needs --graph or --random")
    g = read_graph(args.graph)
    if args.task == "count":
        _emit({"matchings": oracle.count_matchings(g)})
        return OK
    m = oracle.min_weight_perfect(g) if args.task == "min-perfect" else oracle.max_weight_matching(g)
    _emit({"matching": matching_to_json(m), "weight": format_rational(m.weight())})
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="strongmatch", description="Strongly maximal and strongly w-minimal matchings with exact certificates.")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized generation")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("solve", help="strongly w-minimal perfect or w-maximal matching with certificate")
    s.add_argument("--graph", required=True)
    s.add_argument("--objective", choices=["min-perfect", "max"], default="min-perfect")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("check", help="certify a matching or print an improving witness")
    s.add_argument("--graph", required=True)
    s.add_argument("--matching", required=True)
    s.add_argument("--weighted", action="store_true", help="check strong w-maximality")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("decompose", help="Gallai-Edmonds decomposition")
    s.add_argument("--graph", required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="recheck a certificate emitted by solve")
    s.add_argument("--graph", required=True)
    s.add_argument("--certificate", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("counterexample", help="irrational-weight path family on a finite prefix")
    s.add_argument("action", nargs="?", choices=["report", "improve"], default="report")
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--truncation", type=int, default=None, help="series terms used to bracket a")
    s.add_argument("--matching", help="prefix matching JSON for 'improve'")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("oracle")
    s.add_argument("--graph")
    s.add_argument("--task", choices=["min-perfect", "max", "count"], default="min-perfect")
    s.add_argument("--random", type=int, default=0, metavar="N", help="print a random K_N edge list")
    s.add_argument("--max-weight", type=int, default=10)
    s.set_defaults(func=cmd_oracle)
    # keep the debugging command out of the help listing
    sub._choices_actions = [a for a in sub._choices_actions if a.dest != "oracle"]
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {args.graph}: {exc}", file=sys.stderr)
    except MatchingError as exc:
        print(f"error: matching: {exc}", file=sys.stderr)
    except (OSError, UsageError, ValueError, cx.UndecidableInequality) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
