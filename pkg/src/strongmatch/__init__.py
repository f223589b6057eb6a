"""Strongly maximal and strongly w-minimal matchings on finite graphs, with
exact certificates, plus a verifier for an irrational-weight path family."""

from .alternating import (find_finitely_improving_path, is_strongly_maximal,
                          is_strongly_w_maximal, maximum_matching)
from .gallai_edmonds import extend_to_strongly_maximal, gallai_edmonds, strongly_maximal_matching
from .graph_core import Edge, Graph, HalfInt, Matching, parse_edge_list, read_graph
from .primal_dual import DualCertificate, run, verify_certificate
from .reduction import strongly_w_maximal

__all__ = [
    "DualCertificate", "Edge", "Graph", "HalfInt", "Matching",
    "extend_to_strongly_maximal", "find_finitely_improving_path", "gallai_edmonds",
    "is_strongly_maximal", "is_strongly_w_maximal", "maximum_matching", "parse_edge_list",
    "read_graph", "run", "strongly_maximal_matching", "strongly_w_maximal", "verify_certificate",
]
__version__ = "0.1.0"
