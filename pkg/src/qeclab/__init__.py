"""Quadratic embedding constants of graphs and the matrices A_n(s, t)."""

__version__ = "0.1.0"

from .graphs import Graph, distance_matrix, parse_edge_list, path_graph
from .matrices import build_a, det_a, infinite_psd, is_psd_a, psd_threshold_t
from .numerics import RationalPoly, SymMatrix
from .polynomials import s_poly, t_threshold, w_poly
from .qec import qec_numeric, qec_path_bisection, qec_path_closed, qec_report

__all__ = [
    "Graph",
    "RationalPoly",
    "SymMatrix",
    "build_a",
    "det_a",
    "distance_matrix",
    "infinite_psd",
    "is_psd_a",
    "parse_edge_list",
    "path_graph",
    "psd_threshold_t",
    "qec_numeric",
    "qec_path_bisection",
    "qec_path_closed",
    "qec_report",
    "s_poly",
    "t_threshold",
    "w_poly",
]
