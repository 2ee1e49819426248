"""Deciding whether a graph contracts to a grid or a path within k edge contractions."""

from .graph import Corners, Graph, WitnessMap, build_grid, from_edge_list, recognize_grid
from .bounded import SolveResult, solve_annotated, solve_bounded, solve_path
from .grid import solve
from .kernel import kernelize
from .oracle import brute_force_grid, verify_witness

__version__ = "0.1.0"

__all__ = [
    "Corners",
    "Graph",
    "WitnessMap",
    "build_grid",
    "from_edge_list",
    "recognize_grid",
    "SolveResult",
    "solve",
    "solve_annotated",
    "solve_bounded",
    "solve_path",
    "kernelize",
    "brute_force_grid",
    "verify_witness",
]
