"""Cut polygons into small cells with chords ("lasers").

The solvers take a :class:`Polygon` and a cell size bound (or a laser budget)
and return a :class:`Solution`, whose cells are measured by area, diameter or
in-circle radius.
"""

from chordcut.arrangement import MeasureKind, decompose
from chordcut.area import solve_min_laser_area
from chordcut.axis import solve_axis_area, solve_axis_diameter
from chordcut.circle import solve_min_laser_circle
from chordcut.convex import cut_convex_area
from chordcut.diameter import bicriteria_diameter, solve_k_laser_diameter
from chordcut.errors import ChordCutError, DegenerateBudget, ParseError, UnsupportedVariant
from chordcut.geometry import Chord, Point, Polygon, make_polygon
from chordcut.holes import bicriteria_holes, solve_k_laser_holes
from chordcut.io import read_polygon, render_svg, write_polygon, write_solution
from chordcut.oracle import exact_min_lasers, verify_solution
from chordcut.solution import Solution, evaluate

__version__ = "0.1.0"

__all__ = [
    "Chord",
    "ChordCutError",
    "DegenerateBudget",
    "MeasureKind",
    "ParseError",
    "Point",
    "Polygon",
    "Solution",
    "UnsupportedVariant",
    "bicriteria_diameter",
    "bicriteria_holes",
    "cut_convex_area",
    "decompose",
    "evaluate",
    "exact_min_lasers",
    "make_polygon",
    "read_polygon",
    "render_svg",
    "solve_axis_area",
    "solve_axis_diameter",
    "solve_k_laser_diameter",
    "solve_k_laser_holes",
    "solve_min_laser_area",
    "solve_min_laser_circle",
    "verify_solution",
    "write_polygon",
    "write_solution",
]
