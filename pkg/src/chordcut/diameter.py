"""Diameter cutting of simple polygons with axis-parallel grid chords.

The grid has spacing delta and is anchored at the lower-left corner of the
polygon's bounding box, so results are translation invariant.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
import shapely
from shapely.geometry import box

from chordcut.errors import DegenerateBudget
from chordcut.geometry import Chord, Polygon, horizontal_chords, vertical_chords
from chordcut.solution import Solution, evaluate

log = logging.getLogger(__name__)

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


@dataclass
class GridCell:
    polygon: object  # shapely polygon: a component of P inside one strip
    strip: int
    full: bool


@dataclass
class GridCutState:
    delta: float
    axis: str
    origin: float
    chords_all: list
    chords_kept: list
    cells: list
    line_index: dict = field(default_factory=dict)  # id(chord) -> grid line index
    coincidences: int = 0

    @property
    def k(self) -> int:
        return len(self.chords_kept)

    def kept_indices(self) -> list:
        return [self.line_index[id(c)] for c in self.chords_kept]


def grid_lines(P: Polygon, delta: float, axis: str) -> tuple:
    """Origin and the indices i >= 1 of grid lines strictly inside the bounding box."""
    x0, y0, x1, y1 = P.bbox
    lo, hi = (x0, x1) if axis == VERTICAL else (y0, y1)
    count = math.ceil((hi - lo) / delta) - 1
    idx = [i for i in range(1, max(count, 0) + 2) if lo + i * delta < hi]
    return lo, idx


def _strip_box(P: Polygon, axis: str, a: float, b: float):
    x0, y0, x1, y1 = P.bbox
    pad = 1.0 + P.diameter
    if axis == VERTICAL:
        return box(a, y0 - pad, b, y1 + pad)
    return box(x0 - pad, a, x1 + pad, b)


def grid_prune(P: Polygon, delta: float, axis: str = VERTICAL) -> GridCutState:
    """Grid chords along one axis, keeping only those between two full-width cells."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    origin, idx = grid_lines(P, delta, axis)
    sp = P.to_shapely()
    tol = P.tau_snap * 10
    chords_all, line_index = [], {}
    coincidences = 0
    verts = [p for r in P.rings for p in r]
    for i in idx:
        c = origin + i * delta
        cs = vertical_chords(P, c) if axis == VERTICAL else horizontal_chords(P, c)
        for ch in cs:
            chords_all.append(ch)
            line_index[id(ch)] = i
        coord = 0 if axis == VERTICAL else 1
        coincidences += sum(1 for p in verts if p[coord] == c)
    # Cells: components of P within each strip between consecutive lines.
    bounds = [P.bbox[0 if axis == VERTICAL else 1]] + [origin + i * delta for i in idx] + [P.bbox[2 if axis == VERTICAL else 3]]
    cells = []
    coord_lo = 0 if axis == VERTICAL else 1
    for s, (a, b) in enumerate(zip(bounds, bounds[1:])):
        piece = sp.intersection(_strip_box(P, axis, a, b))
        for g in getattr(piece, "geoms", [piece]):
            if g.geom_type != "Polygon" or g.area <= 0:
                continue
            gb = g.bounds
            lo, hi = gb[coord_lo], gb[coord_lo + 2]
            full = abs(lo - a) <= tol and abs(hi - b) <= tol and abs((b - a) - delta) <= tol
            cells.append(GridCell(g, s, full))
    tree = shapely.STRtree([c.polygon for c in cells])
    kept = []
    for ch in chords_all:
        mx, my = ch.midpoint
        eps = 1e-6 * min(delta, ch.length)
        sides = [(mx - eps, my), (mx + eps, my)] if axis == VERTICAL else [(mx, my - eps), (mx, my + eps)]
        full_both = True
        for p in sides:
            pt = shapely.Point(p)
            hit = [j for j in tree.query(pt) if cells[j].polygon.covers(pt)]
            if not hit or not all(cells[j].full for j in hit):
                full_both = False
                break
        if full_both:
            kept.append(ch)
    return GridCutState(delta, axis, origin, chords_all, kept, cells, line_index, coincidences)


def lower_bound(kv: int, kh: int, P: Polygon, delta: float) -> int:
    """Certificate on the optimum laser count for diameter delta."""
    lb = 0
    if kv >= 1:
        lb = max(lb, kv + 1)
    if kh >= 1:
        lb = max(lb, kh + 1)
    if P.diameter > delta:
        lb = max(lb, 1)
    return lb


@dataclass
class BicriteriaResult:
    vertical: GridCutState
    horizontal: GridCutState

    @property
    def lasers(self) -> list:
        return list(self.vertical.chords_kept) + list(self.horizontal.chords_kept)

    @property
    def count(self) -> int:
        return self.vertical.k + self.horizontal.k


def bicriteria_state(P: Polygon, delta: float) -> BicriteriaResult:
    return BicriteriaResult(grid_prune(P, delta, VERTICAL), grid_prune(P, delta, HORIZONTAL))


def bicriteria_diameter(P: Polygon, delta: float) -> Solution:
    """Axis-parallel chords cutting P into pieces of x- and y-extent below 3 delta."""
    res = bicriteria_state(P, delta)
    kv, kh = res.vertical.k, res.horizontal.k
    stats = {
        "k_V": kv,
        "k_H": kh,
        "delta_used": delta,
        "lower_bound": lower_bound(kv, kh, P, delta),
        "grid_vertex_coincidences": res.vertical.coincidences + res.horizontal.coincidences,
        "diameter_bound": 3 * math.sqrt(2) * delta,
    }
    return evaluate(P, res.lasers, "diameter", algorithm="diameter-bicriteria", threshold=3 * math.sqrt(2) * delta,
                    stats=stats)


def parity_split(state: GridCutState) -> list:
    """The smaller of the even- and odd-indexed kept chords (even on ties)."""
    even = [c for c in state.chords_kept if state.line_index[id(c)] % 2 == 0]
    odd = [c for c in state.chords_kept if state.line_index[id(c)] % 2 == 1]
    return even if len(even) <= len(odd) else odd


def solve_k_laser_diameter(P: Polygon, k: int, epsilon: float = 0.1, *, floor_ratio: float = 1e-6) -> Solution:
    """At most k axis-parallel lasers minimizing the largest cell diameter (approximately)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    diam = P.diameter
    delta = diam
    res = bicriteria_state(P, delta)
    if res.count > 2 * k or k < 0:
        sol = evaluate(P, [], "diameter", algorithm="diameter-k-laser", budget=k,
                       stats={"delta0": diam}, flags=["degenerate-budget"])
        raise DegenerateBudget("even delta = diam(P) needs more than 2k lasers", solution=sol)
    flags = []
    steps = 0
    while True:
        nxt = delta / (1 + epsilon)
        if nxt < diam * floor_ratio:
            flags += ["resolution-floor", "degenerate-budget"]
            log.warning("delta search stopped at the resolution floor %.3g", nxt)
            break
        r2 = bicriteria_state(P, nxt)
        steps += 1
        if r2.count > 2 * k:
            break
        delta, res = nxt, r2
    cv = parity_split(res.vertical)
    ch = parity_split(res.horizontal)
    stats = {
        "delta0": delta,
        "steps": steps,
        "l_delta0": res.count,
        "k_V": len(cv),
        "k_H": len(ch),
        "diameter_bound": 4 * math.sqrt(2) * delta,
        "origin_x": res.vertical.origin,
        "origin_y": res.horizontal.origin,
        "epsilon": epsilon,
    }
    return evaluate(P, cv + ch, "diameter", algorithm="diameter-k-laser", budget=k, stats=stats, flags=flags)


def lines_met(cell_bounds: tuple, origin: float, delta: float, axis: str, tol: float) -> list:
    """Indices of grid lines passing strictly through the cell's projection."""
    lo, hi = (cell_bounds[0], cell_bounds[2]) if axis == VERTICAL else (cell_bounds[1], cell_bounds[3])
    i0 = math.floor((lo - origin) / delta) - 1
    i1 = math.ceil((hi - origin) / delta) + 1
    return [i for i in range(i0, i1 + 1) if lo + tol < origin + i * delta < hi - tol]
