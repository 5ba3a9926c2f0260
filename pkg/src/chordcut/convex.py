"""Area cutting of convex polygons with a grid aligned to the minimum bounding box."""

from __future__ import annotations

import math
from dataclasses import dataclass

from chordcut.errors import NotConvex
from chordcut.geometry import OrientedRect, Polygon, chords_on_line, is_convex, min_area_bounding_box, polygon_area
from chordcut.solution import Solution, evaluate


@dataclass
class ConvexAreaPlan:
    box: OrientedRect
    m: int
    lasers: list

    @property
    def grid_lines(self) -> int:
        return 2 * (self.m - 1)


def grid_order(box_area: float, delta: float) -> int:
    return max(1, math.ceil(math.sqrt(box_area / delta)))


def solve_convex_area(C: Polygon, delta: float) -> ConvexAreaPlan:
    """Cut C with ``m - 1`` grid lines parallel to each side of its minimum box.

    Each cell lies in one of the ``m**2`` congruent grid rectangles, whose area
    is ``area(box) / m**2 <= delta``.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if not is_convex(C):
        raise NotConvex("solve_convex_area needs a convex polygon")
    box = min_area_bounding_box(C)
    m = grid_order(box.area, delta)
    (ux, uy), (vx, vy) = box.axes
    cx, cy = box.center
    W, H = box.width, box.height
    lasers = []
    for side, (dx, dy, nx, ny, span, other) in enumerate(((vx, vy, ux, uy, W, H), (ux, uy, vx, vy, H, W))):
        # Lines parallel to (dx, dy), offset along (nx, ny).
        for i in range(1, m):
            s = -0.5 * span + i * span / m
            px, py = cx + s * nx, cy + s * ny
            p = (px - other * dx, py - other * dy)
            q = (px + other * dx, py + other * dy)
            for c in chords_on_line(C, p, q):
                if c.length > C.tau_snap:
                    lasers.append(c)
    return ConvexAreaPlan(box, m, lasers)


def cut_convex_area(C: Polygon, delta: float) -> Solution:
    plan = solve_convex_area(C, delta)
    return evaluate(
        C,
        plan.lasers,
        "area",
        algorithm="convex-grid",
        threshold=delta,
        stats={"m": plan.m, "box_area": plan.box.area, "lower_bound": lower_bound_convex_area(C, delta)},
    )


def max_cells(ell: int) -> int:
    """Most cells ``ell`` chords can create in a convex region."""
    return 1 + ell + ell * (ell - 1) // 2


def lower_bound_convex_area(C: Polygon | float, delta: float) -> int:
    """Smallest ell with ``max_cells(ell) * delta >= area(C)``."""
    area = C if isinstance(C, (int, float)) else polygon_area(C)
    need = area / delta * (1 - 1e-12)
    ell = 0
    while max_cells(ell) < need:
        ell += 1
    return ell
