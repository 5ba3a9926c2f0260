"""Cell complex induced by a set of lasers, and the three cell measures.

The arrangement is built by splitting every polygon edge and laser at all
contact points (merged at the snapping tolerance), linking the pieces into
half-edges, and tracing faces.  Cells of polygons with holes may have holes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from chordcut import kernels
from chordcut.errors import InvalidChord
from chordcut.geometry import Chord, Point, Polygon, is_chord, points_diameter, signed_area


class MeasureKind(str, Enum):
    AREA = "area"
    DIAMETER = "diameter"
    INRADIUS = "incircle"

    @classmethod
    def parse(cls, value) -> "MeasureKind":
        if isinstance(value, MeasureKind):
            return value
        v = str(value).lower()
        aliases = {"inradius": "incircle", "circle": "incircle", "diam": "diameter"}
        return cls(aliases.get(v, v))


@dataclass
class Cell:
    """One face of the arrangement (outer ring CCW, hole rings CW)."""

    boundary: Polygon

    @cached_property
    def area(self) -> float:
        b = self.boundary
        return signed_area(b.outer) + sum(signed_area(h) for h in b.holes)

    @cached_property
    def diameter(self) -> float:
        return points_diameter(self.boundary.outer)

    @cached_property
    def bbox(self) -> tuple:
        a = np.asarray(self.boundary.outer, dtype=float)
        return (float(a[:, 0].min()), float(a[:, 1].min()), float(a[:, 0].max()), float(a[:, 1].max()))

    def inradius(self, tau_r: float | None = None, delta: float | None = None) -> float:
        return largest_inscribed_disk(self.boundary, tau_r=tau_r, delta=delta)[0]

    def representative_point(self) -> Point:
        p = self.boundary.to_shapely().representative_point()
        return Point(p.x, p.y)


@dataclass
class Arrangement:
    polygon: Polygon
    lasers: list
    cells: list = field(default_factory=list)

    def measures(self, m: MeasureKind, **kw) -> list:
        return [cell_measure(c, m, **kw) for c in self.cells]


def as_chord(c) -> Chord:
    if isinstance(c, Chord):
        return c
    (ax, ay), (bx, by) = c
    return Chord(Point(float(ax), float(ay)), Point(float(bx), float(by)))


class _VertexIndex:
    """Point set with tolerance-based merging (uniform hash grid)."""

    def __init__(self, tol: float):
        self.tol = max(tol, 1e-300)
        self.cell = self.tol * 4.0
        self.points: list = []
        self.grid: dict = {}

    def add(self, x: float, y: float) -> int:
        gx, gy = math.floor(x / self.cell), math.floor(y / self.cell)
        best, bestd = -1, self.tol
        for ix in (gx - 1, gx, gx + 1):
            for iy in (gy - 1, gy, gy + 1):
                for vid in self.grid.get((ix, iy), ()):
                    px, py = self.points[vid]
                    d = math.hypot(px - x, py - y)
                    if d <= bestd:
                        best, bestd = vid, d
        if best >= 0:
            return best
        vid = len(self.points)
        self.points.append((x, y))
        self.grid.setdefault((gx, gy), []).append(vid)
        return vid


def decompose(P: Polygon, lasers: Sequence, *, validate: bool = True) -> Arrangement:
    """Cells of P cut by ``lasers`` (each a maximal chord of P)."""
    chords = [as_chord(c) for c in lasers]
    if validate:
        for i, c in enumerate(chords):
            if c.length <= P.tau_snap:
                raise InvalidChord(i, "zero-length laser")
            if not is_chord(P, c):
                raise InvalidChord(i, "not a maximal chord of the polygon")
    tau = P.tau_snap
    ring_segs = P.edge_array
    n_ring = len(ring_segs)
    if chords:
        lsegs = np.array([[c.a[0], c.a[1], c.b[0], c.b[1]] for c in chords], dtype=float)
        segs = np.vstack([ring_segs, lsegs])
    else:
        segs = ring_segs
    vidx = _VertexIndex(tau)
    # Ring vertices first so that they stay canonical.
    for x0, y0, _, _ in ring_segs:
        vidx.add(float(x0), float(y0))
    stops: list = [[(0.0, float(s[0]), float(s[1])), (1.0, float(s[2]), float(s[3]))] for s in segs]
    if chords:
        for i, j, ti, tj in kernels.segment_intersections(segs, tau, n_ring):
            if ti in (0.0, 1.0):
                x, y = (segs[i][0], segs[i][1]) if ti == 0.0 else (segs[i][2], segs[i][3])
            elif tj in (0.0, 1.0):
                x, y = (segs[j][0], segs[j][1]) if tj == 0.0 else (segs[j][2], segs[j][3])
            else:
                ax, ay, bx, by = segs[i]
                x, y = ax + ti * (bx - ax), ay + ti * (by - ay)
            stops[i].append((ti, float(x), float(y)))
            stops[j].append((tj, float(x), float(y)))
    # edge kinds: 1 = ring edge (interior on the left of u->v), 2 = laser.
    edges: dict = {}
    for k, st in enumerate(stops):
        st.sort(key=lambda s: s[0])
        ids = []
        for _, x, y in st:
            v = vidx.add(x, y)
            if not ids or ids[-1] != v:
                ids.append(v)
        kind = 1 if k < n_ring else 2
        for u, v in zip(ids, ids[1:]):
            if u == v:
                continue
            key = (u, v) if u < v else (v, u)
            if key in edges:
                if edges[key][0] == 1:
                    continue  # a laser along a boundary edge adds nothing
            edges[key] = (kind, u, v)
    cells = _trace_cells(vidx.points, edges)
    return Arrangement(P, chords, cells)


def _trace_cells(points: list, edges: dict) -> list:
    out_edges: dict = {}
    half = []  # (u, v, inside)
    for kind, u, v in edges.values():
        for a, b, inside in ((u, v, True), (v, u, kind == 2)):
            hid = len(half)
            half.append((a, b, inside))
            out_edges.setdefault(a, []).append(hid)
    pos = {}
    for v, lst in out_edges.items():
        px, py = points[v]
        lst.sort(key=lambda h: math.atan2(points[half[h][1]][1] - py, points[half[h][1]][0] - px))
        for k, h in enumerate(lst):
            pos[h] = k
    twin = {}
    lookup = {(a, b): h for h, (a, b, _) in enumerate(half)}
    for h, (a, b, _) in enumerate(half):
        twin[h] = lookup[(b, a)]
    seen = [False] * len(half)
    ccw, cw = [], []
    for h0 in range(len(half)):
        if seen[h0]:
            continue
        cyc = []
        h = h0
        inside_votes = 0
        while not seen[h]:
            seen[h] = True
            a, b, inside = half[h]
            cyc.append(a)
            inside_votes += 1 if inside else -1
            t = twin[h]
            lst = out_edges[b]
            h = lst[(pos[t] - 1) % len(lst)]
        if inside_votes <= 0:
            continue
        ring = [points[v] for v in cyc]
        area = signed_area(ring)
        if area > 0:
            ccw.append((area, ring))
        elif area < 0:
            cw.append(ring)
    faces = [(area, ring, np.asarray(ring, dtype=float), []) for area, ring in ccw]
    for ring in cw:
        x, y = ring[0]
        best = None
        for k, (area, _, arr, _) in enumerate(faces):
            if kernels.point_in_ring(x, y, arr) == 1 and (best is None or area < faces[best][0]):
                best = k
        if best is not None:
            faces[best][3].append(ring)
    cells = []
    for _, ring, _, holes in faces:
        outer = tuple(Point(*p) for p in ring)
        hs = tuple(tuple(Point(*p) for p in h) for h in holes)
        cells.append(Cell(Polygon(outer, hs)))
    return cells


# --------------------------------------------------------------------------
# measures


def largest_inscribed_disk(cell: Polygon, tau_r: float | None = None, delta: float | None = None):
    """Approximate largest inscribed disk: ``(radius, center)``.

    Samples the distance to the boundary on a grid of pitch
    ``min(0.05 diam, delta / 8)`` and refines the best samples with a shrinking
    stencil until the pitch drops below ``tau_r / 4``.  The returned radius is
    the exact boundary distance of the returned interior point, so the disk is
    always contained in the cell.
    """
    diam = points_diameter(cell.outer)
    if diam <= 0:
        return 0.0, Point(*cell.outer[0])
    if tau_r is None:
        tau_r = 1e-4 * diam
    h = 0.05 * diam
    if delta is not None and delta > 0:
        h = min(h, delta / 8.0)
    segs = cell.edge_array
    rings = cell.ring_arrays
    tol = 1e-12 * diam
    x0, y0 = rings[0].min(axis=0)
    x1, y1 = rings[0].max(axis=0)
    while True:
        xs = np.arange(x0 + 0.5 * h, x1, h)
        ys = np.arange(y0 + 0.5 * h, y1, h)
        if len(xs) == 0:
            xs = np.array([0.5 * (x0 + x1)])
        if len(ys) == 0:
            ys = np.array([0.5 * (y0 + y1)])
        gx, gy = np.meshgrid(xs, ys)
        gx, gy = gx.ravel(), gy.ravel()
        f = kernels.grid_distance_field(gx, gy, segs, rings, tol)
        if (f > 0).any() or h < tau_r / 4:
            break
        h *= 0.5
    if not (f > 0).any():
        return 0.0, Point(float(gx[0]), float(gy[0]))
    best = float(f.max())
    slack = h * math.sqrt(2) / 2
    order = np.argsort(-f)
    cand = [k for k in order[:64] if f[k] >= best - slack]
    cx = gx[cand].astype(float)
    cy = gy[cand].astype(float)
    cv = f[cand].astype(float)
    offs = np.arange(-2, 3, dtype=float)
    ox, oy = np.meshgrid(offs, offs)
    ox, oy = ox.ravel(), oy.ravel()
    hl = h
    while hl >= tau_r / 4:
        hl *= 0.5
        px = (cx[:, None] + hl * ox[None, :]).ravel()
        py = (cy[:, None] + hl * oy[None, :]).ravel()
        fv = kernels.grid_distance_field(px, py, segs, rings, tol).reshape(len(cx), -1)
        k = fv.argmax(axis=1)
        better = fv[np.arange(len(cx)), k] > cv
        cx = np.where(better, px.reshape(len(cx), -1)[np.arange(len(cx)), k], cx)
        cy = np.where(better, py.reshape(len(cx), -1)[np.arange(len(cx)), k], cy)
        cv = np.where(better, fv[np.arange(len(cx)), k], cv)
    j = int(np.argmax(cv))
    return float(cv[j]), Point(float(cx[j]), float(cy[j]))


def cell_measure(c, m, *, tau_r: float | None = None, delta: float | None = None) -> float:
    m = MeasureKind.parse(m)
    cell = c if isinstance(c, Cell) else Cell(c)
    if m is MeasureKind.AREA:
        return cell.area
    if m is MeasureKind.DIAMETER:
        return cell.diameter
    return cell.inradius(tau_r=tau_r, delta=delta)


def max_measure(P: Polygon, lasers: Sequence, m, *, tau_r: float | None = None, delta: float | None = None,
                validate: bool = True):
    """Worst cell value and its index (first index among ties)."""
    arr = decompose(P, lasers, validate=validate)
    vals = [cell_measure(c, m, tau_r=tau_r, delta=delta) for c in arr.cells]
    k = int(np.argmax(vals))
    return float(vals[k]), k
