"""Geometric foundation: points, rings, polygons, chords and bounding boxes.

Predicates (orientation, point location) are sign-exact through
:mod:`chordcut.kernels`; constructed points (intersections) are rounded
floats, merged at the snapping tolerance ``1e-9 * diam(P)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from chordcut import kernels
from chordcut.errors import DegenerateSegment, InvalidPolygon, NotConvex, SegmentOutside

SNAP_RELATIVE = 1e-9


class Point(NamedTuple):
    x: float
    y: float


Ring = tuple  # tuple[Point, ...]


class Location(str, Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def orient(a, b, c) -> float:
    """Orientation of the triple (a, b, c); > 0 for a left turn."""
    return kernels.orient2d(a[0], a[1], b[0], b[1], c[0], c[1])


def signed_area(ring: Sequence) -> float:
    """Shoelace signed area; positive for counterclockwise rings."""
    n = len(ring)
    s = 0.0
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _as_point(p) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise InvalidPolygon(f"non-finite coordinate {p!r}")
    return Point(x, y)


@dataclass(frozen=True)
class Polygon:
    """A polygonal domain: counterclockwise outer ring, clockwise holes."""

    outer: tuple
    holes: tuple = ()

    @property
    def rings(self) -> tuple:
        return (self.outer,) + tuple(self.holes)

    @property
    def n(self) -> int:
        return sum(len(r) for r in self.rings)

    @cached_property
    def ring_arrays(self) -> list:
        return [np.asarray(r, dtype=float) for r in self.rings]

    @cached_property
    def edge_array(self) -> np.ndarray:
        segs = []
        for r in self.ring_arrays:
            segs.append(np.column_stack([r, np.roll(r, -1, axis=0)]))
        return np.vstack(segs)

    def edges(self) -> list:
        out = []
        for r in self.rings:
            m = len(r)
            out.extend((r[i], r[(i + 1) % m]) for i in range(m))
        return out

    @cached_property
    def bbox(self) -> tuple:
        a = self.ring_arrays[0]
        return (float(a[:, 0].min()), float(a[:, 1].min()), float(a[:, 0].max()), float(a[:, 1].max()))

    @cached_property
    def diameter(self) -> float:
        return polygon_diameter(self)

    @cached_property
    def area(self) -> float:
        return polygon_area(self)

    @property
    def tau_snap(self) -> float:
        return SNAP_RELATIVE * max(self.diameter, 1e-300)

    @cached_property
    def reflex_count(self) -> int:
        return len(reflex_vertices(self))

    def translated(self, dx: float, dy: float) -> "Polygon":
        return Polygon(
            tuple(Point(x + dx, y + dy) for x, y in self.outer),
            tuple(tuple(Point(x + dx, y + dy) for x, y in h) for h in self.holes),
        )

    def transformed(self, fn) -> "Polygon":
        """Apply a point map; the map must preserve orientation."""
        return Polygon(
            tuple(Point(*fn(p)) for p in self.outer),
            tuple(tuple(Point(*fn(p)) for p in h) for h in self.holes),
        )

    def scaled(self, s: float) -> "Polygon":
        return self.transformed(lambda p: (p[0] * s, p[1] * s))

    def to_shapely(self):
        import shapely.geometry as sg

        return sg.Polygon(self.outer, self.holes)


@dataclass(frozen=True)
class Chord:
    """A maximal segment of the polygon with endpoints on its boundary."""

    a: Point
    b: Point

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def midpoint(self) -> Point:
        return Point(0.5 * (self.a[0] + self.b[0]), 0.5 * (self.a[1] + self.b[1]))

    def as_tuple(self) -> tuple:
        return ((self.a[0], self.a[1]), (self.b[0], self.b[1]))

    def __iter__(self):
        return iter((self.a, self.b))

    def __getitem__(self, k):
        return (self.a, self.b)[k]

    def __len__(self) -> int:
        return 2

    def canonical(self) -> "Chord":
        """Same chord with endpoints in lexicographic order."""
        return self if tuple(self.a) <= tuple(self.b) else Chord(self.b, self.a)

    @property
    def is_vertical(self) -> bool:
        return self.a[0] == self.b[0]

    @property
    def is_horizontal(self) -> bool:
        return self.a[1] == self.b[1]


@dataclass(frozen=True)
class OrientedRect:
    """Rectangle with the long side along ``axis_angle``."""

    center: Point
    axis_angle: float
    width: float
    height: float

    @property
    def area(self) -> float:
        return self.width * self.height

    @property
    def axes(self) -> tuple:
        c, s = math.cos(self.axis_angle), math.sin(self.axis_angle)
        return (c, s), (-s, c)

    def corners(self) -> list:
        (ux, uy), (vx, vy) = self.axes
        cx, cy = self.center
        hw, hh = 0.5 * self.width, 0.5 * self.height
        return [
            Point(cx - hw * ux - hh * vx, cy - hw * uy - hh * vy),
            Point(cx + hw * ux - hh * vx, cy + hw * uy - hh * vy),
            Point(cx + hw * ux + hh * vx, cy + hw * uy + hh * vy),
            Point(cx - hw * ux + hh * vx, cy - hw * uy + hh * vy),
        ]


@dataclass
class NormalizationReport:
    merged_vertices: int = 0
    removed_collinear: int = 0
    reoriented_rings: int = 0
    notes: list = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.merged_vertices or self.removed_collinear or self.reoriented_rings)


# --------------------------------------------------------------------------
# construction and validation


def _clean_ring(pts: list, tol: float, report: NormalizationReport) -> list:
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        for p in pts:
            if out and math.hypot(p[0] - out[-1][0], p[1] - out[-1][1]) <= tol:
                report.merged_vertices += 1
                changed = True
                continue
            out.append(p)
        if len(out) > 1 and math.hypot(out[0][0] - out[-1][0], out[0][1] - out[-1][1]) <= tol:
            out.pop()
            report.merged_vertices += 1
            changed = True
        pts = out
        m = len(pts)
        if m < 3:
            break
        keep = []
        for i in range(m):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % m]
            if orient(a, b, c) == 0.0 or _dist_point_line(b, a, c) <= tol:
                # Collinear with its neighbours: drop it (only one per pass so
                # that its neighbours are re-tested against the new triple).
                report.removed_collinear += 1
                keep.extend(pts[i + 1 :])
                changed = True
                break
            keep.append(b)
        pts = keep
    return pts


def _dist_point_line(p, a, c) -> float:
    dx, dy = c[0] - a[0], c[1] - a[1]
    ll = math.hypot(dx, dy)
    if ll == 0.0:
        return math.hypot(p[0] - a[0], p[1] - a[1])
    return abs((p[0] - a[0]) * dy - (p[1] - a[1]) * dx) / ll


def make_polygon(outer: Iterable, holes: Iterable = (), *, normalize: bool = True, validate: bool = True):
    """Build a :class:`Polygon`, fixing orientation and (optionally) degeneracies.

    Returns the polygon alone; use :func:`normalize_polygon` to also get the
    report of what changed.
    """
    return normalize_polygon(outer, holes, normalize=normalize, validate=validate)[0]


def normalize_polygon(outer: Iterable, holes: Iterable = (), *, normalize: bool = True, validate: bool = True):
    report = NormalizationReport()
    raw_outer = [_as_point(p) for p in outer]
    raw_holes = [[_as_point(p) for p in h] for h in holes]
    allpts = raw_outer + [p for h in raw_holes for p in h]
    if len(raw_outer) < 3:
        raise InvalidPolygon("outer ring needs at least 3 vertices")
    arr = np.asarray(raw_outer, dtype=float)
    span = float(np.hypot(*(arr.max(axis=0) - arr.min(axis=0)))) if allpts else 0.0
    tol = SNAP_RELATIVE * span if normalize else 0.0
    rings = [raw_outer] + raw_holes
    cleaned = []
    for k, r in enumerate(rings):
        pts = _clean_ring(list(r), tol, report) if normalize else list(r)
        if len(pts) < 3:
            raise InvalidPolygon(f"ring {k} degenerates to fewer than 3 vertices")
        a = signed_area(pts)
        if a == 0.0:
            raise InvalidPolygon(f"ring {k} has zero area")
        want_ccw = k == 0
        if (a > 0) != want_ccw:
            pts = pts[::-1]
            report.reoriented_rings += 1
        cleaned.append(tuple(pts))
    poly = Polygon(cleaned[0], tuple(cleaned[1:]))
    if validate:
        validate_polygon(poly)
    return poly, report


def validate_polygon(P: Polygon) -> None:
    """Raise :class:`InvalidPolygon` unless all ring and hole invariants hold."""
    if signed_area(P.outer) <= 0:
        raise InvalidPolygon("outer ring must be counterclockwise")
    for h in P.holes:
        if signed_area(h) >= 0:
            raise InvalidPolygon("holes must be clockwise")
    for k, r in enumerate(P.rings):
        m = len(r)
        if m < 3:
            raise InvalidPolygon(f"ring {k} has fewer than 3 vertices")
        for i in range(m):
            if r[i] == r[(i + 1) % m]:
                raise InvalidPolygon(f"ring {k} repeats vertex {i}")
    # No contacts between non-adjacent edges (ring simplicity and ring disjointness).
    segs = P.edge_array
    owner = []
    for k, r in enumerate(P.rings):
        owner.extend((k, i, len(r)) for i in range(len(r)))
    for i, j, ti, tj in kernels.segment_intersections(segs, 0.0):
        ki, ii, mi = owner[i]
        kj, jj, _ = owner[j]
        if ki == kj:
            d = (ii - jj) % mi
            if d == 1 and ti == 0.0 and tj == 1.0:
                continue
            if d == mi - 1 and ti == 1.0 and tj == 0.0:
                continue
            raise InvalidPolygon(f"ring {ki} is not simple (edges {jj} and {ii} meet)")
        raise InvalidPolygon(f"rings {kj} and {ki} touch or cross")
    outer = P.ring_arrays[0]
    for k, h in enumerate(P.holes, start=1):
        if kernels.point_in_ring(h[0][0], h[0][1], outer) != 1:
            raise InvalidPolygon(f"hole {k} is not inside the outer ring")
        for k2, h2 in enumerate(P.holes, start=1):
            if k2 != k and kernels.point_in_ring(h[0][0], h[0][1], P.ring_arrays[k2]) != -1:
                raise InvalidPolygon(f"hole {k} lies inside hole {k2}")


# --------------------------------------------------------------------------
# measures


def polygon_area(P: Polygon) -> float:
    return signed_area(P.outer) + sum(signed_area(h) for h in P.holes)


def polygon_perimeter(P: Polygon) -> float:
    total = 0.0
    for r in P.rings:
        m = len(r)
        for i in range(m):
            total += math.hypot(r[(i + 1) % m][0] - r[i][0], r[(i + 1) % m][1] - r[i][1])
    return total


def points_diameter(points) -> float:
    """Largest pairwise distance, computed on the convex hull."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 2:
        return 0.0
    hull = np.asarray(convex_hull(pts), dtype=float) if len(pts) > 3 else pts
    d = hull[:, None, :] - hull[None, :, :]
    return float(np.sqrt((d * d).sum(axis=2)).max())


def polygon_diameter(P: Polygon) -> float:
    # Hole vertices never lie outside the hull of the outer ring.
    return points_diameter(P.outer)


# --------------------------------------------------------------------------
# hulls, convexity, reflex vertices


def convex_hull(points) -> tuple:
    """Strictly convex counterclockwise hull (Andrew's monotone chain)."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) <= 2:
        return tuple(Point(*p) for p in pts)

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and orient(h[-2], h[-1], p) <= 0:
                h.pop()
            h.append(p)
        return h

    lower = half(pts)
    upper = half(reversed(pts))
    return tuple(Point(*p) for p in lower[:-1] + upper[:-1])


def is_reflex(P: Polygon, index: int, ring: int = 0) -> bool:
    """True when the interior angle at the vertex exceeds pi."""
    r = P.rings[ring]
    m = len(r)
    return orient(r[index - 1], r[index], r[(index + 1) % m]) < 0


def reflex_vertices(P: Polygon, ring: int = 0) -> list:
    r = P.rings[ring]
    return [i for i in range(len(r)) if is_reflex(P, i, ring)]


def is_convex(P: Polygon) -> bool:
    return not P.holes and not reflex_vertices(P)


def point_in_polygon(P: Polygon, p) -> Location:
    arrays = P.ring_arrays
    loc = kernels.point_in_ring(float(p[0]), float(p[1]), arrays[0])
    if loc <= 0:
        return Location.BOUNDARY if loc == 0 else Location.OUTSIDE
    for h in arrays[1:]:
        lh = kernels.point_in_ring(float(p[0]), float(p[1]), h)
        if lh == 0:
            return Location.BOUNDARY
        if lh == 1:
            return Location.OUTSIDE
    return Location.INSIDE


def dist_to_boundary(P: Polygon, p) -> float:
    return float(kernels.min_dist_to_segments(np.array([p[0]]), np.array([p[1]]), P.edge_array)[0])


# --------------------------------------------------------------------------
# bounding boxes


def min_area_bounding_box(C: Polygon) -> OrientedRect:
    """Minimum-area enclosing rectangle with one side on a hull edge."""
    if not is_convex(C):
        raise NotConvex("min_area_bounding_box expects a convex polygon")
    return min_area_rect_of_points(C.outer)


def min_area_rect_of_points(points) -> OrientedRect:
    hull = np.asarray(convex_hull(points), dtype=float)
    if len(hull) < 3:
        raise NotConvex("degenerate point set")
    e = np.roll(hull, -1, axis=0) - hull
    ln = np.hypot(e[:, 0], e[:, 1])
    u = e / ln[:, None]
    v = np.column_stack([-u[:, 1], u[:, 0]])
    pu = hull @ u.T  # (points, candidates)
    pv = hull @ v.T
    w = pu.max(axis=0) - pu.min(axis=0)
    h = pv.max(axis=0) - pv.min(axis=0)
    areas = w * h
    k = int(np.argmin(areas))
    # Prefer the lowest edge index among numerically tied candidates.
    tied = np.nonzero(areas <= areas[k] * (1 + 1e-12))[0]
    k = int(tied[0])
    cu = 0.5 * (pu[:, k].max() + pu[:, k].min())
    cv = 0.5 * (pv[:, k].max() + pv[:, k].min())
    cx, cy = cu * u[k] + cv * v[k]
    center = Point(float(cx), float(cy))
    angle = float(math.atan2(u[k, 1], u[k, 0]))
    width, height = float(w[k]), float(h[k])
    if height > width:
        width, height = height, width
        angle += math.pi / 2
    return OrientedRect(center, angle, width, height)


# --------------------------------------------------------------------------
# lines and chords


def _line_events(P: Polygon, p, q):
    """Sorted boundary events (t, point) of the line p + t (q - p)."""
    px, py = float(p[0]), float(p[1])
    qx, qy = float(q[0]), float(q[1])
    dx, dy = qx - px, qy - py
    dd = dx * dx + dy * dy
    if dd == 0.0:
        raise DegenerateSegment("zero-length direction")
    ev = []
    for ring in P.rings:
        m = len(ring)
        o = [kernels.orient2d(px, py, qx, qy, v[0], v[1]) for v in ring]
        for i in range(m):
            u, v = ring[i], ring[(i + 1) % m]
            ou, ov = o[i], o[(i + 1) % m]
            if ou == 0.0:
                ev.append((((u[0] - px) * dx + (u[1] - py) * dy) / dd, Point(u[0], u[1])))
            if (ou > 0 and ov < 0) or (ou < 0 and ov > 0):
                ex, ey = v[0] - u[0], v[1] - u[1]
                den = dx * ey - dy * ex
                s = ((u[0] - px) * dy - (u[1] - py) * dx) / den
                s = min(max(s, 0.0), 1.0)
                ix, iy = u[0] + s * ex, u[1] + s * ey
                if ex == 0.0:
                    ix = u[0]
                if ey == 0.0:
                    iy = u[1]
                if dx == 0.0:
                    ix = px
                if dy == 0.0:
                    iy = py
                ev.append((((ix - px) * dx + (iy - py) * dy) / dd, Point(ix, iy)))
    ev.sort(key=lambda e: e[0])
    if not ev:
        return ev, px, py, dx, dy
    tol_t = P.tau_snap / math.sqrt(dd)
    uniq = [ev[0]]
    for e in ev[1:]:
        if e[0] - uniq[-1][0] > tol_t:
            uniq.append(e)
    return uniq, px, py, dx, dy


def _line_runs(P: Polygon, p, q):
    ev, px, py, dx, dy = _line_events(P, p, q)
    runs = []
    cur = None
    for (t0, a), (t1, b) in zip(ev, ev[1:]):
        tm = 0.5 * (t0 + t1)
        loc = point_in_polygon(P, (px + tm * dx, py + tm * dy))
        if loc is Location.INSIDE:
            if cur is None:
                cur = [t0, t1, a, b]
            else:
                cur[1], cur[3] = t1, b
        else:
            if cur is not None:
                runs.append(tuple(cur))
            cur = None
    if cur is not None:
        runs.append(tuple(cur))
    return runs


def line_intervals(P: Polygon, p, q) -> list:
    """Parameter intervals of the line p + t (q - p) whose interiors lie in int(P).

    Adjacent intervals that only touch the boundary at a single point are
    merged; an interval never runs along a boundary edge.
    """
    return [(r[0], r[1]) for r in _line_runs(P, p, q)]


def chords_on_line(P: Polygon, p, q) -> list:
    """Every chord of P lying on the line through p and q."""
    return [Chord(r[2], r[3]) for r in _line_runs(P, p, q)]


def vertical_chords(P: Polygon, x: float) -> list:
    x0, y0, x1, y1 = P.bbox
    pad = max(1.0, y1 - y0)
    return chords_on_line(P, (x, y0 - pad), (x, y1 + pad))


def horizontal_chords(P: Polygon, y: float) -> list:
    x0, y0, x1, y1 = P.bbox
    pad = max(1.0, x1 - x0)
    return chords_on_line(P, (x0 - pad, y), (x1 + pad, y))


def _snap_axis(chord: Chord, p, q) -> Chord:
    a, b = chord.a, chord.b
    if p[0] == q[0]:
        a, b = Point(p[0], a[1]), Point(p[0], b[1])
    elif p[1] == q[1]:
        a, b = Point(a[0], p[1]), Point(b[0], p[1])
    return Chord(a, b)


def extend_to_chord(P: Polygon, s) -> Chord:
    """The maximal chord of P containing the segment ``s = (a, b)``."""
    a, b = (float(s[0][0]), float(s[0][1])), (float(s[1][0]), float(s[1][1]))
    if a == b:
        raise DegenerateSegment("segment has zero length")
    tol_t = P.tau_snap / math.hypot(b[0] - a[0], b[1] - a[1])
    for t0, t1, pa, pb in _line_runs(P, a, b):
        if t0 <= tol_t and t1 >= 1 - tol_t:
            # Endpoints already on the boundary are kept verbatim, which
            # makes the extension exactly idempotent.
            if abs(t0) <= tol_t:
                pa = Point(*a)
            if abs(t1 - 1) <= tol_t:
                pb = Point(*b)
            return _snap_axis(Chord(pa, pb), a, b)
    raise SegmentOutside(f"segment {a}-{b} is not inside the polygon")


def is_chord(P: Polygon, c, tol: float | None = None) -> bool:
    """True when ``c`` is (within tolerance) a maximal chord of P."""
    tol = P.tau_snap * 10 if tol is None else tol
    try:
        ext = extend_to_chord(P, (c[0], c[1]))
    except (SegmentOutside, DegenerateSegment):
        return False
    a, b = c[0], c[1]
    return math.dist(ext.a, a) <= tol and math.dist(ext.b, b) <= tol


def segment_inside(P: Polygon, a, b) -> bool:
    """True when the open segment ab lies in int(P) (touching vertices allowed)."""
    if tuple(a) == tuple(b):
        return False
    tol_t = P.tau_snap / math.dist(a, b)
    return any(t0 <= tol_t and t1 >= 1 - tol_t for t0, t1 in line_intervals(P, a, b))


def ring_from_shapely(geom) -> list:
    """Convert a shapely Polygon (or MultiPolygon) into :class:`Polygon` objects."""
    import shapely.geometry as sg

    polys = []
    if geom.is_empty:
        return polys
    if isinstance(geom, sg.Polygon):
        geoms = [geom]
    else:
        geoms = [g for g in getattr(geom, "geoms", []) if isinstance(g, sg.Polygon)]
    for g in geoms:
        if g.area <= 0:
            continue
        outer = list(g.exterior.coords)[:-1]
        holes = [list(r.coords)[:-1] for r in g.interiors]
        try:
            polys.append(make_polygon(outer, holes))
        except InvalidPolygon:
            continue
    return polys
