"""Axis-parallel laser cutting of simple polygons.

The polygon is first split by a window partition into pseudo-histograms
(histograms with small pockets on their sides); every axis-parallel chord
meets at most three of them.  Each piece is then solved on its own: a
top-down sweep for diameter, and an exact dynamic program over a discrete
candidate set for area.  Pieces are handled in a local frame in which the
base is horizontal and the piece lies above it.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import shapely
from shapely.geometry import LineString, box
from shapely.ops import unary_union

from chordcut.arrangement import decompose
from chordcut.errors import ChordCutError
from chordcut.geometry import (
    Chord,
    Location,
    Point,
    Polygon,
    extend_to_chord,
    horizontal_chords,
    make_polygon,
    point_in_polygon,
    points_diameter,
    reflex_vertices,
    ring_from_shapely,
    vertical_chords,
)
from chordcut.solution import Solution, dedupe_chords, evaluate

log = logging.getLogger(__name__)

AREA = "area"
DIAMETER = "diameter"


# --------------------------------------------------------------------------
# local frames: exact maps sending a base to a horizontal segment below the piece


@dataclass(frozen=True)
class Frame:
    kind: str  # "up", "down", "right", "left": side of the base the piece lies on

    def fwd(self, p) -> Point:
        x, y = float(p[0]), float(p[1])
        if self.kind == "up":
            return Point(x, y)
        if self.kind == "down":
            return Point(x, -y)
        if self.kind == "right":
            return Point(y, x)
        return Point(y, -x)

    def inv(self, p) -> Point:
        x, y = float(p[0]), float(p[1])
        if self.kind == "up":
            return Point(x, y)
        if self.kind == "down":
            return Point(x, -y)
        if self.kind == "right":
            return Point(y, x)
        return Point(-y, x)

    @property
    def reflects(self) -> bool:
        return self.kind in ("down", "right")

    def _poly(self, P: Polygon, fn) -> Polygon:
        rings = [tuple(fn(p) for p in r) for r in P.rings]
        if self.reflects:
            rings = [tuple(reversed(r)) for r in rings]
        return Polygon(rings[0], tuple(rings[1:]))

    def polygon(self, P: Polygon) -> Polygon:
        return self._poly(P, self.fwd)

    def polygon_inv(self, P: Polygon) -> Polygon:
        return self._poly(P, self.inv)

    def chord(self, c) -> Chord:
        return Chord(self.fwd(c[0]), self.fwd(c[1]))

    def chord_inv(self, c) -> Chord:
        return Chord(self.inv(c[0]), self.inv(c[1]))


def _is_horizontal(c, tol: float) -> bool:
    return abs(c[0][1] - c[1][1]) <= tol


def frame_for(Q: Polygon, base, tol: float) -> Frame:
    """The frame in which ``base`` is horizontal with Q above it."""
    (ax, ay), (bx, by) = base
    mx, my = 0.5 * (ax + bx), 0.5 * (ay + by)
    e = max(1e-7 * Q.diameter, 10 * tol)
    if _is_horizontal(base, tol):
        return Frame("up" if point_in_polygon(Q, (mx, my + e)) == Location.INSIDE else "down")
    return Frame("right" if point_in_polygon(Q, (mx + e, my)) == Location.INSIDE else "left")


def _base_span(base: Chord) -> tuple:
    (ax, ay), (bx, by) = base
    return min(ax, bx), max(ax, bx), 0.5 * (ay + by)


def _vchord_at(P: Polygon, x: float, y: float, tol: float) -> Optional[Chord]:
    for c in vertical_chords(P, x):
        lo, hi = sorted((c.a[1], c.b[1]))
        if lo - tol <= y <= hi + tol:
            return c
    return None


def _hchord_at(P: Polygon, x: float, y: float, tol: float) -> Optional[Chord]:
    for c in horizontal_chords(P, y):
        lo, hi = sorted((c.a[0], c.b[0]))
        if lo - tol <= x <= hi + tol:
            return c
    return None


def size_of(P: Polygon, measure: str) -> float:
    return P.area if measure == AREA else points_diameter(P.outer)


def _from_shapely(g) -> Optional[Polygon]:
    polys = ring_from_shapely(shapely.normalize(g))
    if not polys:
        return None
    return max(polys, key=lambda q: q.area)


# --------------------------------------------------------------------------
# window partition


def maximal_histogram(Q: Polygon, base, tol: float) -> Polygon:
    """Points of Q reachable from ``base`` along segments orthogonal to it.

    Q must be given in a frame where the base is horizontal and Q lies above
    it.  Between consecutive vertex abscissae the ceiling above the base is a
    single edge, so the histogram is a union of exact trapezoids.
    """
    bx0, bx1, yb = _base_span(base)
    xs = sorted({p[0] for p in Q.outer if bx0 < p[0] < bx1} | {bx0, bx1})
    edges = [(p, q) for p, q in Q.edges() if p[0] != q[0]]
    tops = []
    for xa, xb in zip(xs, xs[1:]):
        if xb - xa <= tol:
            continue
        xm = 0.5 * (xa + xb)
        best = None
        for p, q in edges:
            lo, hi = (p, q) if p[0] < q[0] else (q, p)
            if lo[0] < xm < hi[0]:
                y = lo[1] + (hi[1] - lo[1]) * (xm - lo[0]) / (hi[0] - lo[0])
                if y > yb + tol and (best is None or y < best[0]):
                    best = (y, lo, hi)
        if best is None:
            continue
        _, lo, hi = best

        def at(x, lo=lo, hi=hi):
            if x == lo[0]:
                return lo[1]
            if x == hi[0]:
                return hi[1]
            return lo[1] + (hi[1] - lo[1]) * (x - lo[0]) / (hi[0] - lo[0])

        tops.append((xa, at(xa), xb, at(xb)))
    ring = [(bx0, yb), (bx1, yb)]
    for xa, ya, xb, yb_top in reversed(tops):
        ring.append((xb, yb_top))
        ring.append((xa, ya))
    clean = []
    for p in ring:
        if not clean or math.dist(p, clean[-1]) > tol:
            clean.append(p)
    if len(clean) > 1 and math.dist(clean[0], clean[-1]) <= tol:
        clean.pop()
    return make_polygon(clean)


@dataclass
class WindowNode:
    region: Polygon  # Q_v, world coordinates
    base: Chord  # b_v, world coordinates
    parent: Optional[int]
    depth: int
    histogram: Optional[Polygon] = None  # H_v (None when size(Q_v) <= threshold)
    children: list = field(default_factory=list)


@dataclass
class PseudoHistogram:
    polygon: Polygon  # P_u, world coordinates
    histogram: Polygon  # H_u
    base: Chord  # b_u
    pockets: list  # components of P_u minus H_u
    lids: list  # windows where the pockets attach
    node: int


@dataclass
class WindowPartition:
    polygon: Polygon
    seed: Chord
    measure: str
    delta: float
    nodes: list
    roots: list
    selected: list
    pieces: list  # PseudoHistogram
    leftovers: list  # root regions of size <= delta, bounded by the seed chord

    @property
    def histograms(self) -> list:
        return [(n.histogram, n.base) for n in self.nodes if n.histogram is not None]

    @property
    def bases(self) -> list:
        out = [self.seed]
        for u in self.selected:
            if self.nodes[u].parent is not None:
                out.append(self.nodes[u].base)
        return out

    def piece_regions(self) -> list:
        return [p.polygon for p in self.pieces] + list(self.leftovers)


def seed_chord(P: Polygon) -> Chord:
    """Deterministic axis-parallel seed chord.

    The horizontal chord through the midpoint of the longest vertical chord
    on the bounding-box center column; if that fails, the horizontal chord
    at the lowest-leftmost reflex vertex; if there is none, the longest
    center-column chord itself.
    """
    x0, y0, x1, y1 = P.bbox
    tol = P.tau_snap
    cols = vertical_chords(P, 0.5 * (x0 + x1))
    if cols:
        v = max(cols, key=lambda c: c.length)
        mx, my = v.midpoint
        h = _hchord_at(P, mx, my, tol)
        if h is not None and h.length > tol:
            return h
    rv = reflex_vertices(P)
    if rv:
        r = min((P.outer[i] for i in rv), key=lambda p: (p[1], p[0]))
        h = _hchord_at(P, r[0], r[1], tol)
        if h is not None and h.length > tol:
            return h
    return max(cols, key=lambda c: c.length)


def _window_of(Qi, H, x_hint: Optional[float], tol: float):
    """The vertical window (in the local frame) shared by Qi and H."""
    shared = Qi.boundary.intersection(H.boundary)
    pieces = []
    for g in getattr(shared, "geoms", [shared]):
        if g.geom_type in ("LineString", "LinearRing") and g.length > tol:
            pieces.append(g)
        elif g.geom_type == "MultiLineString":
            pieces.extend(x for x in g.geoms if x.length > tol)
    groups: dict = {}
    for g in pieces:
        for (x0, y0), (x1, y1) in zip(g.coords, list(g.coords)[1:]):
            if abs(x1 - x0) <= 10 * tol and abs(y1 - y0) > tol:
                key = next((k for k in groups if abs(k - x0) <= 10 * tol), x0)
                groups.setdefault(key, []).extend([y0, y1])
    if not groups:
        return None
    x = max(groups, key=lambda k: max(groups[k]) - min(groups[k]))
    ys = groups[x]
    return Chord(Point(x, min(ys)), Point(x, max(ys)))


def _snap_to_line(g: Polygon, x: float, tol: float) -> Polygon:
    def fix(r):
        return [(x if abs(p[0] - x) <= 10 * tol else p[0], p[1]) for p in r]

    return make_polygon(fix(g.outer), [fix(h) for h in g.holes])


def window_partition(P: Polygon, delta: float, measure: str = AREA, seed: Optional[Chord] = None,
                     max_nodes: int = 100_000) -> WindowPartition:
    """Window partition of P into histograms, stopped at pieces of size <= delta."""
    measure = DIAMETER if str(measure).startswith("diam") else AREA
    tol = P.tau_snap
    b = seed if seed is not None else seed_chord(P)
    b = Chord(Point(*b[0]), Point(*b[1]))
    halves = decompose(P, [b], validate=False).cells
    nodes: list = []
    stack = []
    for cell in halves:
        nodes.append(WindowNode(cell.boundary, b, None, 0))
        stack.append(len(nodes) - 1)
    roots = list(stack)
    while stack:
        v = stack.pop()
        node = nodes[v]
        if size_of(node.region, measure) <= delta or len(nodes) >= max_nodes:
            continue
        fr = frame_for(node.region, node.base, tol)
        Qf = fr.polygon(node.region)
        bf = fr.chord(node.base)
        Hf = maximal_histogram(Qf, bf, tol)
        node.histogram = fr.polygon_inv(Hf)
        Hs = Hf.to_shapely()
        rest = Qf.to_shapely().difference(Hs)
        area_tol = 1e-9 * Qf.diameter ** 2
        for g in getattr(rest, "geoms", [rest]):
            if g.geom_type != "Polygon" or g.area <= area_tol:
                continue
            w = _window_of(g, Hs, None, tol)
            if w is None:
                continue
            Qi = _from_shapely(g)
            if Qi is None:
                continue
            Qi = _snap_to_line(Qi, w.a[0], tol)
            nodes.append(WindowNode(fr.polygon_inv(Qi), fr.chord_inv(w), v, node.depth + 1))
            node.children.append(len(nodes) - 1)
            stack.append(len(nodes) - 1)
    selected, pieces, leftovers = _select(nodes, roots, delta, measure, tol)
    return WindowPartition(P, b, measure, delta, nodes, roots, selected, pieces, leftovers)


def _select(nodes, roots, delta, measure, tol):
    """Bottom-up choice of pseudo-histograms: size > delta, every pocket <= delta."""
    residual: dict = {}
    selected, pieces, leftovers = [], [], []

    def post(v):
        for c in nodes[v].children:
            post(c)
        node = nodes[v]
        if node.histogram is None:
            residual[v] = node.region.to_shapely()
            return
        kids = [c for c in node.children if residual[c] is not None]
        geom = unary_union([node.histogram.to_shapely()] + [residual[c] for c in kids])
        region = _from_shapely(geom)
        if region is not None and size_of(region, measure) > delta:
            selected.append(v)
            pockets = [_from_shapely(residual[c]) for c in kids]
            pieces.append(PseudoHistogram(region, node.histogram, node.base,
                                          [p for p in pockets if p is not None],
                                          [nodes[c].base for c in kids], v))
            residual[v] = None
        else:
            residual[v] = geom

    for r in roots:
        post(r)
        if residual[r] is not None:
            g = _from_shapely(residual[r])
            if g is not None:
                leftovers.append(g)
    return selected, pieces, leftovers


# --------------------------------------------------------------------------
# diameter: top-down sweep in a pseudo-histogram


@dataclass
class SweepStats:
    phase1: int = 0
    horizontal: int = 0
    vertical: int = 0  # verticals at the endpoints p, q of Phase-2 horizontals
    lid: int = 0  # verticals along pocket lids crossed by a Phase-2 horizontal
    events: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"phase1": self.phase1, "phase2_h": self.horizontal, "phase2_v": self.vertical,
                "phase2_lid": self.lid, "events": list(self.events)}


def phase1_count(base_length: float, delta: float) -> int:
    """Number of Phase-1 verticals: ceil(2|ab|/delta) - 1."""
    r = 2.0 * base_length / delta
    m = round(r) if abs(r - round(r)) <= 1e-9 * max(1.0, r) else math.ceil(r)
    return max(int(m) - 1, 0)


def _moving_slope(P: Polygon, lasers: list, v, tol: float) -> float:
    """dx/dy of the boundary piece carrying a cell vertex that lies on the sweep line."""
    for c in lasers:
        if abs(c.a[0] - c.b[0]) <= tol and abs(c.a[0] - v[0]) <= 10 * tol:
            lo, hi = sorted((c.a[1], c.b[1]))
            if lo - 10 * tol <= v[1] <= hi + 10 * tol:
                return 0.0
    best, bd = 0.0, math.inf
    for p, q in P.edges():
        dy = q[1] - p[1]
        if abs(dy) <= tol:
            continue
        lo, hi = sorted((p[1], q[1]))
        if not (lo - 10 * tol <= v[1] <= hi + 10 * tol):
            continue
        x = p[0] + (q[0] - p[0]) * (v[1] - p[1]) / dy
        d = abs(x - v[0])
        if d < bd:
            best, bd = (q[0] - p[0]) / dy, d
    return best


def _quad_roots(a: float, b: float, c: float) -> list:
    if abs(a) < 1e-300:
        return [] if abs(b) < 1e-300 else [-c / b]
    disc = b * b - 4 * a * c
    if disc < 0:
        if disc > -1e-12 * (b * b + abs(4 * a * c)):
            disc = 0.0
        else:
            return []
    s = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(s, b))
    roots = [q / a]
    if q != 0:
        roots.append(c / q)
    return roots


def _active_cells(P: Polygon, lasers: list, y: float, tol: float):
    lines = horizontal_chords(P, y)
    arr = decompose(P, list(lasers) + lines, validate=False)
    out = []
    for cell in arr.cells:
        ring = cell.boundary.outer
        ys = [p[1] for p in ring]
        if min(ys) < y - tol or min(ys) > y + tol:
            continue
        out.append(ring)
    return out


def _interval_event(P: Polygon, lasers: list, y_lo: float, y_hi: float, delta: float, tol: float, fresh: bool):
    """Highest y in [y_lo, y_hi] where a cell above the sweep line reaches diameter delta."""
    y_mid = 0.5 * (y_lo + y_hi)
    t_lo, t_hi = y_lo - y_mid, y_hi - y_mid
    best = None
    for ring in _active_cells(P, lasers, y_mid, tol):
        fixed = [p for p in ring if p[1] > y_mid + tol]
        moving = [(p[0], _moving_slope(P, lasers, p, tol)) for p in ring if abs(p[1] - y_mid) <= tol]
        # bottom intervals: consecutive ring vertices both on the line
        on = [abs(p[1] - y_mid) <= tol for p in ring]
        bottoms = []
        for i in range(len(ring)):
            j = (i + 1) % len(ring)
            if on[i] and on[j]:
                si = _moving_slope(P, lasers, ring[i], tol)
                sj = _moving_slope(P, lasers, ring[j], tol)
                bottoms.append(((ring[i][0], si), (ring[j][0], sj)))

        def dist_at(t):
            pts = [(x + s * t, y_mid + t) for x, s in moving] + list(fixed)
            return points_diameter(pts) if len(pts) > 1 else 0.0

        top = dist_at(t_hi)
        if top > delta * (1 + 1e-12) and not fresh:
            cand = y_hi
        else:
            cand = None
            pairs = []
            for (x1, s1), (x2, s2) in itertools.combinations(moving, 2):
                dx0, ds = x1 - x2, s1 - s2
                pairs.append((ds * ds, 2 * dx0 * ds, dx0 * dx0 - delta * delta))
            for x1, s1 in moving:
                for fx, fy in fixed:
                    dx0, dy0 = x1 - fx, y_mid - fy
                    pairs.append((s1 * s1 + 1, 2 * (dx0 * s1 + dy0), dx0 * dx0 + dy0 * dy0 - delta * delta))
            eps_t = 1e-12 * max(1.0, abs(y_mid))
            hi_lim = t_hi - (tol if fresh else 0.0)
            for a, b, c in pairs:
                for t in _quad_roots(a, b, c):
                    if t_lo - eps_t <= t <= hi_lim + eps_t:
                        t = min(max(t, t_lo), t_hi)
                        y = y_mid + t
                        if cand is None or y > cand:
                            cand = y
        if cand is not None and (best is None or cand > best[0] + tol):
            best = (cand, [(bottoms, y_mid)])
        elif cand is not None and abs(cand - best[0]) <= tol:
            best[1].append((bottoms, y_mid))
    return best


def pseudo_histogram_diameter(Pf: Polygon, base: Chord, delta: float, lids: Sequence = (), *,
                              max_events: int = 100_000):
    """Sweep a pseudo-histogram (local frame: base horizontal, piece above).

    Returns ``(lasers, stats)``; lasers are chords of ``Pf``.
    """
    tol = Pf.tau_snap
    stats = SweepStats()
    if Pf.diameter <= delta:
        return [], stats
    a, b, yb = _base_span(base)
    lasers: list = []
    k = phase1_count(b - a, delta)
    for i in range(1, k + 1):
        x = a + i * delta / 2
        c = _vchord_at(Pf, x, yb + 10 * tol, tol)
        if c is not None:
            lasers.append(c)
    stats.phase1 = k
    ys = sorted({p[1] for p in Pf.outer})
    y_bottom, y_cur = ys[0], ys[-1]
    last_event = None
    eta = 1e-9 * Pf.diameter
    lid_list = [Chord(Point(*l[0]), Point(*l[1])) for l in lids]
    while y_cur > y_bottom + tol and len(stats.events) < max_events:
        bps = set(ys) | {c.a[1] for c in lasers} | {c.b[1] for c in lasers}
        y_lo = max((y for y in bps if y < y_cur - tol), default=y_bottom)
        ev = _interval_event(Pf, lasers, y_lo, y_cur, delta, tol, fresh=(last_event == y_cur))
        if ev is None:
            y_cur = y_lo
            continue
        y_star, groups = ev
        stats.events.append(y_star)
        t = None
        for bottoms, y_mid in groups:
            t = y_star - y_mid
            for (x1, s1), (x2, s2) in bottoms:
                xl, xr = sorted((x1 + s1 * t, x2 + s2 * t))
                hs = [_hchord_at(Pf, 0.5 * (xl + xr), y_star, tol)]
                if hs[0] is None:
                    # the bottom runs along a boundary edge at y_star; cut where it is still interior
                    hs = [c for c in horizontal_chords(Pf, y_star)
                          if min(xr, max(c.a[0], c.b[0])) - max(xl, min(c.a[0], c.b[0])) > tol]
                for h in hs:
                    if h is None or h.length <= tol or any(_same(h, c, tol) for c in lasers):
                        continue
                    lasers.append(h)
                    stats.horizontal += 1
                    for e in (h.a, h.b):
                        v = _vchord_at(Pf, e[0], y_star - eta, 0.0)
                        if v is not None and v.length > tol and not any(_same(v, c, tol) for c in lasers):
                            lo, hi = sorted((v.a[1], v.b[1]))
                            if lo < y_star - eta < hi:
                                lasers.append(v)
                                stats.vertical += 1
                    hx0, hx1 = sorted((h.a[0], h.b[0]))
                    for lid in lid_list:
                        w = lid.a[0]
                        l0, l1 = sorted((lid.a[1], lid.b[1]))
                        if abs(lid.a[0] - lid.b[0]) <= tol and hx0 + tol < w < hx1 - tol and l0 - tol <= y_star <= l1 + tol:
                            v = _vchord_at(Pf, w, 0.5 * (l0 + l1), tol)
                            if v is not None and not any(_same(v, c, tol) for c in lasers):
                                lasers.append(v)
                                stats.lid += 1
        last_event = y_star
        y_cur = y_star
    return lasers, stats


def _same(c, d, tol: float) -> bool:
    return (math.dist(c[0], d[0]) <= 10 * tol and math.dist(c[1], d[1]) <= 10 * tol) or (
        math.dist(c[0], d[1]) <= 10 * tol and math.dist(c[1], d[0]) <= 10 * tol)


def histogram_diameter_sweep(H: Polygon, base: Chord, delta: float):
    """Sweep of a histogram given in world coordinates; lasers are chords of H."""
    tol = H.tau_snap
    fr = frame_for(H, base, tol)
    lasers, stats = pseudo_histogram_diameter(fr.polygon(H), fr.chord(base), delta)
    return [fr.chord_inv(c) for c in lasers], stats


def _diameter_repair(P: Polygon, chords: list, delta: float, max_rounds: int = 200):
    """Split any cell still wider than delta through the middle of its longer side."""
    chords = list(chords)
    added = 0
    tol = P.tau_snap
    for _ in range(max_rounds):
        big = [c for c in decompose(P, chords, validate=False).cells if c.diameter > delta * (1 + 1e-9)]
        if not big:
            break
        progress = False
        for cell in big:
            sp = cell.boundary.to_shapely()
            x0, y0, x1, y1 = sp.bounds
            if x1 - x0 >= y1 - y0:
                x = 0.5 * (x0 + x1)
                seg = sp.intersection(LineString([(x, y0 - 1), (x, y1 + 1)]))
            else:
                y = 0.5 * (y0 + y1)
                seg = sp.intersection(LineString([(x0 - 1, y), (x1 + 1, y)]))
            parts = [g for g in getattr(seg, "geoms", [seg]) if g.geom_type == "LineString" and g.length > tol]
            if not parts:
                continue
            g = max(parts, key=lambda g: g.length)
            (ax, ay), (bx, by) = g.coords[0], g.coords[-1]
            try:
                c = extend_to_chord(P, ((ax, ay), (bx, by)))
            except ChordCutError:
                continue
            chords.append(c)
            added += 1
            progress = True
        chords = dedupe_chords(chords, 10 * tol)
        if not progress:
            break
    return chords, added


def _extend_all(P: Polygon, chords: Sequence) -> list:
    out = []
    for c in chords:
        try:
            out.append(extend_to_chord(P, c))
        except ChordCutError:
            log.debug("dropping chord %s that is not inside P", c)
    return dedupe_chords(out, 10 * P.tau_snap)


def solve_axis_diameter(P: Polygon, delta: float, seed: Optional[Chord] = None) -> Solution:
    """Axis-parallel lasers cutting a simple polygon into pieces of diameter <= delta."""
    if P.holes:
        raise ChordCutError("solve_axis_diameter expects a simple polygon")
    if P.diameter <= delta:
        return evaluate(P, [], "diameter", algorithm="axis-sweep", threshold=delta, stats={"pieces": 0})
    wp = window_partition(P, delta, DIAMETER, seed)
    chords = list(wp.bases)
    totals = SweepStats()
    for piece in wp.pieces:
        tol = piece.polygon.tau_snap
        fr = frame_for(piece.polygon, piece.base, tol)
        lids = [fr.chord(l) for l in piece.lids]
        ls, st = pseudo_histogram_diameter(fr.polygon(piece.polygon), fr.chord(piece.base), delta, lids)
        chords.extend(fr.chord_inv(c) for c in ls)
        totals.phase1 += st.phase1
        totals.horizontal += st.horizontal
        totals.vertical += st.vertical
        totals.lid += st.lid
    chords = _extend_all(P, chords)
    chords, repaired = _diameter_repair(P, chords, delta)
    stats = totals.as_dict()
    stats.pop("events")
    stats.update({"pieces": len(wp.pieces), "bases": len(wp.bases), "repair_lasers": repaired,
                  "window_nodes": len(wp.nodes)})
    return evaluate(P, chords, "diameter", algorithm="axis-sweep", threshold=delta, stats=stats)


# --------------------------------------------------------------------------
# candidate chords


@dataclass
class CandidateSet:
    vertical: list
    horizontal: list
    provenance: dict  # index into vertical + horizontal -> "vertex" | "raster" | "trapezoid-fill"

    @property
    def chords(self) -> list:
        return list(self.vertical) + list(self.horizontal)

    def __len__(self) -> int:
        return len(self.vertical) + len(self.horizontal)

    def count(self, kind: str) -> int:
        return sum(1 for v in self.provenance.values() if v == kind)


def _vertex_chords(P: Polygon, tol: float):
    vs, hs = [], []
    for v in P.outer:
        for c in vertical_chords(P, v[0]):
            top = c.a if c.a[1] > c.b[1] else c.b
            if math.dist(top, v) <= 10 * tol:
                vs.append(c)
        for c in horizontal_chords(P, v[1]):
            if math.dist(c.a, v) <= 10 * tol or math.dist(c.b, v) <= 10 * tol:
                hs.append(c)
    return dedupe_chords(vs, 10 * tol), dedupe_chords(hs, 10 * tol)


def _fill(P: Polygon, cut: list, delta: float, vertical: bool, tol: float) -> list:
    out = []
    for cell in decompose(P, cut, validate=False).cells:
        x0, y0, x1, y1 = cell.bbox
        w, h = x1 - x0, y1 - y0
        A = w * h
        if A <= delta * (1 + 1e-12):
            continue
        m = math.ceil(A / delta - 1e-12) - 1
        sp = cell.boundary.to_shapely()
        for i in range(1, m + 1):
            if vertical:
                x = x0 + i * w / (m + 1)
                seg = sp.intersection(LineString([(x, y0 - 1), (x, y1 + 1)]))
            else:
                y = y0 + i * h / (m + 1)
                seg = sp.intersection(LineString([(x0 - 1, y), (x1 + 1, y)]))
            parts = [g for g in getattr(seg, "geoms", [seg]) if g.geom_type == "LineString" and g.length > tol]
            for g in parts:
                (mx, my) = g.interpolate(0.5, normalized=True).coords[0]
                c = _vchord_at(P, x, my, tol) if vertical else _hchord_at(P, mx, y, tol)
                if c is not None:
                    out.append(c)
    return out


def candidate_chords(P: Polygon, delta: float, measure: str = AREA, origin: Optional[tuple] = None) -> CandidateSet:
    """Discrete candidate lasers for a (pseudo-)histogram.

    Vertex chords (vertical chords topped by a vertex, horizontal chords
    ending at a vertex) plus, for area, evenly spaced fill chords in every
    trapezoid whose bounding box is larger than delta, and for diameter, the
    chords on the raster of spacing delta/sqrt(2) anchored at ``origin``
    (default: the bounding-box minimum).
    """
    tol = P.tau_snap
    vs, hs = _vertex_chords(P, tol)
    prov_v = ["vertex"] * len(vs)
    prov_h = ["vertex"] * len(hs)
    if str(measure).startswith("diam"):
        x0, y0, x1, y1 = P.bbox
        ox, oy = origin if origin is not None else (x0, y0)
        step = delta / math.sqrt(2)
        extra_v, extra_h = [], []
        i = math.floor((x0 - ox) / step)
        while ox + i * step < x1:
            extra_v.extend(vertical_chords(P, ox + i * step))
            i += 1
        j = math.floor((y0 - oy) / step)
        while oy + j * step < y1:
            extra_h.extend(horizontal_chords(P, oy + j * step))
            j += 1
        kind = "raster"
    else:
        extra_v = _fill(P, vs, delta, True, tol)
        extra_h = _fill(P, hs, delta, False, tol)
        kind = "trapezoid-fill"
    V = dedupe_chords(vs + extra_v, 10 * tol)
    H = dedupe_chords(hs + extra_h, 10 * tol)
    prov = {}
    for i, c in enumerate(V):
        prov[i] = "vertex" if any(_same(c, d, tol) for d in vs) else kind
    for j, c in enumerate(H):
        prov[len(V) + j] = "vertex" if any(_same(c, d, tol) for d in hs) else kind
    return CandidateSet(V, H, prov)


# --------------------------------------------------------------------------
# area: exact dynamic program over candidate chords in a pseudo-histogram


@dataclass(frozen=True)
class DpSubproblem:
    """Key of the left-to-right program.

    ``v_left`` is the index of the last placed vertical (-1 for the left
    end), ``h_active`` the chosen horizontals crossing it, ``k_v`` the number
    of verticals still to place to its right.
    """

    v_left: int
    h_active: frozenset
    k_v: int


@dataclass
class DpResult:
    f: dict  # k_v -> minimum number of horizontal lasers
    witnesses: dict  # k_v -> (vertical indices, horizontal indices)
    verticals: list
    horizontals: list
    states: int
    exact: bool = True

    def best(self) -> tuple:
        k = min(self.f, key=lambda kv: (kv + self.f[kv], kv))
        vi, hi = self.witnesses[k]
        return k, self.f[k], [self.verticals[i] for i in vi] + [self.horizontals[j] for j in hi]


class _DpTooLarge(Exception):
    pass


def _bottom_edge(Pf: Polygon, tol: float) -> Optional[Chord]:
    """The lowest edge when it spans the whole bounding box width."""
    x0, y0, x1, _ = Pf.bbox
    for p, q in Pf.edges():
        if abs(p[1] - y0) <= tol and abs(q[1] - y0) <= tol and abs(abs(p[0] - q[0]) - (x1 - x0)) <= tol:
            return Chord(Point(x0, y0), Point(x1, y0))
    return None


def _is_histogram(Pf: Polygon, base: Optional[Chord], tol: float) -> bool:
    if base is None or Pf.holes:
        return False
    try:
        Hh = maximal_histogram(Pf, base, tol)
    except ChordCutError:
        return False
    return abs(Hh.area - Pf.area) <= 1e-9 * Pf.area


def dp_min_laser_area(Pf: Polygon, C: CandidateSet, delta: float, base: Optional[Chord] = None, *,
                      objective: str = "per_kv", max_states: int = 200_000, max_new: int = 18,
                      max_checks: Optional[int] = None) -> DpResult:
    """Fewest horizontal lasers from C for every number of verticals meeting the base.

    ``Pf`` is in the local frame (base horizontal, piece above).  Verticals
    that do not reach the base are ignored: a vertical inside a pocket can be
    replaced by the pocket lid.  The recursion walks the chosen verticals left
    to right; the chosen horizontals crossing the current vertical are the
    state, and each strip between consecutive verticals is checked directly.
    With ``objective="total"`` only the smallest vertical-plus-horizontal
    count is computed.
    """
    tol = Pf.tau_snap
    if base is None:
        yb = min(p[1] for p in Pf.outer)
    else:
        yb = _base_span(base)[2]
    V = sorted([c for c in C.vertical if min(c.a[1], c.b[1]) <= yb + 10 * tol], key=lambda c: c.a[0])
    H = list(C.horizontal)
    nV = len(V)
    thr = delta * (1 + 1e-9)
    H_geo = [LineString([h.a, h.b]) for h in H]

    def meets(h, v) -> bool:
        hx0, hx1 = sorted((h.a[0], h.b[0]))
        vy0, vy1 = sorted((v.a[1], v.b[1]))
        x, y = v.a[0], h.a[1]
        return hx0 - 10 * tol <= x <= hx1 + 10 * tol and vy0 - 10 * tol <= y <= vy1 + 10 * tol

    meet_v = [frozenset(j for j, h in enumerate(H) if meets(h, v)) for v in V]

    @lru_cache(maxsize=None)
    def slab(j: int, k: int) -> Polygon:
        cuts = [V[i] for i in (j, k) if 0 <= i < nV]
        if not cuts:
            return Pf
        e = 1e-7 * Pf.diameter
        if 0 <= j:
            mx, my = V[j].midpoint
            probe = (mx + e, my)
        else:
            mx, my = V[k].midpoint
            probe = (mx - e, my)
        for cell in decompose(Pf, cuts, validate=False).cells:
            if point_in_polygon(cell.boundary, probe) == Location.INSIDE:
                return cell.boundary
        raise ChordCutError("strip between verticals not found")

    @lru_cache(maxsize=None)
    def pieces(j: int, k: int) -> dict:
        """Horizontal candidates clipped to the strip (index -> list of segments)."""
        s = slab(j, k).to_shapely()
        out = {}
        for i, g in enumerate(H_geo):
            inter = g.intersection(s)
            segs = []
            for part in getattr(inter, "geoms", [inter]):
                if part.geom_type == "LineString" and part.length > 10 * tol:
                    segs.append(Chord(Point(*part.coords[0]), Point(*part.coords[-1])))
            if segs:
                out[i] = segs
        return out

    # In a histogram the region above a horizontal piece is the clip of the
    # strip by a box, and these regions are nested or disjoint.  A cell is such
    # a region minus its directly nested chosen regions, so strip feasibility
    # needs only areas.  Pockets break this and take the arrangement route.
    fast = _is_histogram(Pf, base if base is not None else _bottom_edge(Pf, tol), tol)
    if fast:
        Ps = Pf.to_shapely()
        bx0, by0, bx1, by1 = Pf.bbox
        top = by1 + 1.0

        def xs_of(j: int, k: int) -> tuple:
            return (V[j].a[0] if j >= 0 else bx0), (V[k].a[0] if k < nV else bx1)

        @lru_cache(maxsize=None)
        def strip_area(j: int, k: int) -> float:
            x0, x1 = xs_of(j, k)
            return Ps.intersection(box(x0, by0 - 1.0, x1, top)).area

        @lru_cache(maxsize=None)
        def spans(j: int, k: int) -> dict:
            x0, x1 = xs_of(j, k)
            out = {}
            for i, h in enumerate(H):
                hx0, hx1 = sorted((h.a[0], h.b[0]))
                lo, hi = max(hx0, x0), min(hx1, x1)
                if hi - lo > 10 * tol:
                    y = h.a[1]
                    out[i] = (lo, hi, y, Ps.intersection(box(lo, y, hi, top)).area)
            return out

        def in_slab(j: int, k: int) -> frozenset:
            return frozenset(spans(j, k))
    else:
        def in_slab(j: int, k: int) -> frozenset:
            return frozenset(pieces(j, k))

        @lru_cache(maxsize=None)
        def strip_area(j: int, k: int) -> float:
            return slab(j, k).area

    def segments(j: int, k: int, hs: frozenset) -> int:
        if fast:
            return len(hs & in_slab(j, k))
        cl = pieces(j, k)
        return sum(len(cl.get(i, ())) for i in hs)

    checks = [0]
    eps_n = 10 * tol
    if max_checks is None:
        max_checks = 2_000_000 if fast else 50_000

    @lru_cache(maxsize=None)
    def nesting(j: int, k: int) -> tuple:
        """Pieces ordered by height, with a bitmask of the pieces containing each."""
        sp = spans(j, k)
        order = sorted(sp, key=lambda i: sp[i][2])
        anc, areas = [], []
        for p, i in enumerate(order):
            lo, hi, y, A = sp[i]
            m = 0
            for q in range(p):
                plo, phi, py, _ = sp[order[q]]
                if py < y - eps_n and plo <= lo + eps_n and hi <= phi + eps_n:
                    m |= 1 << q
            anc.append(m)
            areas.append(A)
        return {i: p for p, i in enumerate(order)}, anc, areas

    def feasible_fast(j: int, k: int, hs: frozenset) -> bool:
        pos, anc, areas = nesting(j, k)
        ps = [pos[i] for i in hs if i in pos]
        mask = 0
        for p in ps:
            mask |= 1 << p
        inner = {}
        root_inner = 0.0
        for p in ps:
            m = anc[p] & mask
            if m:
                # containing pieces form a chain, so the highest one is the parent
                par = m.bit_length() - 1
                inner[par] = inner.get(par, 0.0) + areas[p]
            else:
                root_inner += areas[p]
        if strip_area(j, k) - root_inner > thr:
            return False
        return all(areas[p] - inner.get(p, 0.0) <= thr for p in ps)

    @lru_cache(maxsize=None)
    def feasible(j: int, k: int, hs: frozenset) -> bool:
        checks[0] += 1
        if checks[0] > max_checks:
            raise _DpTooLarge
        if fast:
            return feasible_fast(j, k, hs)
        cl = pieces(j, k)
        cuts = [c for i in sorted(hs) for c in cl.get(i, ())]
        return all(cell.area <= thr for cell in decompose(slab(j, k), cuts, validate=False).cells)

    @lru_cache(maxsize=None)
    def best_interior(j: int, k: int, fixed: frozenset, interior: frozenset):
        # Feasibility is monotone in the chosen set, and every piece splits
        # one cell of the simple strip in two, which bounds the count below.
        if not feasible(j, k, fixed | interior):
            return None
        items = sorted(interior)
        need = math.ceil(strip_area(j, k) / thr) - 1 - segments(j, k, fixed)
        for r in range(max(need, 0), len(items) + 1):
            for T in itertools.combinations(items, r):
                if feasible(j, k, fixed | frozenset(T)):
                    return r, frozenset(T)
        return None

    counter = [0]

    @lru_cache(maxsize=None)
    def f(state: DpSubproblem):
        counter[0] += 1
        if counter[0] > max_states:
            raise _DpTooLarge
        j, S, c = state.v_left, state.h_active, state.k_v
        left_meet = meet_v[j] if j >= 0 else frozenset()
        best = None
        if c is None:
            nexts = range(j + 1, nV + 1)
        else:
            nexts = range(j + 1, nV) if c > 0 else [nV]
        for k in nexts:
            if c is not None and c > 0 and nV - k < c:
                break
            step = 1 if (c is None and k < nV) else 0
            slab_h = in_slab(j, k)
            new = slab_h - left_meet
            if len(new) > max_new:
                raise _DpTooLarge
            right_meet = meet_v[k] if k < nV else frozenset()
            Nk = sorted(new & right_meet)
            Ni = new - right_meet
            Sin = S & slab_h
            if not feasible(j, k, Sin | new):
                continue
            for r in range(len(Nk) + 1):
                if best is not None and step + r >= best[0]:
                    break
                for Tk in itertools.combinations(Nk, r):
                    Tk = frozenset(Tk)
                    bi = best_interior(j, k, Sin | Tk, frozenset(Ni))
                    if bi is None:
                        continue
                    cost = step + len(Tk) + bi[0]
                    if best is not None and cost >= best[0]:
                        continue
                    if k < nV:
                        sub = f(DpSubproblem(k, (S | Tk) & right_meet, None if c is None else c - 1))
                        if sub is None:
                            continue
                        total = cost + sub[0]
                        if best is None or total < best[0]:
                            best = (total, (k,) + sub[1], Tk | bi[1] | sub[2])
                    else:
                        if best is None or cost < best[0]:
                            best = (cost, (), Tk | bi[1])
        return best

    fvals, wit = {}, {}
    try:
        if objective == "total":
            r = f(DpSubproblem(-1, frozenset(), None))
            kv = len(r[1])
            return DpResult({kv: r[0] - kv}, {kv: (list(r[1]), sorted(r[2]))}, V, H, counter[0], True)
        for kv in range(nV + 1):
            r = f(DpSubproblem(-1, frozenset(), kv))
            if r is not None:
                fvals[kv] = r[0]
                wit[kv] = (list(r[1]), sorted(r[2]))
        return DpResult(fvals, wit, V, H, counter[0], True)
    except _DpTooLarge:
        log.info("area program exceeded its state budget; using the pruned all-horizontal fallback")
        return _dp_fallback(Pf, V, H, delta, counter[0])


def _dp_fallback(Pf: Polygon, V: list, H: list, delta: float, states: int) -> DpResult:
    """Feasible but not necessarily optimal: all horizontals, then drop redundant ones."""
    thr = delta * (1 + 1e-9)

    def ok(hs):
        return all(c.area <= thr for c in decompose(Pf, [H[i] for i in hs], validate=False).cells)

    keep = list(range(len(H)))
    for i in sorted(keep, key=lambda i: H[i].length):
        trial = [j for j in keep if j != i]
        if ok(trial):
            keep = trial
    return DpResult({0: len(keep)}, {0: ([], keep)}, V, H, states, False)


def solve_axis_area(P: Polygon, delta: float, seed: Optional[Chord] = None) -> Solution:
    """Axis-parallel lasers cutting a simple polygon into pieces of area <= delta."""
    from chordcut.area import repair

    if P.holes:
        raise ChordCutError("solve_axis_area expects a simple polygon")
    if P.area <= delta:
        return evaluate(P, [], "area", algorithm="axis-dp", threshold=delta, stats={"pieces": 0})
    wp = window_partition(P, delta, AREA, seed)
    chords = list(wp.bases)
    exact = True
    cand_total = 0
    for piece in wp.pieces:
        tol = piece.polygon.tau_snap
        fr = frame_for(piece.polygon, piece.base, tol)
        Pf = fr.polygon(piece.polygon)
        bf = fr.chord(piece.base)
        C = candidate_chords(Pf, delta, AREA)
        cand_total += len(C)
        res = dp_min_laser_area(Pf, C, delta, bf, objective="total")
        exact = exact and res.exact
        chords.extend(fr.chord_inv(c) for c in res.best()[2])
    chords = _extend_all(P, chords)
    chords, repaired = repair(P, chords, delta)
    stats = {"pieces": len(wp.pieces), "bases": len(wp.bases), "candidates": cand_total,
             "repair_lasers": repaired, "window_nodes": len(wp.nodes)}
    flags = [] if exact else ["dp-fallback"]
    return evaluate(P, chords, "area", algorithm="axis-dp", threshold=delta, stats=stats, flags=flags)


def stabbing_counts(wp: WindowPartition, chords: Sequence) -> list:
    """For each chord, the number of partition pieces whose interior it crosses."""
    regions = [r.to_shapely() for r in wp.piece_regions()]
    tol = wp.polygon.tau_snap
    out = []
    for c in chords:
        g = LineString([c[0], c[1]])
        out.append(sum(1 for r in regions if g.intersection(r).length > 100 * tol))
    return out
