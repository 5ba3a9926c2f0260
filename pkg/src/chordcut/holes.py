"""Axis-parallel diameter cutting of polygons with holes.

Grid lines of spacing delta, anchored at the bounding-box minimum, split P
into strips.  They are not lasers.  In every full-width strip a minimum-link
rectilinear path from the top boundary to the bottom boundary separates the
strip's left side from its right side, and every link of that path becomes a
laser.  Link distances come from wave propagation over the two trapezoidal
decompositions of the strip: vertical slabs carry vertical visibility and
horizontal slabs carry horizontal visibility.

All strip computations run in a frame where the strips are vertical.
Horizontal strips are handled by swapping x and y.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import shapely
from shapely.geometry import LineString, box
from shapely.ops import nearest_points

from chordcut.diameter import HORIZONTAL, VERTICAL
from chordcut.errors import DegenerateBudget, Unreachable
from chordcut.geometry import Chord, Point, Polygon, horizontal_chords, make_polygon, ring_from_shapely, vertical_chords
from chordcut.solution import Solution, dedupe_chords, evaluate

log = logging.getLogger(__name__)

TOP = "T"
BOTTOM = "B"


def _swap_pt(p) -> Point:
    return Point(float(p[1]), float(p[0]))


def _swap_polygon(P: Polygon) -> Polygon:
    return make_polygon([_swap_pt(p) for p in P.outer], [[_swap_pt(p) for p in h] for h in P.holes])


def _swap_chord(c) -> Chord:
    return Chord(_swap_pt(c[0]), _swap_pt(c[1]))


def _parts(g) -> list:
    if g.is_empty:
        return []
    if hasattr(g, "geoms"):
        out = []
        for s in g.geoms:
            out.extend(_parts(s))
        return out
    return [g]


# --------------------------------------------------------------------------
# strips


@dataclass
class Strip:
    region: Polygon  # a face of P between two consecutive grid lines (world coordinates)
    axis: str
    span: tuple  # (lo, lo + delta) along the axis
    full: bool
    index: int  # lo = origin + index * delta
    parent: Optional[Polygon] = field(default=None, repr=False, compare=False)

    def frame_region(self) -> Polygon:
        return self.region if self.axis == VERTICAL else _swap_polygon(self.region)


def _frame_strips(Q: Polygon, delta: float, axis: str, parent: Polygon) -> list:
    """Vertical strips of Q (already in the vertical frame), regions kept in frame coordinates."""
    x0, y0, x1, y1 = Q.bbox
    tol = 10 * Q.tau_snap
    sq = Q.to_shapely()
    n = max(1, math.ceil((x1 - x0) / delta))
    out = []
    for i in range(n):
        lo, hi = x0 + i * delta, x0 + (i + 1) * delta
        if min(hi, x1) - lo <= tol:
            continue
        piece = sq.intersection(box(lo, y0 - 1.0, min(hi, x1), y1 + 1.0))
        for g in _parts(piece):
            if g.geom_type != "Polygon" or g.area <= tol * tol:
                continue
            gb = g.bounds
            full = abs(gb[0] - lo) <= tol and abs(gb[2] - hi) <= tol
            for poly in ring_from_shapely(g):
                out.append(Strip(poly, axis, (lo, hi), full, i, parent))
    out.sort(key=lambda s: (s.index, s.region.bbox[1]))
    return out


def make_strips(P: Polygon, delta: float, axis: str = VERTICAL) -> list:
    """Faces of P between consecutive grid lines x = x_min + i delta (or y for horizontal)."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if axis == VERTICAL:
        return _frame_strips(P, delta, VERTICAL, P)
    strips = _frame_strips(_swap_polygon(P), delta, HORIZONTAL, P)
    return [Strip(_swap_polygon(s.region), HORIZONTAL, s.span, s.full, s.index, P) for s in strips]


# --------------------------------------------------------------------------
# boundary chains and trapezoids of one strip (vertical frame)


@dataclass
class _Chain:
    name: str
    coords: list
    ends: tuple  # "L", "R" or None at each end

    @property
    def geom(self):
        return LineString(self.coords)


def _chains(F: Polygon, L: float, R: float, tol: float) -> list:
    """Pieces of the boundary of P inside the strip, split where they touch a grid line.

    Edges lying on a grid line are not part of the boundary of P inside the
    strip and are dropped.
    """

    def on(p):
        if abs(p[0] - L) <= tol:
            return "L"
        if abs(p[0] - R) <= tol:
            return "R"
        return None

    runs = []
    for ring in F.rings:
        pts = list(ring)
        n = len(pts)
        tags = [on(p) for p in pts]
        cuts = [i for i in range(n) if tags[i] is not None]
        if not cuts:
            runs.append((pts + [pts[0]], (None, None)))
            continue
        s = cuts[0]
        pts = pts[s:] + pts[:s]
        tags = tags[s:] + tags[:s]
        cur = [pts[0]]
        for k in range(1, n + 1):
            p, t_prev, t = pts[k % n], tags[k - 1], tags[k % n]
            if t_prev is not None and t_prev == t:
                if len(cur) >= 2:
                    runs.append((cur, (on(cur[0]), on(cur[-1]))))
                cur = [p]
                continue
            cur.append(p)
            if t is not None:
                runs.append((cur, (on(cur[0]), on(cur[-1]))))
                cur = [p]
    crossing = [r for r in runs if set(r[1]) == {"L", "R"}]
    crossing.sort(key=lambda r: -max(p[1] for p in r[0]))
    chains = []
    if len(crossing) >= 2:
        chains.append(_Chain(TOP, crossing[0][0], crossing[0][1]))
        chains.append(_Chain(BOTTOM, crossing[-1][0], crossing[-1][1]))
        rest = [r for r in runs if r is not crossing[0] and r is not crossing[-1]]
    else:
        rest = list(runs)
    rest.sort(key=lambda r: (min(p[0] for p in r[0]), min(p[1] for p in r[0])))
    for i, (c, e) in enumerate(rest):
        chains.append(_Chain(f"C{i}", c, e))
    return chains


@dataclass
class _Trap:
    geom: object  # convex shapely polygon
    lo: float  # slab bounds along its axis
    hi: float


@dataclass
class _Piece:
    kind: str  # "V": vertically visible band of a vertical-slab trapezoid; "H" likewise
    trap: int
    lo: float
    hi: float
    geom: object
    parent: int  # index of the piece it was seen from, -1 for the source chain
    level: int


class _StripSpace:
    """Free space of one strip with both trapezoidal decompositions."""

    def __init__(self, F: Polygon, L: float, R: float):
        self.F = F
        self.L, self.R = L, R
        self.tol = 10 * F.tau_snap
        self.shape = F.to_shapely()
        x0, y0, x1, y1 = F.bbox
        self.pad = (x0 - 1.0, y0 - 1.0, x1 + 1.0, y1 + 1.0)
        self.chains = _chains(F, L, R, self.tol)
        self.by_name = {c.name: c for c in self.chains}
        self.traps = {"V": self._slabs(0), "H": self._slabs(1)}
        self.trees = {k: shapely.STRtree([t.geom for t in v]) for k, v in self.traps.items()}

    def _slabs(self, coord: int) -> list:
        vals = sorted({p[coord] for r in self.F.rings for p in r})
        cuts = []
        for v in vals:
            if not cuts or v - cuts[-1] > self.tol:
                cuts.append(v)
        X0, Y0, X1, Y1 = self.pad
        out = []
        for a, b in zip(cuts, cuts[1:]):
            slab = box(a, Y0, b, Y1) if coord == 0 else box(X0, a, X1, b)
            for g in _parts(self.shape.intersection(slab)):
                if g.geom_type == "Polygon" and g.area > 0:
                    out.append(_Trap(g, a, b))
        return out

    def band(self, kind: str, t: int, lo: float, hi: float):
        g = self.traps[kind][t].geom
        X0, Y0, X1, Y1 = self.pad
        if hi - lo > self.tol:
            return g.intersection(box(lo, Y0, hi, Y1) if kind == "V" else box(X0, lo, X1, hi))
        line = LineString([(lo, Y0), (lo, Y1)]) if kind == "V" else LineString([(X0, lo), (X1, lo)])
        return g.intersection(line)

    def intervals(self, kind: str, g) -> list:
        """Projections of the connected parts of g onto the slab axis, merged."""
        ivs = []
        for p in _parts(g):
            b = p.bounds
            ivs.append((b[0], b[2]) if kind == "V" else (b[1], b[3]))
        ivs.sort()
        merged = []
        for a, b in ivs:
            if merged and a <= merged[-1][1] + self.tol:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        return merged


def _subtract(iv: tuple, cov: list, tol: float) -> list:
    lo, hi = iv
    if hi - lo <= tol:
        return [] if any(a - tol <= lo <= b + tol for a, b in cov) else [iv]
    out, cur = [], lo
    for a, b in cov:
        if b <= cur + tol:
            continue
        if a >= hi - tol:
            break
        if a > cur + tol:
            out.append((cur, a))
        cur = max(cur, b)
    if cur < hi - tol:
        out.append((cur, hi))
    return out


def _add_cover(cov: list, iv: tuple, tol: float) -> list:
    items = sorted(cov + [iv])
    merged = []
    for a, b in items:
        if merged and a <= merged[-1][1] + tol:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    return merged


@dataclass
class _Wave:
    source: str
    pieces: list
    hit_level: dict
    hit_piece: dict
    targets: dict  # name -> contact geometry


def _contact_spread(p: _Piece, g) -> float:
    """Extent of a piece's contact with g across its link direction (0 when it only grazes)."""
    c = 0 if p.kind == "V" else 1
    return max((q.bounds[2 + c] - q.bounds[c] for q in _parts(p.geom.intersection(g))), default=0.0)


def _wave(S: _StripSpace, source: str, targets: Optional[list] = None, max_level: Optional[int] = None) -> _Wave:
    """Areas reachable from a boundary chain with 1, 2, ... axis-parallel links."""
    src = S.by_name[source].geom
    if targets is None:
        targets = [c.name for c in S.chains if c.name != source]
    # Chains meeting the source (top and bottom at a single point on a grid
    # line) must not count that common point as a contact.
    near_src = src.buffer(5 * S.tol, quad_segs=2)
    tgeom = {}
    for t in targets:
        g = S.by_name[t].geom
        tgeom[t] = g.difference(near_src) if shapely.dwithin(g, src, S.tol) else g
    if max_level is None:
        max_level = 2 * (len(S.traps["V"]) + len(S.traps["H"])) + 4
    cover = {k: [[] for _ in v] for k, v in S.traps.items()}
    pieces: list = []
    hit_level, hit_piece = {}, {}
    tol = S.tol

    def spawn(kind: str, g, parent: int, level: int) -> list:
        # Trapezoid sides are computed sub-segments of polygon edges, so exact
        # collinear overlaps can degrade to points; contacts use a tol buffer.
        made = []
        g = g.buffer(tol, quad_segs=2)
        for t in S.trees[kind].query(g):
            t = int(t)
            inter = S.traps[kind][t].geom.intersection(g)
            if inter.is_empty:
                continue
            for iv in S.intervals(kind, inter):
                for a, b in _subtract(iv, cover[kind][t], tol):
                    if kind == "V" and b - a <= 2 * tol and min(abs(a - S.L), abs(b - S.R)) <= 2 * tol:
                        continue  # along the strip's own grid line, not through its interior
                    cover[kind][t] = _add_cover(cover[kind][t], (a, b), tol)
                    geom = S.band(kind, t, a, b)
                    if geom.is_empty:
                        continue
                    pieces.append(_Piece(kind, t, a, b, geom, parent, level))
                    made.append(len(pieces) - 1)
        return made

    def close(new: list, level: int) -> list:
        """Collinear continuation: a link may run on through neighbouring trapezoid sides."""
        out = list(new)
        queue = list(new)
        while queue:
            i = queue.pop()
            p = pieces[i]
            more = spawn(p.kind, p.geom, i, level)
            out.extend(more)
            queue.extend(more)
        return out

    def check(new: list, level: int) -> None:
        for t, g in tgeom.items():
            if t in hit_level:
                continue
            touching = [i for i in new if shapely.dwithin(pieces[i].geom, g, tol)]
            if touching:
                hit_level[t] = level
                hit_piece[t] = max(touching, key=lambda i: (_contact_spread(pieces[i], g), -i))

    frontier = close(spawn("V", src, -1, 1) + spawn("H", src, -1, 1), 1)
    check(frontier, 1)
    level = 1
    while frontier and len(hit_level) < len(tgeom) and level < max_level:
        level += 1
        new = []
        for i in frontier:
            other = "H" if pieces[i].kind == "V" else "V"
            new.extend(spawn(other, pieces[i].geom, i, level))
        frontier = close(new, level)
        check(frontier, level)
    return _Wave(source, pieces, hit_level, hit_piece, tgeom)


def _pick(g, coord: int) -> Point:
    """A generic point of g: middle of the part spread widest along ``coord``."""
    parts = _parts(g)
    if not parts:
        raise Unreachable("empty contact")

    def spread(p):
        b = p.bounds
        return (b[2 + coord] - b[coord], p.length if p.geom_type != "Point" else 0.0)

    best = max(parts, key=spread)
    if best.geom_type == "Point":
        return Point(best.x, best.y)
    b = best.bounds
    mid = 0.5 * (b[coord] + b[2 + coord])
    if b[2 + coord] - b[coord] > 0:
        cut = LineString([(mid, b[1] - 1.0), (mid, b[3] + 1.0)]) if coord == 0 else LineString([(b[0] - 1.0, mid), (b[2] + 1.0, mid)])
        hit = _parts(best.intersection(cut))
        if hit:
            h = hit[0].bounds
            return Point(0.5 * (h[0] + h[2]), 0.5 * (h[1] + h[3]))
    m = best.interpolate(0.5, normalized=True) if best.geom_type == "LineString" else best.representative_point()
    return Point(m.x, m.y)


def _trace(S: _StripSpace, w: _Wave, target: str) -> list:
    """Corner points of a link path from the wave source to ``target``."""
    i = w.hit_piece[target]
    tg = w.targets[target]
    contact = w.pieces[i].geom.intersection(tg.buffer(S.tol, quad_segs=2))
    if contact.is_empty:
        contact = nearest_points(w.pieces[i].geom, tg)[0]
    pt = _pick(contact, 0 if w.pieces[i].kind == "V" else 1)
    pts = [pt]
    src = S.by_name[w.source].geom
    X0, Y0, X1, Y1 = S.pad
    while i >= 0:
        p = w.pieces[i]
        line = LineString([(pt[0], Y0), (pt[0], Y1)]) if p.kind == "V" else LineString([(X0, pt[1]), (X1, pt[1])])
        seg = line.intersection(S.traps[p.kind][p.trap].geom.buffer(S.tol, quad_segs=2))
        nxt = src if p.parent < 0 else w.pieces[p.parent].geom
        hit = seg.intersection(nxt.buffer(S.tol, quad_segs=2))
        if hit.is_empty:
            hit = nearest_points(nxt, seg)[0]
        nk = None if p.parent < 0 else w.pieces[p.parent].kind
        q = _pick(hit, 1 if nk == "H" else 0)
        q = Point(pt[0], q[1]) if p.kind == "V" else Point(q[0], pt[1])
        pts.append(q)
        pt = q
        i = p.parent
    pts.reverse()
    return pts


def _links(pts: list, tol: float) -> list:
    """Axis-parallel segments between consecutive corners, collinear runs merged."""
    segs = []
    for p, q in zip(pts, pts[1:]):
        if math.dist(p, q) <= tol:
            continue
        vert = abs(p[0] - q[0]) <= tol
        if segs and segs[-1][2] == vert:
            segs[-1] = (segs[-1][0], q, vert)
        else:
            segs.append((p, q, vert))
    return [(a, b) for a, b, _ in segs]


# --------------------------------------------------------------------------
# critical graph and separating paths


@dataclass
class CriticalGraph:
    nodes: list
    weights: dict  # (a, b) -> link distance, symmetric

    def weight(self, a: str, b: str) -> Optional[int]:
        return self.weights.get((a, b))


@dataclass
class AlternatingPath:
    links: list  # axis-parallel segments through free space (world coordinates)
    walks: list  # boundary components visited, from T to B
    lasers: list  # chords of P along the links
    associated: list  # per link: its chord stays inside the strip
    strip: int

    @property
    def associated_count(self) -> int:
        return sum(self.associated)

    def __len__(self) -> int:
        return len(self.links)


def _space(F: Strip) -> _StripSpace:
    return _StripSpace(F.frame_region(), F.span[0], F.span[1])


def link_distance(F: Strip, a: str, b: str) -> int:
    """Fewest axis-parallel links through the strip connecting boundary components a and b."""
    S = _space(F)
    for name in (a, b):
        if name not in S.by_name:
            raise Unreachable(f"strip has no boundary component {name!r}")
    w = _wave(S, a, [b])
    if b not in w.hit_level:
        raise Unreachable(f"{a} and {b} are not connected inside the strip")
    return w.hit_level[b]


def critical_graph(F: Strip) -> CriticalGraph:
    S = _space(F)
    names = [c.name for c in S.chains]
    weights = {}
    for a in names:
        for b, d in _wave(S, a).hit_level.items():
            if (a, b) not in weights or d < weights[(a, b)]:
                weights[(a, b)] = weights[(b, a)] = d
    return CriticalGraph(names, weights)


def _frame_path(S: _StripSpace) -> Optional[tuple]:
    """Shortest top-to-bottom path in the critical graph, waves run lazily."""
    if TOP not in S.by_name or BOTTOM not in S.by_name:
        return None
    waves = {}
    dist = {TOP: 0}
    prev = {}
    heap = [(0, TOP)]
    done = set()
    bound = None
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == BOTTOM:
            break
        cap = None if bound is None else bound - d
        if cap is not None and cap < 1:
            continue
        w = _wave(S, u, [c.name for c in S.chains if c.name not in done], max_level=cap)
        waves[u] = w
        for v, dv in w.hit_level.items():
            nd = d + dv
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
                if v == BOTTOM:
                    bound = nd
    if BOTTOM not in dist:
        return None
    route = [BOTTOM]
    while route[-1] != TOP:
        route.append(prev[route[-1]])
    route.reverse()
    corners = []
    for u, v in zip(route, route[1:]):
        corners.extend(_links(_trace(S, waves[u], v), S.tol))
    return route, corners


def _chords_along(Q: Polygon, seg, tol: float) -> list:
    (ax, ay), (bx, by) = seg
    if abs(ax - bx) <= tol:
        x = 0.5 * (ax + bx)
        lo, hi = sorted((ay, by))
        cs = [c for c in vertical_chords(Q, x) if min(hi, max(c.a[1], c.b[1])) - max(lo, min(c.a[1], c.b[1])) > tol]
    else:
        y = 0.5 * (ay + by)
        lo, hi = sorted((ax, bx))
        cs = [c for c in horizontal_chords(Q, y) if min(hi, max(c.a[0], c.b[0])) - max(lo, min(c.a[0], c.b[0])) > tol]
    return cs


def _strip_path(Q: Polygon, F: Strip, S: _StripSpace) -> Optional[AlternatingPath]:
    """Path and lasers in frame coordinates (Q and S in the vertical frame)."""
    res = _frame_path(S)
    if res is None:
        log.warning("strip %d has no top-to-bottom path", F.index)
        return None
    route, segs = res
    links, lasers, assoc = [], [], []
    L, R = F.span
    for seg in segs:
        cs = _chords_along(Q, seg, S.tol)
        if not cs:
            continue  # runs along the boundary of P: a boundary walk, not a laser
        links.append(seg)
        lasers.extend(cs)
        vert = abs(seg[0][0] - seg[1][0]) <= S.tol
        assoc.append(vert or all(L - S.tol <= min(c.a[0], c.b[0]) and max(c.a[0], c.b[0]) <= R + S.tol for c in cs))
    return AlternatingPath(links, route, lasers, assoc, F.index)


def _to_world(path: AlternatingPath, axis: str) -> AlternatingPath:
    if axis == VERTICAL:
        return path
    return AlternatingPath(
        [(_swap_pt(a), _swap_pt(b)) for a, b in path.links],
        path.walks,
        [_swap_chord(c) for c in path.lasers],
        path.associated,
        path.strip,
    )


def min_link_separating_path(F: Strip, P: Optional[Polygon] = None) -> AlternatingPath:
    """Minimum-link top-to-bottom path of a full strip, one laser per link."""
    if not F.full:
        raise ValueError("the strip is not full")
    P = P if P is not None else F.parent
    if P is None:
        raise ValueError("the enclosing polygon is needed to extend links into chords")
    Q = P if F.axis == VERTICAL else _swap_polygon(P)
    S = _space(F)
    path = _strip_path(Q, F, S)
    if path is None:
        raise Unreachable("the strip's top and bottom are not connected")
    return _to_world(path, F.axis)


# --------------------------------------------------------------------------
# solvers


@dataclass
class HolesState:
    delta: float
    paths: dict  # axis -> list of AlternatingPath (world coordinates)

    def lasers(self, axis: str) -> list:
        return [c for p in self.paths[axis] for c in p.lasers]

    @property
    def count(self) -> int:
        return sum(len(p.lasers) for ps in self.paths.values() for p in ps)


def holes_state(P: Polygon, delta: float) -> HolesState:
    paths = {}
    for axis in (VERTICAL, HORIZONTAL):
        Q = P if axis == VERTICAL else _swap_polygon(P)
        out = []
        for F in _frame_strips(Q, delta, axis, P):
            if not F.full:
                continue
            S = _StripSpace(F.region, F.span[0], F.span[1])
            path = _strip_path(Q, F, S)
            if path is not None:
                out.append(_to_world(path, axis))
        paths[axis] = out
    return HolesState(delta, paths)


def bicriteria_holes(P: Polygon, delta: float) -> Solution:
    """Axis-parallel lasers cutting P (holes allowed) into pieces of x- and y-extent at most 2 delta."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    st = holes_state(P, delta)
    lv = dedupe_chords(st.lasers(VERTICAL), P.tau_snap * 10)
    lh = dedupe_chords(st.lasers(HORIZONTAL), P.tau_snap * 10)
    links = [len(p) for ps in st.paths.values() for p in ps]
    assoc = [p.associated_count for ps in st.paths.values() for p in ps]
    stats = {
        "k_V": len(lv),
        "k_H": len(lh),
        "full_strips_V": len(st.paths[VERTICAL]),
        "full_strips_H": len(st.paths[HORIZONTAL]),
        "links": sum(links),
        "associated_links": sum(assoc),
        "delta_used": delta,
        "diameter_bound": 2 * math.sqrt(2) * delta,
    }
    return evaluate(P, lv + lh, "diameter", algorithm="holes-bicriteria", threshold=2 * math.sqrt(2) * delta,
                    stats=stats)


def residue_split(paths: list, tol: float) -> tuple:
    """Residue class (strip index mod 6) whose paths use the fewest lasers; lowest residue on ties."""
    best = None
    for a in range(6):
        cs = dedupe_chords([c for p in paths if p.strip % 6 == a for c in p.lasers], tol)
        if best is None or len(cs) < len(best[1]):
            best = (a, cs)
    return best


def solve_k_laser_holes(P: Polygon, k: int, epsilon: float = 0.1, *, floor_ratio: float = 1e-6) -> Solution:
    """At most k axis-parallel lasers in a polygon with holes, approximately minimizing the largest diameter."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    diam = P.diameter
    if k < 0:
        sol = evaluate(P, [], "diameter", algorithm="holes-k-laser", budget=k, stats={"delta0": diam},
                       flags=["degenerate-budget"])
        raise DegenerateBudget("the laser budget is negative", solution=sol)
    delta = diam
    st = holes_state(P, delta)
    if st.count > 6 * k:
        sol = evaluate(P, [], "diameter", algorithm="holes-k-laser", budget=k, stats={"delta0": diam},
                       flags=["degenerate-budget"])
        raise DegenerateBudget("even delta = diam(P) needs more than 6k lasers", solution=sol)
    flags = []
    steps = 0
    while True:
        nxt = delta / (1 + epsilon)
        if nxt < diam * floor_ratio:
            flags += ["resolution-floor", "degenerate-budget"]
            log.warning("delta search stopped at the resolution floor %.3g", nxt)
            break
        s2 = holes_state(P, nxt)
        steps += 1
        if s2.count > 6 * k:
            break
        delta, st = nxt, s2
    tol = P.tau_snap * 10
    av, cv = residue_split(st.paths[VERTICAL], tol)
    ah, ch = residue_split(st.paths[HORIZONTAL], tol)
    x0, y0 = P.bbox[0], P.bbox[1]
    stats = {
        "delta0": delta,
        "steps": steps,
        "l_delta0": st.count,
        "k_V": len(cv),
        "k_H": len(ch),
        "residue_V": av,
        "residue_H": ah,
        "origin_x": x0,
        "origin_y": y0,
        "diameter_bound": 12 * math.sqrt(2) * delta,
        "epsilon": epsilon,
    }
    return evaluate(P, cv + ch, "diameter", algorithm="holes-k-laser", budget=k, stats=stats, flags=flags)
