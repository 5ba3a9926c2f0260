"""Cutting a polygon so that no piece contains a disk of a given radius.

A set of lasers achieves this exactly when every disk of radius ``r`` inside
P meets a laser.  The solver reduces to set cover: points of a shifted square
grid of spacing ``sqrt(2) r`` lie in every such disk, chords anchored at two
grid points or polygon vertices form the candidate sets, and one pinned disk
per hit pattern forms the universe.  Greedy cover gives a logarithmic factor.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import shapely
from shapely.geometry import LineString
from shapely.geometry import Polygon as ShapelyPolygon
from shapely.ops import polygonize, unary_union

from chordcut.errors import UncoverableElement
from chordcut.geometry import Chord, Point, Polygon, chords_on_line, horizontal_chords, vertical_chords
from chordcut.solution import Solution, evaluate

log = logging.getLogger(__name__)

# Segments per quarter circle when offsetting the boundary inward.
QUAD_SEGS = 64


@dataclass
class GridPoints:
    points: np.ndarray  # (N, 2), the grid points covered by P
    spacing: float
    shift: tuple
    seed: int

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class PinnedDiskSet:
    centers: np.ndarray  # (D, 2)
    radius: float
    faces: list = field(default_factory=list, repr=False)  # shapely faces of the type arrangement
    face_disk: list = field(default_factory=list, repr=False)  # face index -> disk index
    region: object = field(default=None, repr=False)  # centers of contained disks (shapely)

    def __len__(self) -> int:
        return len(self.centers)


@dataclass
class CoverInstance:
    universe: PinnedDiskSet
    chords: list
    sets: list  # sets[j] = frozenset of disk indices hit by chords[j]


def grid_points(P: Polygon, radius: float, seed: int = 0) -> GridPoints:
    """Points of P on a square grid of spacing sqrt(2) * radius with a seeded shift."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    s = math.sqrt(2) * radius
    rng = np.random.default_rng(np.uint64(seed % 2**64))
    sx, sy = (float(v) for v in rng.random(2) * s)
    x0, y0, x1, y1 = P.bbox
    xs = x0 + sx + s * np.arange(-1, math.ceil((x1 - x0) / s) + 1)
    ys = y0 + sy + s * np.arange(-1, math.ceil((y1 - y0) / s) + 1)
    gx, gy = np.meshgrid(xs, ys)
    gx, gy = gx.ravel(), gy.ravel()
    g = P.to_shapely()
    shapely.prepare(g)
    keep = shapely.intersects_xy(g, gx, gy)
    return GridPoints(np.column_stack([gx[keep], gy[keep]]), s, (sx, sy), seed)


def _anchors(P: Polygon, G: GridPoints) -> np.ndarray:
    pts = [tuple(p) for p in G.points] + [tuple(v) for r in P.rings for v in r]
    return np.unique(np.asarray(pts, dtype=float).reshape(-1, 2), axis=0)


def _seg_dist(px, py, ax, ay, bx, by) -> np.ndarray:
    """Distances from points (px, py) to segments (ax, ay)-(bx, by), broadcasting."""
    dx, dy = bx - ax, by - ay
    dd = dx * dx + dy * dy
    with np.errstate(invalid="ignore", divide="ignore"):
        t = ((px - ax) * dx + (py - ay) * dy) / dd
    t = np.clip(np.nan_to_num(t), 0.0, 1.0)
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _on_chord(c: Chord, p, tol: float) -> bool:
    return float(_seg_dist(p[0], p[1], c.a[0], c.a[1], c.b[0], c.b[1])) <= tol


def _add(out: dict, c: Chord, tol: float) -> None:
    c = c.canonical()
    q = 1.0 / max(tol * 10, 1e-300)
    key = tuple(round(v * q) for v in (c.a[0], c.a[1], c.b[0], c.b[1]))
    out.setdefault(key, c)


def candidate_chords(P: Polygon, G: GridPoints, radius: float, axis_only: bool = False) -> list:
    """Chords of P through two anchors (grid points or vertices), or axis-parallel ones through one."""
    tol = P.tau_snap * 10
    A = _anchors(P, G)
    out: dict = {}
    if axis_only:
        for x, y in A:
            for c in vertical_chords(P, float(x)) + horizontal_chords(P, float(y)):
                if _on_chord(c, (x, y), tol):
                    _add(out, c, tol)
        return list(out.values())
    lines: dict = {}
    q = 1.0 / tol
    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            p, r = A[i], A[j]
            d = math.hypot(r[0] - p[0], r[1] - p[1])
            if d <= tol:
                continue
            th = math.atan2(r[1] - p[1], r[0] - p[0]) % math.pi
            if th >= math.pi - 1e-12:
                th = 0.0
            nx, ny = -math.sin(th), math.cos(th)
            key = (round(th * 1e9), round((nx * p[0] + ny * p[1]) * q))
            if key not in lines:
                lines[key] = chords_on_line(P, (float(p[0]), float(p[1])), (float(r[0]), float(r[1])))
            for c in lines[key]:
                if _on_chord(c, p, tol) or _on_chord(c, r, tol):
                    _add(out, c, tol)
    return list(out.values())


def hit_matrix(centers: np.ndarray, chords: Sequence, radius: float, tol: float) -> np.ndarray:
    """hits[d, j]: the closed disk at centers[d] meets chords[j]."""
    if len(centers) == 0 or len(chords) == 0:
        return np.zeros((len(centers), len(chords)), dtype=bool)
    S = np.array([[c.a[0], c.a[1], c.b[0], c.b[1]] for c in chords], dtype=float)
    px, py = centers[:, 0:1], centers[:, 1:2]
    d = _seg_dist(px, py, S[None, :, 0], S[None, :, 1], S[None, :, 2], S[None, :, 3])
    return d <= radius + tol


def center_region(P: Polygon, radius: float):
    """Centers of the radius-disks inside P, offset with shapely arcs."""
    return P.to_shapely().buffer(-radius, quad_segs=QUAD_SEGS)


def _band(c: Chord, r: float) -> ShapelyPolygon:
    """Rectangle of points within r of the chord, measured perpendicular to it."""
    (ax, ay), (bx, by) = c.a, c.b
    L = math.hypot(bx - ax, by - ay)
    nx, ny = -(by - ay) / L * r, (bx - ax) / L * r
    return ShapelyPolygon([(ax + nx, ay + ny), (bx + nx, by + ny), (bx - nx, by - ny), (ax - nx, ay - ny)])


def _clearance(P: Polygon, pts: np.ndarray) -> np.ndarray:
    E = P.edge_array
    d = _seg_dist(pts[:, 0:1], pts[:, 1:2], E[None, :, 0], E[None, :, 1], E[None, :, 2], E[None, :, 3])
    return d.min(axis=1)


def pinned_disks(P: Polygon, candidates: Sequence, radius: float) -> PinnedDiskSet:
    """One disk per hit pattern, taken from the faces of the band arrangement.

    Inside the center region a disk meets a chord exactly when its center lies
    in the chord's perpendicular band, so the band sides cut the region into
    faces of constant hit pattern.
    """
    R = center_region(P, radius)
    if R.is_empty or R.area <= 0 or not candidates:
        return PinnedDiskSet(np.zeros((0, 2)), radius, region=R)
    shapely.prepare(R)
    bands = [_band(c, radius) for c in candidates]
    # Clip to a slightly grown region so that every cut crosses the region
    # boundary; a cut ending exactly on it would be dropped as a dangle.
    grown = R.buffer(1e-6 * radius, quad_segs=2)
    cuts = [R.boundary]
    for b in bands:
        if b.intersects(R):
            cuts.append(b.boundary.intersection(grown))
    faces = [f for f in polygonize(unary_union(cuts)) if f.area > 0]
    reps = [f.representative_point() for f in faces]
    inside = [R.contains(p) for p in reps]
    faces = [f for f, ok in zip(faces, inside) if ok]
    reps = np.array([(p.x, p.y) for p, ok in zip(reps, inside) if ok], dtype=float).reshape(-1, 2)
    order = np.lexsort((reps[:, 1], reps[:, 0])) if len(reps) else np.zeros(0, dtype=int)
    faces = [faces[i] for i in order]
    reps = reps[order]
    H = hit_matrix(reps, candidates, radius, P.tau_snap)
    clear = _clearance(P, reps) if len(reps) else np.zeros(0)
    types: dict = {}
    centers, keep_faces, face_disk = [], [], []
    for k in range(len(faces)):
        row = H[k]
        if not row.any() and clear[k] < radius:
            # A sliver between the true arc and its polygonal approximation.
            continue
        key = row.tobytes()
        if key not in types:
            types[key] = len(centers)
            centers.append(reps[k])
        keep_faces.append(faces[k])
        face_disk.append(types[key])
    return PinnedDiskSet(np.asarray(centers, dtype=float).reshape(-1, 2), radius, keep_faces, face_disk, R)


def cover_instance(P: Polygon, candidates: Sequence, D: PinnedDiskSet) -> CoverInstance:
    H = hit_matrix(D.centers, candidates, D.radius, P.tau_snap)
    sets = [frozenset(np.flatnonzero(H[:, j]).tolist()) for j in range(len(candidates))]
    return CoverInstance(D, list(candidates), sets)


def greedy_cover(instance: CoverInstance) -> list:
    """Greedy set cover; ties go to the lowest chord index."""
    n = len(instance.universe)
    masks = [sum(1 << d for d in s) for s in instance.sets]
    covered = 0
    for m in masks:
        covered |= m
    if covered != (1 << n) - 1:
        missing = next(d for d in range(n) if not covered >> d & 1)
        raise UncoverableElement(f"pinned disk {missing} is hit by no candidate chord")
    left = (1 << n) - 1
    picked = []
    while left:
        best, gain = -1, 0
        for j, m in enumerate(masks):
            g = (m & left).bit_count()
            if g > gain:
                best, gain = j, g
        picked.append(best)
        left &= ~masks[best]
    return [instance.chords[j] for j in picked]


def _point_on_edge(E: np.ndarray, p) -> int:
    d = _seg_dist(p[0], p[1], E[:, 0], E[:, 1], E[:, 2], E[:, 3])
    return int(np.argmin(d))


def _cross_line(p, d, e) -> Optional[tuple]:
    """Intersection of the line p + t d with the line through edge e."""
    ex, ey = e[2] - e[0], e[3] - e[1]
    den = d[0] * ey - d[1] * ex
    if den == 0.0:
        return None
    t = ((e[0] - p[0]) * ey - (e[1] - p[1]) * ex) / den
    return (p[0] + t * d[0], p[1] + t * d[1])


def _between(a, b, q, tol) -> bool:
    return float(_seg_dist(q[0], q[1], a[0], a[1], b[0], b[1])) <= tol


def anchored_replacements(P: Polygon, chord: Chord, anchors: np.ndarray) -> list:
    """Shift the chord to the first anchor on each side, then rotate it both ways.

    The endpoints stay on their two edges throughout.  Returns up to four
    segments, each through two anchors; a copy rotated onto a boundary edge
    is dropped.
    """
    tol = P.tau_snap * 10
    E = P.edge_array
    e1, e2 = E[_point_on_edge(E, chord.a)], E[_point_on_edge(E, chord.b)]
    a = np.asarray(chord.a, dtype=float)
    b = np.asarray(chord.b, dtype=float)
    u = (b - a) / np.linalg.norm(b - a)
    n = np.array([-u[1], u[0]])
    out = []
    for side in (1.0, -1.0):
        # Shift: parallel lines n.p = n.a + side * t.
        best_t, pivot = math.inf, None
        for q in anchors:
            t = side * float(n @ (q - a))
            if t < -tol or t >= best_t:
                continue
            base = a + side * t * n
            p1, p2 = _cross_line(base, u, e1), _cross_line(base, u, e2)
            if p1 is None or p2 is None:
                continue
            if _between(p1, p2, q, tol) and _on_edge(e1, p1, tol) and _on_edge(e2, p2, tol):
                best_t, pivot = max(t, 0.0), q
        if pivot is None:
            continue
        base = a + side * best_t * n
        theta0 = math.atan2(u[1], u[0])
        for rot in (1.0, -1.0):
            best_phi, seg = math.inf, None
            for q in anchors:
                v = q - pivot
                if math.hypot(*v) <= tol:
                    continue
                ang = math.atan2(v[1], v[0])
                phi = (rot * (ang - theta0)) % math.pi
                if phi > math.pi - 1e-12:
                    phi = 0.0
                if phi >= best_phi:
                    continue
                d = (math.cos(theta0 + rot * phi), math.sin(theta0 + rot * phi))
                p1 = tuple(pivot) if _on_edge(e1, pivot, tol) else _cross_line(pivot, d, e1)
                p2 = tuple(pivot) if _on_edge(e2, pivot, tol) else _cross_line(pivot, d, e2)
                if p1 is None or p2 is None:
                    continue
                if _between(p1, p2, q, tol) and _on_edge(e1, p1, tol) and _on_edge(e2, p2, tol):
                    best_phi, seg = phi, (p1, p2)
            if seg is None:
                continue
            mid = (0.5 * (seg[0][0] + seg[1][0]), 0.5 * (seg[0][1] + seg[1][1]))
            if float(_seg_dist(mid[0], mid[1], E[:, 0], E[:, 1], E[:, 2], E[:, 3]).min()) <= tol:
                continue  # rotated onto a boundary edge: not a chord
            out.append(Chord(Point(*map(float, seg[0])), Point(*map(float, seg[1]))))
    return out


def _on_edge(e, p, tol) -> bool:
    return float(_seg_dist(p[0], p[1], e[0], e[1], e[2], e[3])) <= tol


def useful_candidates(P: Polygon, candidates: Sequence, radius: float) -> list:
    """Candidates whose band reaches the interior of the center region."""
    R = center_region(P, radius)
    if R.is_empty:
        return []
    shapely.prepare(R)
    return [c for c in candidates if _band(c, radius).intersection(R).area > 0]


def lazy_cover(P: Polygon, candidates: Sequence, radius: float, *, max_rounds: int = 200) -> tuple:
    """Greedy cover over a universe of pinned disks grown on demand.

    Each round covers the disks found so far, then adds one disk from every
    component of the center region that the chosen lasers miss.  Greedy on
    that sub-universe keeps the logarithmic guarantee, and the loop ends only
    when every contained disk is hit.  Returns ``(lasers, disks, rounds)``.
    """
    R = center_region(P, radius)
    tol = P.tau_snap
    if R.is_empty or R.area <= 0:
        return [], PinnedDiskSet(np.zeros((0, 2)), radius, region=R), 0
    bands = [_band(c, radius) for c in candidates]
    centers = np.zeros((0, 2))
    picked: list = []
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise UncoverableElement(f"lazy cover did not settle after {max_rounds} rounds")
        if picked:
            left = R.difference(unary_union([bands[candidates.index(c)] for c in picked]))
        else:
            left = R
        pts = []
        for g in getattr(left, "geoms", [left]):
            if g.geom_type != "Polygon" or g.area <= 0:
                continue
            p = g.representative_point()
            pts.append((p.x, p.y))
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        if len(pts):
            hit_now = hit_matrix(pts, picked, radius, tol).any(axis=1) if picked else np.zeros(len(pts), bool)
            pts = pts[~hit_now]
        if len(pts):
            deep = _clearance(P, pts) >= radius
            H = hit_matrix(pts, candidates, radius, tol).any(axis=1)
            if (deep & ~H).any():
                raise UncoverableElement("a contained disk is hit by no candidate chord")
            # Slivers between the true arcs and their polygonal offsets.
            pts = pts[H]
        if not len(pts):
            break
        centers = np.vstack([centers, pts])
        D = PinnedDiskSet(centers, radius, region=R)
        picked = greedy_cover(cover_instance(P, candidates, D))
    return picked, PinnedDiskSet(centers, radius, region=R), rounds


def solve_min_laser_circle(P: Polygon, radius: float, axis_only: bool = False, *, seed: int = 0,
                           tau_r: Optional[float] = None, max_bands: int = 150) -> Solution:
    """Few lasers such that no cell contains a disk of the given radius.

    With at most ``max_bands`` useful candidates the full universe of
    pinned disks is built; above that the universe is grown lazily.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    G = grid_points(P, radius, seed)
    cands = useful_candidates(P, candidate_chords(P, G, radius, axis_only), radius)
    if len(cands) <= max_bands:
        D = pinned_disks(P, cands, radius)
        lasers = greedy_cover(cover_instance(P, cands, D)) if len(D) else []
        mode, rounds = "full", 0
    else:
        lasers, D, rounds = lazy_cover(P, cands, radius)
        mode = "lazy"
    log.info("circle cover: |G|=%d |C|=%d |D|=%d (%s) -> %d lasers", len(G), len(cands), len(D), mode,
             len(lasers))
    stats = {
        "grid_points": len(G),
        "candidates": len(cands),
        "pinned_disks": len(D),
        "universe": mode,
        "rounds": rounds,
        "seed": seed,
        "axis_only": axis_only,
    }
    name = "circle-greedy-axis" if axis_only else "circle-greedy"
    return evaluate(P, lasers, "incircle", algorithm=name, threshold=radius, stats=stats, tau_r=tau_r)
