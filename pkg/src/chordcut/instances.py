"""Deterministic random instance generators."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import shapely
from shapely.geometry import Polygon as ShapelyPolygon, box
from shapely.ops import unary_union

from chordcut.errors import InvalidPolygon, UnsatisfiedAssignment
from chordcut.geometry import Chord, Polygon, horizontal_chords, make_polygon, ring_from_shapely, vertical_chords


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def gen_random_simple(n: int, seed: int = 0, *, spikiness: float = 0.6, radius: float = 10.0) -> Polygon:
    """Star-shaped simple polygon with exactly n vertices.

    Angles are sorted random samples around the origin and radii vary by
    ``spikiness``; sorting by angle keeps the ring simple.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = _rng(seed)
    for _ in range(100):
        gaps = rng.uniform(0.3, 1.0, n)
        ang = np.cumsum(gaps)
        ang = 2 * math.pi * (ang - ang[0]) / ang[-1] * (n - 1) / n + rng.uniform(0, 2 * math.pi)
        r = radius * (1 - spikiness * rng.uniform(0, 1, n)) if spikiness > 0 else np.full(n, radius)
        pts = [(float(round(ri * math.cos(a), 9)), float(round(ri * math.sin(a), 9))) for ri, a in zip(r, ang)]
        try:
            P = make_polygon(pts)
        except InvalidPolygon:
            continue
        if P.n == n:
            return P
    raise InvalidPolygon("failed to generate a simple polygon")


def gen_random_convex(n: int, seed: int = 0, *, area: Optional[float] = None) -> Polygon:
    """Convex polygon with n vertices on a random ellipse, optionally scaled to ``area``."""
    if n < 3:
        raise ValueError("n must be at least 3")
    rng = _rng(seed)
    a, b = 1.0, float(rng.uniform(0.25, 1.0))
    rot = float(rng.uniform(0, math.pi))
    for _ in range(100):
        ang = np.sort(rng.uniform(0, 2 * math.pi, n))
        pts = [(a * math.cos(t), b * math.sin(t)) for t in ang]
        pts = [(x * math.cos(rot) - y * math.sin(rot), x * math.sin(rot) + y * math.cos(rot)) for x, y in pts]
        try:
            P = make_polygon(pts)
        except InvalidPolygon:
            continue
        if P.n == n and min(math.dist(P.outer[i], P.outer[i - 1]) for i in range(n)) > 1e-3:
            break
    else:
        raise InvalidPolygon("failed to generate a convex polygon")
    if area is not None:
        P = make_polygon([(x * math.sqrt(area / P.area), y * math.sqrt(area / P.area)) for x, y in P.outer])
    return P


def _polyomino(cells: set) -> ShapelyPolygon:
    return unary_union([box(x, y, x + 1, y + 1) for x, y in cells])


def gen_random_orthogonal(n: int, seed: int = 0, *, cell: float = 1.0) -> Polygon:
    """Simply connected orthogonal polygon with at least n vertices.

    Grows a polyomino one grid cell at a time (rejecting growth that would
    enclose a hole) until the boundary has n or more vertices.
    """
    if n < 4:
        raise ValueError("an orthogonal polygon has at least 4 vertices")
    rng = _rng(seed)
    cells = {(0, 0)}
    nbrs = ((1, 0), (-1, 0), (0, 1), (0, -1))
    while True:
        shape = _polyomino(cells)
        P = ring_from_shapely(shape)[0]
        if P.n >= n:
            return P.scaled(cell) if cell != 1.0 else P
        frontier = sorted({(x + dx, y + dy) for x, y in cells for dx, dy in nbrs} - cells)
        rng.shuffle(frontier)
        for c in frontier:
            g = _polyomino(cells | {c})
            if g.geom_type == "Polygon" and len(g.interiors) == 0:
                cells.add(c)
                break


def gen_random_holed(n: int, holes: int = 1, seed: int = 0, *, radius: float = 10.0) -> Polygon:
    """Star-shaped outer ring with n vertices and small disjoint hole polygons."""
    rng = _rng(seed)
    for _ in range(200):
        outer = gen_random_simple(n, int(rng.integers(0, 2**31)), spikiness=0.25, radius=radius)
        so = ShapelyPolygon(outer.outer)
        inner = so.buffer(-0.08 * radius)
        placed = []
        ok = True
        for _h in range(holes):
            for _try in range(200):
                cx, cy = rng.uniform(-0.7 * radius, 0.7 * radius, 2)
                k = int(rng.integers(3, 6))
                rad = rng.uniform(0.06, 0.16) * radius
                ang = np.sort(rng.uniform(0, 2 * math.pi, k))
                pts = [(float(round(cx + rad * math.cos(t), 9)), float(round(cy + rad * math.sin(t), 9))) for t in ang]
                hp = ShapelyPolygon(pts)
                if not hp.is_valid or hp.area < 1e-3 * radius**2:
                    continue
                if not inner.contains(hp):
                    continue
                if any(hp.distance(q) < 0.04 * radius for q in placed):
                    continue
                placed.append(hp)
                break
            else:
                ok = False
                break
        if not ok:
            continue
        try:
            return make_polygon(outer.outer, [list(h.exterior.coords)[:-1] for h in placed])
        except InvalidPolygon:
            continue
    raise InvalidPolygon("failed to place the holes")


def gen_random_histogram(steps: int, seed: int = 0, *, width: float = 1.0, max_height: float = 4.0,
                         min_height: float = 0.5) -> Polygon:
    """Histogram over the base [0, steps*width] x {0}: a staircase of random heights."""
    if steps < 1:
        raise ValueError("steps must be positive")
    rng = _rng(seed)
    hs = np.round(rng.uniform(min_height, max_height, steps), 3)
    for i in range(1, steps):
        if hs[i] == hs[i - 1]:
            hs[i] += 0.125
    xs = np.round(np.cumsum(np.concatenate([[0.0], rng.uniform(0.5, 1.5, steps) * width])), 3)
    pts = [(float(xs[0]), 0.0), (float(xs[-1]), 0.0)]
    for i in range(steps - 1, -1, -1):
        pts.append((float(xs[i + 1]), float(hs[i])))
        pts.append((float(xs[i]), float(hs[i])))
    return make_polygon(pts)


def gen_random_pseudo_histogram(steps: int, pockets: int, seed: int = 0, *, pocket_size: float = 0.3) -> Polygon:
    """Histogram with small rectangular pockets hanging below the base.

    The pockets hang from the base edge, so the base line stays a window of
    the polygon and the pockets' area is ``pocket_size**2`` each.
    """
    rng = _rng(seed)
    H = gen_random_histogram(steps, seed)
    sp = H.to_shapely()
    x0, x1 = H.bbox[0], H.bbox[2]
    placed = []
    for _ in range(pockets * 50):
        if len(placed) == pockets:
            break
        a = float(np.round(rng.uniform(x0 + 0.1, x1 - 0.1 - pocket_size), 3))
        if any(abs(a - b) < pocket_size + 0.1 for b in placed):
            continue
        placed.append(a)
    for a in placed:
        sp = sp.union(box(a, -pocket_size, a + pocket_size, 0))
    return ring_from_shapely(shapely.normalize(sp))[0]


# --------------------------------------------------------------------------
# 3CNF reduction gadgets


@dataclass(frozen=True)
class CnfFormula:
    """3CNF formula over variables 1..num_vars; a literal is +i or -i."""

    num_vars: int
    clauses: tuple

    def __post_init__(self):
        cl = tuple(tuple(int(l) for l in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        for j, c in enumerate(cl):
            if len(c) != 3:
                raise ValueError(f"clause {j} does not have exactly 3 literals")
            if any(l == 0 or abs(l) > self.num_vars for l in c):
                raise ValueError(f"clause {j} uses a variable outside 1..{self.num_vars}")
            if len({abs(l) for l in c}) != 3:
                raise ValueError(f"clause {j} repeats a variable")

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def n(self) -> int:
        return self.num_vars

    def satisfied_by(self, assignment: Sequence) -> bool:
        return all(any((l > 0) == bool(assignment[abs(l) - 1]) for l in c) for c in self.clauses)


@dataclass(frozen=True)
class Room:
    """Axis-parallel room of a gadget; ``kind`` is variable, clause or separator."""

    kind: str
    rect: tuple
    label: str

    @property
    def area(self) -> float:
        x0, y0, x1, y1 = self.rect
        return (x1 - x0) * (y1 - y0)


ROOM_COLORS = {"variable": "blue", "clause": "pink", "separator": "yellow"}


@dataclass(frozen=True)
class GadgetInstance:
    """Polygon of a 3CNF reduction together with its laser budget and threshold."""

    polygon: Polygon
    k: int
    threshold: float
    measure: str
    formula: CnfFormula
    rooms: tuple
    corridor_width: float
    box: tuple
    witness_lasers: Optional[tuple] = None
    witness_roles: Optional[tuple] = None

    def room_counts(self) -> dict:
        counts = {kind: 0 for kind in ROOM_COLORS}
        for r in self.rooms:
            counts[r.kind] += 1
        return counts


class _Layout:
    """Grid coordinates shared by the area and the in-circle gadget."""

    def __init__(self, phi: CnfFormula):
        m, n = phi.m, phi.n
        self.m, self.n = m, n
        self.W = 7 * m + 2
        self.H = 3 * n + 4
        self.w = 1.0 / (100 * max(m, n))
        self.xs = [0] + list(range(2, self.W + 1))
        self.ys = list(range(0, 3 * n + 1)) + [3 * n + 2, 3 * n + 4]
        self.sep_x = [0] + [7 * j + 2 for j in range(m + 1)]
        self.sep_y = [3 * i for i in range(n + 1)] + [3 * n + 2, 3 * n + 4]

    def at_x(self, c: float) -> float:
        """Coordinate of the centerline of the vertical corridor along x=c."""
        return min(max(c, self.w / 2), self.W - self.w / 2)

    def at_y(self, c: float) -> float:
        return min(max(c, self.w / 2), self.H - self.w / 2)

    def corridors(self) -> list:
        h = self.w / 2
        out = [box(self.at_x(c) - h, 0, self.at_x(c) + h, self.H) for c in self.xs]
        out += [box(0, self.at_y(c) - h, self.W, self.at_y(c) + h) for c in self.ys]
        return out


def _core_rooms(phi: CnfFormula, square: bool) -> list:
    """Variable and clause rooms; ``square`` swaps each for a 1.5 x 1.5 square on the same center."""

    def room(kind, x0, y0, x1, y1, label):
        if square:
            cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
            x0, y0, x1, y1 = cx - 0.75, cy - 0.75, cx + 0.75, cy + 0.75
        return Room(kind, (x0, y0, x1, y1), label)

    n = phi.n
    rooms = [room("variable", 0.5, 3 * (i - 1) + 0.5, 1.5, 3 * i - 0.5, f"x{i}") for i in range(1, n + 1)]
    for j, clause in enumerate(phi.clauses, start=1):
        base = 7 * (j - 1) + 2
        for pos, lit in enumerate(sorted(clause, key=abs)):
            i = abs(lit)
            y0 = 3 * (i - 1) + (0.5 if lit > 0 else 1.5)
            x0 = base + 0.5 + 2 * pos
            rooms.append(room("clause", x0, y0, x0 + 2, y0 + 1, f"c{j}:{'' if lit > 0 else '~'}x{i}"))
        rooms.append(room("clause", base + 1.5, 3 * n + 0.5, base + 3.5, 3 * n + 1.5, f"c{j}:u1"))
        rooms.append(room("clause", base + 3.5, 3 * n + 2.5, base + 5.5, 3 * n + 3.5, f"c{j}:u2"))
    return rooms


def _overlap(rects: np.ndarray, r) -> np.ndarray:
    """Overlap areas between each row of ``rects`` (x0, y0, x1, y1) and rectangle ``r``."""
    dx = np.minimum(rects[:, 2], r[2]) - np.maximum(rects[:, 0], r[0])
    dy = np.minimum(rects[:, 3], r[3]) - np.maximum(rects[:, 1], r[1])
    return np.clip(dx, 0, None) * np.clip(dy, 0, None)


def _overlap_matrix(rects: np.ndarray, cells: np.ndarray) -> np.ndarray:
    dx = np.minimum(rects[:, None, 2], cells[None, :, 2]) - np.maximum(rects[:, None, 0], cells[None, :, 0])
    dy = np.minimum(rects[:, None, 3], cells[None, :, 3]) - np.maximum(rects[:, None, 1], cells[None, :, 1])
    return np.clip(dx, 0, None) * np.clip(dy, 0, None)


def _possible_cells(L: _Layout) -> np.ndarray:
    """Every rectangle that can bound a witness cell, over all variable and clause laser choices."""
    cols = [(L.at_x(0), L.at_x(2))]
    for j in range(1, L.m + 1):
        s0, s1 = L.at_x(7 * j - 5), L.at_x(7 * j + 2)
        A, B = (7 * j - 3, 7 * j - 2), (7 * j - 1, 7 * j)
        cols += [(s0, a) for a in A] + [(a, b) for a in A for b in B] + [(b, s1) for b in B]
    rows = []
    for i in range(1, L.n + 1):
        s0, s1 = L.at_y(3 * i - 3), float(3 * i)
        rows += [(s0, v) for v in (3 * i - 2, 3 * i - 1)] + [(v, s1) for v in (3 * i - 2, 3 * i - 1)]
    rows += [(3 * L.n, 3 * L.n + 2), (3 * L.n + 2, L.at_y(L.H))]
    return np.array([(x0, y0, x1, y1) for x0, x1 in cols for y0, y1 in rows], dtype=float)


_GAP = 0.02  # clearance between distinct rooms
_AREA_CAP = 1.5  # largest piece of a variable or clause room left by the witness lasers


@dataclass
class _Job:
    """Candidate rooms for one separator corridor, in order of preference."""

    label: str
    rects: np.ndarray
    indptr: np.ndarray = None  # CSR rows: possible cells each candidate overlaps
    cols: np.ndarray = None
    vals: np.ndarray = None


def _job_rects(L: _Layout, vertical: bool, c: int, at_end: bool, shapes: list, alphas: list,
               step: float) -> np.ndarray:
    """Rectangles crossing the separator line through ``c``.

    Ordered by how far the room sits off center, then by its distance from
    the chosen end of the corridor, then by shape.
    """
    span = L.H if vertical else L.W
    hi_lim = float(L.W if vertical else L.H)
    blocks = []
    for ai, alpha in enumerate(alphas):
        for si, (a, b) in enumerate(shapes):  # a across the line, b along it
            lo = c - alpha * a
            if lo < -1e-12 or lo + a > hi_lim + 1e-12:
                continue
            ts = np.round(np.arange(0.0, span - b + 1e-9, step), 10)
            starts = (span - b - ts) if at_end else ts
            one = np.ones(len(ts))
            if vertical:
                r = np.column_stack([lo * one, starts, (lo + a) * one, starts + b])
            else:
                r = np.column_stack([starts, lo * one, starts + b, (lo + a) * one])
            key = np.column_stack([ai * one, ts, si * one])
            blocks.append((r, key))
    rects = np.concatenate([r for r, _ in blocks])
    keys = np.concatenate([k for _, k in blocks])
    order = np.lexsort((keys[:, 2], keys[:, 1], keys[:, 0]))
    return rects[order]


def _disjoint(rects: np.ndarray, r) -> np.ndarray:
    gx = np.maximum(rects[:, 0], r[0] - _GAP) < np.minimum(rects[:, 2], r[2] + _GAP)
    gy = np.maximum(rects[:, 1], r[1] - _GAP) < np.minimum(rects[:, 3], r[3] + _GAP)
    return ~(gx & gy)


def _place_separators(L: _Layout, core: list, square: bool, max_nodes: int = 5000) -> list:
    """End rooms for all separator corridors, found by a backtracking search.

    Area gadget: the pieces any room can leave in a possible witness cell,
    plus that cell's corridor area, must stay below 2. In-circle gadget:
    some separator laser must cut the square into two rectangles of
    inradius at most 5/8.
    """
    core_r = np.array([r.rect for r in core], dtype=float)
    cells = _possible_cells(L)
    corr = unary_union(L.corridors())
    slack = 2 - 1e-3 - np.array([corr.intersection(box(*c)).area for c in cells])
    for r in core_r:
        slack -= np.minimum(_overlap(cells, r), _AREA_CAP)
    families = _laser_families(L)
    if square:
        shapes = [(1.5, 1.5)]
        alphas = [0.5, 0.4, 0.6, 0.3, 0.7, 0.2, 0.8, 0.0, 1.0]
    else:
        shapes = [(a, 2.0 / a) for a in (1.0, 0.8, 1.25, 0.5, 1.6, 2.0, 0.4, 2.5, 4.0)]
        alphas = [0.5, 0.4, 0.6, 0.3, 0.7, 0.2, 0.8, 0.1, 0.9, 0.0, 1.0]
    specs = [(True, c, k % 2 == 0) for k, c in enumerate(L.sep_x)]
    specs += [(False, c, k % 2 == 1) for k, c in enumerate(L.sep_y)]
    jobs = []
    for vertical, c, at_end in specs:
        rects = _job_rects(L, vertical, c, at_end, shapes, alphas, 0.05 if square else 0.1)
        ok = np.ones(len(rects), dtype=bool)
        for r in core_r:
            ok &= _disjoint(rects, r)
        rects = rects[ok]
        if square:
            rects = rects[[_square_split(r, families) for r in rects]]
            job = _Job(f"sep:{'x' if vertical else 'y'}={c}", rects)
        else:
            ax = 0 if vertical else 1
            near = np.flatnonzero((cells[:, ax] < rects[:, ax + 2].max()) & (cells[:, ax + 2] > rects[:, ax].min()))
            kept, rows, cols, vals = [], [], [], []
            for start in range(0, len(rects), 2000):
                ov = _overlap_matrix(rects[start:start + 2000], cells[near])
                keep = np.flatnonzero(np.all(ov <= slack[near], axis=1))
                r_nz, c_nz = np.nonzero(ov[keep] > 1e-12)
                rows.append(r_nz + sum(len(k) for k in kept))
                cols.append(near[c_nz])
                vals.append(ov[keep][r_nz, c_nz])
                kept.append(start + keep)
            rects = rects[np.concatenate(kept)] if kept else rects[:0]
            rows = np.concatenate(rows) if rows else np.zeros(0, dtype=int)
            indptr = np.concatenate([[0], np.cumsum(np.bincount(rows, minlength=len(rects)))])
            job = _Job(f"sep:{'x' if vertical else 'y'}={c}", rects, indptr,
                       np.concatenate(cols) if cols else rows, np.concatenate(vals) if vals else np.zeros(0))
        jobs.append(job)

    def valid(job, placed, slack):
        ok = np.ones(len(job.rects), dtype=bool)
        for r in placed:
            ok &= _disjoint(job.rects, r)
        if not square and len(job.vals):
            bad = job.vals > slack[job.cols]
            rows = np.repeat(np.arange(len(job.rects)), np.diff(job.indptr))
            ok[rows[bad]] = False
        return np.flatnonzero(ok)

    nodes = [0]

    def search(todo, placed, slack):
        if not todo:
            return {}
        options = [(valid(jobs[j], placed.values(), slack), j) for j in todo]
        idx, j = min(options, key=lambda o: (len(o[0]), o[1]))
        tried = []
        for t in idx:
            r = jobs[j].rects[t]
            if any(not _disjoint(r[None, :], q)[0] for q in tried):
                continue  # a near copy of a placement that already failed
            nodes[0] += 1
            if nodes[0] > max_nodes:
                return None
            s2 = slack
            if not square:
                lo, hi = jobs[j].indptr[t], jobs[j].indptr[t + 1]
                s2 = slack.copy()
                s2[jobs[j].cols[lo:hi]] -= jobs[j].vals[lo:hi]
            rest = search([q for q in todo if q != j], {**placed, j: r}, s2)
            if rest is not None:
                return {j: r, **rest}
            tried.append(r)
        return None

    found = search(list(range(len(jobs))), {}, slack)
    if found is None:
        raise RuntimeError("no placement of the separator rooms passes the cell check")
    return [Room("separator", tuple(float(v) for v in found[j]), jobs[j].label) for j in range(len(jobs))]


def _laser_families(L: _Layout) -> list:
    """Lines present in every witness: each family lists the positions one laser may take."""
    fam = [(True, (L.at_x(c),)) for c in L.sep_x] + [(False, (L.at_y(c),)) for c in L.sep_y]
    fam += [(False, (3 * i - 2, 3 * i - 1)) for i in range(1, L.n + 1)]
    for j in range(1, L.m + 1):
        fam += [(True, (7 * j - 3, 7 * j - 2)), (True, (7 * j - 1, 7 * j))]
    return fam


def _square_split(r, families) -> bool:
    """Some laser cuts the square into two rectangles of inradius at most 5/8, wherever it lies."""
    for vertical, pos in families:
        lo, hi = (r[0], r[2]) if vertical else (r[1], r[3])
        if all(lo < c < hi and c - lo <= 1.25 + 1e-12 and hi - c <= 1.25 + 1e-12 for c in pos):
            return True
    return False


def _gadget_polygon(L: _Layout, rooms: list) -> Polygon:
    shape = unary_union(L.corridors() + [box(*r.rect) for r in rooms])
    shape = shapely.normalize(shape.simplify(0))
    polys = ring_from_shapely(shape)
    if shape.geom_type != "Polygon" or len(polys) != 1:
        raise InvalidPolygon("gadget rooms and corridors do not form one polygon")
    return polys[0]


def _full_chord(P: Polygon, vertical: bool, c: float) -> Chord:
    chords = vertical_chords(P, c) if vertical else horizontal_chords(P, c)
    return max(chords, key=lambda ch: ch.length)


def _crosses(rect, x: float) -> bool:
    return rect[0] < x < rect[2]


def _witness(phi: CnfFormula, L: _Layout, P: Polygon, rooms: list, assignment: Sequence):
    lasers, roles = [], []
    for c in L.sep_x:
        lasers.append(_full_chord(P, True, L.at_x(c)))
        roles.append(f"separator x={c}")
    for c in L.sep_y:
        lasers.append(_full_chord(P, False, L.at_y(c)))
        roles.append(f"separator y={c}")
    for i in range(1, phi.n + 1):
        y = 3 * (i - 1) + (1 if assignment[i - 1] else 2)
        lasers.append(_full_chord(P, False, y))
        roles.append(f"variable x{i}")
    by_label = {r.label: r for r in rooms}
    for j, clause in enumerate(phi.clauses, start=1):
        need = [by_label[f"c{j}:u1"].rect, by_label[f"c{j}:u2"].rect]
        for lit in clause:
            if (lit > 0) != bool(assignment[abs(lit) - 1]):
                need.append(by_label[f"c{j}:{'' if lit > 0 else '~'}x{abs(lit)}"].rect)
        lines = range(7 * (j - 1) + 3, 7 * j + 2)
        pair = next((a, b) for a in lines for b in lines
                    if a < b and all(_crosses(r, a) or _crosses(r, b) for r in need))
        for x in pair:
            lasers.append(_full_chord(P, True, x))
            roles.append(f"clause c{j}")
    return tuple(lasers), tuple(roles)


def _gen_gadget(phi: CnfFormula, assignment, square: bool) -> GadgetInstance:
    if assignment is not None:
        assignment = [bool(v) for v in assignment]
        if len(assignment) != phi.n:
            raise ValueError(f"assignment has {len(assignment)} values for {phi.n} variables")
        if not phi.satisfied_by(assignment):
            raise UnsatisfiedAssignment("the assignment leaves a clause unsatisfied")
    L = _Layout(phi)
    core = _core_rooms(phi, square)
    rooms = core + _place_separators(L, core, square)
    P = _gadget_polygon(L, rooms)
    witness = roles = None
    if assignment is not None:
        witness, roles = _witness(phi, L, P, rooms, assignment)
    return GadgetInstance(
        polygon=P,
        k=3 * phi.m + 2 * phi.n + 5,
        threshold=0.625 if square else 2.0,
        measure="incircle" if square else "area",
        formula=phi,
        rooms=tuple(rooms),
        corridor_width=L.w,
        box=(0.0, 0.0, float(L.W), float(L.H)),
        witness_lasers=witness,
        witness_roles=roles,
    )


def gen_area_gadget(phi: CnfFormula, assignment: Optional[Sequence] = None) -> GadgetInstance:
    """Reduction instance for the area measure: rooms of area 2, budget k = 3m+2n+5.

    With a satisfying ``assignment`` the instance carries a witness of k lasers
    whose cells all have area below 2.
    """
    return _gen_gadget(phi, assignment, square=False)


def gen_circle_gadget(phi: CnfFormula, assignment: Optional[Sequence] = None) -> GadgetInstance:
    """In-circle version of :func:`gen_area_gadget`: square 1.5 x 1.5 rooms and threshold 5/8."""
    return _gen_gadget(phi, assignment, square=True)
