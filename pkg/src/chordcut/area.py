"""Area cutting of simple polygons with arbitrary-orientation lasers.

Pipeline:

1. :func:`carve_convex_decomposition` carves convex pockets off P along
   diagonals, leaving a core polygon Q whose vertices are reflex vertices
   and bisector-hit edge endpoints.
2. :func:`build_subdivision` builds a balanced recursion tree over a
   triangulation of Q; every pocket is a single-node tree hanging off Q
   at its diagonal.
3. :func:`unrefine` merges small regions bottom-up, recording on every
   parent edge the area of the unseparated residual behind it.
4. :func:`place_area_lasers` puts lasers along the separating diagonals
   of the selected regions and grids the large convex leaves.

All region bookkeeping is combinatorial: regions are sets of leaves, edges
are keyed by their (exact) endpoint coordinates.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon as ShapelyPolygon

from chordcut.arrangement import decompose
from chordcut.convex import cut_convex_area, solve_convex_area
from chordcut.errors import ConvexInput, DegenerateSegment, EdgeNotFound, InvalidPolygon, SegmentOutside
from chordcut.geometry import (
    Point,
    Polygon,
    extend_to_chord,
    is_convex,
    make_polygon,
    orient,
    signed_area,
    vertical_chords,
)
from chordcut.solution import Solution, dedupe_chords, evaluate

log = logging.getLogger(__name__)

BISECTOR_PERTURBATION = 1e-12


def edge_key(p, q) -> frozenset:
    return frozenset((tuple(p), tuple(q)))


# --------------------------------------------------------------------------
# convex decomposition


@dataclass
class ConvexDecomposition:
    polygon: Polygon
    core_ring: tuple  # vertex indices of P forming Q, in ring order
    component_rings: list  # vertex index chains of the convex pockets
    L: frozenset

    @property
    def Q(self) -> Polygon:
        return make_polygon([self.polygon.outer[i] for i in self.core_ring], normalize=False, validate=False)

    @property
    def components(self) -> list:
        return [make_polygon([self.polygon.outer[i] for i in c]) for c in self.component_rings]

    def component_diagonals(self) -> list:
        pts = self.polygon.outer
        return [edge_key(pts[c[0]], pts[c[-1]]) for c in self.component_rings]


def _ring_reflex(pts, ring) -> list:
    m = len(ring)
    return [ring[i] for i in range(m) if orient(pts[ring[i - 1]], pts[ring[i]], pts[ring[(i + 1) % m]]) < 0]


def _bisector(pts, v: int, n: int, extra: float) -> tuple:
    p, c, q = pts[v - 1], pts[v], pts[(v + 1) % n]
    e1 = np.array([p[0] - c[0], p[1] - c[1]])
    e2 = np.array([q[0] - c[0], q[1] - c[1]])
    e1 /= np.hypot(*e1)
    e2 /= np.hypot(*e2)
    d = -(e1 + e2)
    if np.hypot(*d) < 1e-15:
        d = np.array([e1[1], -e1[0]])
    ang = math.atan2(d[1], d[0]) + extra
    return math.cos(ang), math.sin(ang)


def _shoot(pts, ring: list, v: int, d) -> Optional[tuple]:
    """First edge of ``ring`` hit by the ray from vertex v along d.

    Returns ``(i, x)`` with the edge (ring[i], ring[i+1]) and the hit point,
    or None when the first hit is a vertex (caller perturbs the direction).
    """
    c = pts[v]
    far = max(abs(pts[k][0] - c[0]) + abs(pts[k][1] - c[1]) for k in ring) * 4 + 1.0
    tip = (c[0] + far * d[0], c[1] + far * d[1])
    m = len(ring)
    best = None
    for i in range(m):
        a, b = ring[i], ring[(i + 1) % m]
        if a == v or b == v:
            continue
        pa, pb = pts[a], pts[b]
        o1 = orient(c, tip, pa)
        o2 = orient(c, tip, pb)
        if (o1 > 0 and o2 > 0) or (o1 < 0 and o2 < 0):
            continue
        # Segment ab meets the supporting line; parametrize along the ray.
        o3 = orient(pa, pb, c)
        o4 = orient(pa, pb, tip)
        if (o3 > 0 and o4 > 0) or (o3 < 0 and o4 < 0):
            continue
        ex, ey = pb[0] - pa[0], pb[1] - pa[1]
        den = d[0] * ey - d[1] * ex
        if den == 0:
            t = min(math.dist(c, pa), math.dist(c, pb))
            kind = "vertex"
        else:
            t = ((pa[0] - c[0]) * ey - (pa[1] - c[1]) * ex) / den
            kind = "vertex" if (o1 == 0 or o2 == 0) else "edge"
        if t <= 0:
            continue
        if best is None or t < best[0]:
            best = (t, i, kind)
    if best is None or best[2] == "vertex":
        return None
    t, i = best[0], best[1]
    return i, (c[0] + t * d[0], c[1] + t * d[1])


def _shortest_path(coords: list, src: int, dst: int) -> list:
    """Geodesic between two vertices of a simple polygon (visibility graph)."""
    m = len(coords)
    sp = ShapelyPolygon(coords)
    if not sp.is_valid:
        sp = sp.buffer(0)
    shapely.prepare(sp)
    nodes = [src, dst] + [
        i for i in range(m) if i not in (src, dst) and orient(coords[i - 1], coords[i], coords[(i + 1) % m]) < 0
    ]
    k = len(nodes)
    pairs = [(a, b) for a in range(k) for b in range(a + 1, k)]
    vis = np.zeros((k, k), dtype=bool)
    if pairs:
        lines = shapely.linestrings([[coords[nodes[a]], coords[nodes[b]]] for a, b in pairs])
        ok = shapely.covers(sp, lines)
        if not ok.all():
            # Boundary-grazing segments may fail an exact covers test by
            # rounding; accept them when they stay within a hair of P.
            bad = np.flatnonzero(~ok)
            span = max(sp.bounds[2] - sp.bounds[0], sp.bounds[3] - sp.bounds[1])
            fat = sp.buffer(1e-12 * span)
            ok[bad] = shapely.covers(fat, lines[bad])
        for (a, b), f in zip(pairs, ok):
            vis[a, b] = vis[b, a] = f
    # Consecutive ring vertices are always mutually visible.
    idx = {g: j for j, g in enumerate(nodes)}
    for j, g in enumerate(nodes):
        for h in ((g + 1) % m, (g - 1) % m):
            if h in idx:
                vis[j, idx[h]] = vis[idx[h], j] = True
    dist = [math.inf] * k
    prev = [-1] * k
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d0, a = heapq.heappop(heap)
        if d0 > dist[a]:
            continue
        if a == 1:
            break
        for b in np.flatnonzero(vis[a]):
            nd = d0 + math.dist(coords[nodes[a]], coords[nodes[b]])
            if nd < dist[b] - 1e-15:
                dist[b] = nd
                prev[b] = a
                heapq.heappush(heap, (nd, int(b)))
    if math.isinf(dist[1]):
        raise InvalidPolygon("no geodesic between the requested vertices")
    path = [1]
    while path[-1] != 0:
        path.append(prev[path[-1]])
    hops = [nodes[j] for j in reversed(path)]
    # Vertices touched by a hop (collinear, between its ends) become path
    # vertices, so no pocket is cut off by a diagonal running through them.
    out = [hops[0]]
    for a, b in zip(hops, hops[1:]):
        pa, pb = coords[a], coords[b]
        dx, dy = pb[0] - pa[0], pb[1] - pa[1]
        ll = dx * dx + dy * dy
        mids = []
        for k in range(m):
            if k in (a, b):
                continue
            pk = coords[k]
            t = ((pk[0] - pa[0]) * dx + (pk[1] - pa[1]) * dy) / ll
            if 0 < t < 1 and orient(pa, pb, pk) == 0:
                mids.append((t, k))
        out.extend(k for _, k in sorted(mids))
        out.append(b)
    return out


def _cyclic_slice(ring: list, i: int, j: int) -> list:
    """ring[i..j] inclusive, wrapping around."""
    out = [ring[i]]
    while i != j:
        i = (i + 1) % len(ring)
        out.append(ring[i])
    return out


def carve_convex_decomposition(P: Polygon) -> ConvexDecomposition:
    """Carve convex pockets off a simple polygon along diagonals.

    Geodesic triangles spanned by reflex vertices and the edges hit by their
    angle bisectors are removed first; convex pieces touching three or more
    vertices of the core set are then trimmed by the hull of those vertices.
    """
    if P.holes:
        raise InvalidPolygon("convex decomposition needs a simple polygon")
    pts = P.outer
    n = len(pts)
    if not _ring_reflex(pts, list(range(n))):
        raise ConvexInput("polygon is convex")
    pieces = [list(range(n))]
    done: list = []
    L: set = set()
    while pieces:
        ring = pieces.pop()
        reflex = _ring_reflex(pts, ring)
        if not reflex:
            done.append(ring)
            continue
        hit = None
        for v in reflex:
            for attempt in range(4):
                d = _bisector(pts, v, n, BISECTOR_PERTURBATION * attempt)
                hit = _shoot(pts, ring, v, d)
                if hit is not None:
                    break
            if hit is not None:
                break
        if hit is None:
            raise InvalidPolygon("angle bisectors keep hitting vertices")
        i, x = hit
        m = len(ring)
        pv = ring.index(v)
        a, b = ring[i], ring[(i + 1) % m]
        chain_a = _cyclic_slice(ring, pv, i)  # v ... a
        chain_b = _cyclic_slice(ring, (i + 1) % m, pv)  # b ... v
        coords_a = [pts[g] for g in chain_a] + [x]
        coords_b = [x] + [pts[g] for g in chain_b]
        path_a = [chain_a[j] for j in _shortest_path(coords_a, 0, len(chain_a) - 1)]
        pb = _shortest_path(coords_b, len(coords_b) - 1, 1)
        path_b = [chain_b[j - 1] for j in pb]  # v ... b
        L.update(path_a)
        L.update(path_b)
        pos = {g: k for k, g in enumerate(ring)}
        fwd = [path_a, list(reversed(path_b))]  # both follow ring order
        for path in fwd:
            for g1, g2 in zip(path, path[1:]):
                if (pos[g2] - pos[g1]) % m > 1:
                    pieces.append(_cyclic_slice(ring, pos[g1], pos[g2]))
    # Second step: trim convex pieces incident to three or more L vertices.
    comps: list = []
    stack = done
    while stack:
        ring = stack.pop()
        inL = [k for k, g in enumerate(ring) if g in L]
        if len(inL) <= 2:
            comps.append(ring)
            continue
        for k1, k2 in zip(inL, inL[1:] + inL[:1]):
            if (k2 - k1) % len(ring) > 1:
                stack.append(_cyclic_slice(ring, k1, k2))
    # Each remaining pocket is a chain between two L vertices; orient it so
    # that it starts at the first and ends at the second in P's ring order.
    rings = []
    for ring in comps:
        inL = [k for k, g in enumerate(ring) if g in L]
        if len(inL) != 2:
            raise InvalidPolygon("pocket without a unique diagonal")
        k1, k2 = inL
        if (k2 - k1) % len(ring) == 1:
            k1, k2 = k2, k1
        chain = _cyclic_slice(ring, k1, k2)
        rings.append(chain)
    core = tuple(sorted(L))
    return ConvexDecomposition(P, core, rings, frozenset(L))


# --------------------------------------------------------------------------
# subdivision trees


@dataclass
class SubNode:
    leaves: frozenset
    children: list
    parent: Optional[int]
    depth: int
    boundary: tuple = ()  # edge keys separating the node from the rest of its parent


@dataclass
class SubdivisionTree:
    """Recursion tree over a fixed set of convex leaves of a region s."""

    leaf_rings: list  # leaf polygons as tuples of points (CCW)
    leaf_area: list
    nodes: list
    root: int
    internal_edges: dict  # edge key -> (leaf, leaf)
    boundary_edges: dict  # edge key -> leaf (edges of s)

    @property
    def depth(self) -> int:
        return max(nd.depth for nd in self.nodes)

    @property
    def area(self) -> float:
        return float(sum(self.leaf_area))

    def preorder(self) -> list:
        out, stack = [], [self.root]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(reversed(self.nodes[v].children))
        return out

    def region_area(self, v: int) -> float:
        return float(sum(self.leaf_area[l] for l in self.nodes[v].leaves))

    def own_leaves(self, v: int) -> frozenset:
        nd = self.nodes[v]
        sub = frozenset().union(*(self.nodes[c].leaves for c in nd.children)) if nd.children else frozenset()
        return nd.leaves - sub

    def leaf_node(self, leaf: int) -> int:
        for k, nd in enumerate(self.nodes):
            if not nd.children and nd.leaves == frozenset([leaf]):
                return k
        for k, nd in enumerate(self.nodes):
            if leaf in self.own_leaves(k):
                return k
        raise EdgeNotFound(f"leaf {leaf} not found")


def _leaf_edges(leaf_rings: list):
    owners: dict = {}
    for l, ring in enumerate(leaf_rings):
        m = len(ring)
        for i in range(m):
            owners.setdefault(edge_key(ring[i], ring[(i + 1) % m]), []).append(l)
    internal, boundary = {}, {}
    for e, ls in owners.items():
        if len(ls) == 2:
            internal[e] = (ls[0], ls[1])
        elif len(ls) == 1:
            boundary[e] = ls[0]
        else:
            raise InvalidPolygon("leaf edges shared by more than two leaves")
    return internal, boundary


def triangulate(poly: Polygon) -> list:
    """Triangles of a simple polygon using its own vertices only, CCW each."""
    sp = ShapelyPolygon(poly.outer)
    tris = shapely.constrained_delaunay_triangles(sp)
    lookup = {tuple(p): Point(*p) for p in poly.outer}
    out = []
    for t in tris.geoms:
        c = list(t.exterior.coords)[:3]
        ring = []
        for x, y in c:
            key = (x, y)
            if key not in lookup:
                # use the nearest polygon vertex (CDT does not move them)
                key = min(lookup, key=lambda q: math.dist(q, (x, y)))
            ring.append(lookup[key])
        if signed_area(ring) < 0:
            ring.reverse()
        if signed_area(ring) > 0:
            out.append(tuple(ring))
    return out


def balanced_split_provider(poly: Polygon) -> list:
    """Default leaves: a triangulation (convex, at most 4 vertices)."""
    if is_convex(poly) and len(poly.outer) <= 4:
        return [tuple(poly.outer)]
    return triangulate(poly)


def _convex_pair(t1: tuple, t2: tuple, e: frozenset) -> Optional[tuple]:
    """The union of two triangles sharing edge e when it is a strictly convex quad."""
    p, q = (v for v in t1 if tuple(v) in e)
    i = t1.index(p)
    if tuple(t1[(i + 1) % 3]) != tuple(q):
        p, q = q, p
    r = next(v for v in t1 if tuple(v) not in e)
    s = next(v for v in t2 if tuple(v) not in e)
    quad = (q, r, p, s)
    if all(orient(quad[k - 1], quad[k], quad[(k + 1) % 4]) > 0 for k in range(4)):
        return quad
    return None


def tree_from_leaves(leaf_rings: list, *, merge_quads: bool = True) -> SubdivisionTree:
    """Balanced recursion tree: repeatedly split along the dual edge that best balances leaf counts.

    With ``merge_quads`` a node made of two triangles whose union is a
    convex quadrilateral becomes a single leaf.
    """
    if merge_quads and len(leaf_rings) > 1:
        T = tree_from_leaves(leaf_rings, merge_quads=False)
        internal = T.internal_edges
        lookup = {pair: e for e, pair in internal.items()}
        merged = {}
        for k, nd in enumerate(T.nodes):
            if len(nd.leaves) == 2 and all(len(leaf_rings[l]) == 3 for l in nd.leaves):
                a, b = sorted(nd.leaves)
                e = lookup.get((a, b)) or lookup.get((b, a))
                if e is not None:
                    quad = _convex_pair(leaf_rings[a], leaf_rings[b], e)
                    if quad is not None:
                        merged[k] = quad
        if merged:
            # Collapse: drop the children of merged nodes and renumber leaves.
            keep_rings, remap = [], {}
            for k, nd in enumerate(T.nodes):
                if k in merged:
                    idx = len(keep_rings)
                    keep_rings.append(merged[k])
                    for l in nd.leaves:
                        remap[l] = idx
            for l, ring in enumerate(leaf_rings):
                if l not in remap:
                    remap[l] = len(keep_rings)
                    keep_rings.append(ring)
            new_internal, new_boundary = _leaf_edges(keep_rings)
            nodes, ids = [], {}
            for k in T.preorder():
                nd = T.nodes[k]
                if nd.parent is not None and (nd.parent in merged or nd.parent not in ids):
                    continue
                ids[k] = len(nodes)
                nodes.append(SubNode(frozenset(remap[l] for l in nd.leaves), [], None, nd.depth, nd.boundary))
            for k, j in ids.items():
                nd = T.nodes[k]
                if nd.parent is not None:
                    nodes[j].parent = ids[nd.parent]
                    nodes[ids[nd.parent]].children.append(j)
            areas = [abs(signed_area(r)) for r in keep_rings]
            return SubdivisionTree(keep_rings, areas, nodes, ids[T.root], new_internal, new_boundary)
        return T
    internal, boundary = _leaf_edges(leaf_rings)
    areas = [abs(signed_area(r)) for r in leaf_rings]
    adj: dict = {l: [] for l in range(len(leaf_rings))}
    for e, (a, b) in internal.items():
        adj[a].append((b, e))
        adj[b].append((a, e))
    nodes: list = []

    def build(leaves: frozenset, parent: Optional[int], depth: int, sep: tuple) -> int:
        k = len(nodes)
        nodes.append(SubNode(leaves, [], parent, depth, sep))
        if len(leaves) == 1:
            return k
        # subtree sizes of the dual tree restricted to ``leaves``
        root = min(leaves)
        order, par, pedge = [], {root: None}, {root: None}
        stack = [root]
        while stack:
            u = stack.pop()
            order.append(u)
            for w, e in adj[u]:
                if w in leaves and w not in par:
                    par[w] = u
                    pedge[w] = e
                    stack.append(w)
        size = {u: 1 for u in order}
        for u in reversed(order):
            if par[u] is not None:
                size[par[u]] += size[u]
        total = len(leaves)
        best = min((u for u in order if par[u] is not None), key=lambda u: (max(size[u], total - size[u]), u))
        part = set()
        stack = [best]
        while stack:
            u = stack.pop()
            part.add(u)
            for w, _ in adj[u]:
                if w in leaves and par.get(w) == u:
                    stack.append(w)
        e = pedge[best]
        a = frozenset(leaves - part)
        b = frozenset(part)
        for sub in (a, b):
            c = build(sub, k, depth + 1, (e,))
            nodes[k].children.append(c)
        return k

    root = build(frozenset(range(len(leaf_rings))), None, 0, ())
    return SubdivisionTree(list(leaf_rings), areas, nodes, root, internal, boundary)


def build_subdivision(poly: Polygon, provider: Callable = balanced_split_provider) -> SubdivisionTree:
    """Recursion tree of convex leaves for a simple polygon."""
    return tree_from_leaves(provider(poly))


def reroot(T: SubdivisionTree, parent_edge) -> SubdivisionTree:
    """Re-hang the tree at the leaf adjacent to ``parent_edge``.

    Nodes on the path from the old root to that leaf swap parent and child;
    the region of each such node becomes ``s minus R_u`` for its new parent u.
    """
    key = parent_edge if isinstance(parent_edge, frozenset) else edge_key(*parent_edge)
    if key not in T.boundary_edges:
        raise EdgeNotFound("parent edge is not a boundary edge of exactly one leaf")
    leaf = T.boundary_edges[key]
    v0 = T.leaf_node(leaf)
    path = [v0]
    while T.nodes[path[-1]].parent is not None:
        path.append(T.nodes[path[-1]].parent)
    path.reverse()  # old root ... v0
    if len(path) == 1:
        return T
    allleaves = T.nodes[T.root].leaves
    nodes = [SubNode(nd.leaves, list(nd.children), nd.parent, nd.depth, nd.boundary) for nd in T.nodes]
    on_path = set(path)
    for i, v in enumerate(path):
        old = T.nodes[v]
        if v == v0:
            nodes[v].leaves = allleaves
            nodes[v].parent = None
            nodes[v].children = [c for c in old.children] + [path[i - 1]]
            nodes[v].boundary = ()
        else:
            u = path[i + 1]  # new parent
            nodes[v].leaves = allleaves - T.nodes[u].leaves
            nodes[v].parent = u
            nodes[v].children = [c for c in old.children if c != u] + ([path[i - 1]] if i > 0 else [])
            nodes[v].boundary = T.nodes[u].boundary
    # recompute depths
    stack = [(v0, 0)]
    while stack:
        v, d = stack.pop()
        nodes[v].depth = d
        for c in nodes[v].children:
            stack.append((c, d + 1))
    return SubdivisionTree(T.leaf_rings, T.leaf_area, nodes, v0, T.internal_edges, T.boundary_edges)


# --------------------------------------------------------------------------
# unrefinement


@dataclass
class Piece:
    """One part of the top-level partition of P with its recursion tree."""

    tree: SubdivisionTree
    parent_edge: Optional[frozenset] = None
    children: list = field(default_factory=list)


@dataclass
class Selection:
    piece: int
    node: int
    leaves: frozenset
    children: list  # current leaf sets of the surviving children
    hat: float
    leaf_hat: dict


def leaf_weights(piece: Piece, weights: dict) -> list:
    T = piece.tree
    lw = [0.0] * len(T.leaf_rings)
    for e, l in T.boundary_edges.items():
        if e != piece.parent_edge:
            lw[l] += weights.get(e, 0.0)
    return lw


def unrefine(pieces: list, order: Sequence[int], delta: float, weights: Optional[dict] = None):
    """Bottom-up merging of small regions.

    A piece loops while its residual (leaves not yet selected, plus the
    residual weights attached across its edges) exceeds delta, each time
    selecting a deepest node whose merged region exceeds delta.  Returns the
    selections per piece and the edge weights (``weights`` may pre-seed
    the weights of edges leading to pieces handled elsewhere).
    """
    weights = dict(weights or {})
    U: dict = {}
    for pid in order:
        s = pieces[pid]
        T = s.tree
        lw = leaf_weights(s, weights)
        hat = [T.leaf_area[l] + lw[l] for l in range(len(lw))]
        alive = set(range(len(lw)))
        dead_nodes: set = set()
        pre = {v: k for k, v in enumerate(T.preorder())}
        sel = []

        def rhat(v):
            return sum(hat[l] for l in T.nodes[v].leaves if l in alive)

        while sum(hat[l] for l in alive) > delta:
            cands = [v for v in pre if v not in dead_nodes and rhat(v) > delta]
            v = max(cands, key=lambda u: (T.nodes[u].depth, -pre[u]))
            cur = frozenset(l for l in T.nodes[v].leaves if l in alive)
            kids = []
            for c in T.nodes[v].children:
                if c in dead_nodes:
                    continue
                cl = frozenset(l for l in T.nodes[c].leaves if l in alive)
                if cl:
                    kids.append(cl)
            sel.append(Selection(pid, v, cur, kids, rhat(v), {l: hat[l] for l in cur}))
            alive -= cur
            stack = [v]
            while stack:
                u = stack.pop()
                dead_nodes.add(u)
                stack.extend(T.nodes[u].children)
        if s.parent_edge is not None:
            weights[s.parent_edge] = float(sum(hat[l] for l in alive))
        U[pid] = sel
    return U, weights


# --------------------------------------------------------------------------
# laser placement


def _edge_chord(P: Polygon, e: frozenset):
    a, b = tuple(e)
    try:
        return extend_to_chord(P, (a, b))
    except (SegmentOutside, DegenerateSegment):
        # Rounded diagonal grazing the boundary: extend from its midpoint.
        mx, my = 0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])
        dx, dy = (b[0] - a[0]) * 1e-6, (b[1] - a[1]) * 1e-6
        try:
            return extend_to_chord(P, ((mx - dx, my - dy), (mx + dx, my + dy)))
        except (SegmentOutside, DegenerateSegment):
            return None


def place_area_lasers(P: Polygon, pieces: list, U: dict, weights: dict, delta: float):
    """Lasers for every selection; returns (chords, stats)."""
    segments: list = []  # edge keys to laser
    grids: list = []  # leaf rings to grid
    stats = {"boundary_lasers": 0, "separator_lasers": 0, "parent_edge_lasers": 0, "weighted_edge_lasers": 0,
             "grid_leaves": 0}
    for pid, sels in U.items():
        s = pieces[pid]
        T = s.tree
        for sel in sels:
            cur = sel.leaves
            for e, (l1, l2) in T.internal_edges.items():
                if (l1 in cur) != (l2 in cur):
                    segments.append(e)
                    stats["boundary_lasers"] += 1
            if sel.node == T.root and s.parent_edge is not None:
                segments.append(s.parent_edge)
                stats["parent_edge_lasers"] += 1
            covered = set()
            for cl in sel.children:
                covered |= cl
                for e, (l1, l2) in T.internal_edges.items():
                    if l1 in cur and l2 in cur and ((l1 in cl) != (l2 in cl)):
                        segments.append(e)
                        stats["separator_lasers"] += 1
            own = cur - covered
            if own and sum(sel.leaf_hat[l] for l in own) > delta:
                for e, l in T.boundary_edges.items():
                    if l in own and e != s.parent_edge and weights.get(e, 0.0) > 0:
                        segments.append(e)
                        stats["weighted_edge_lasers"] += 1
                for e, (l1, l2) in T.internal_edges.items():
                    if l1 in own and l2 in own:
                        segments.append(e)
                for l in own:
                    if T.leaf_area[l] > delta:
                        grids.append(T.leaf_rings[l])
                        stats["grid_leaves"] += 1
    chords = []
    seen = set()
    for e in segments:
        if e in seen:
            continue
        seen.add(e)
        c = _edge_chord(P, e)
        if c is not None:
            chords.append(c)
    for ring in grids:
        leaf = make_polygon(ring)
        for c in solve_convex_area(leaf, delta).lasers:
            try:
                chords.append(extend_to_chord(P, (c.a, c.b)))
            except (SegmentOutside, DegenerateSegment):
                mx, my = c.midpoint
                dx, dy = (c.b[0] - c.a[0]) * 1e-3, (c.b[1] - c.a[1]) * 1e-3
                chords.append(extend_to_chord(P, ((mx - dx, my - dy), (mx + dx, my + dy))))
    return dedupe_chords(chords, P.tau_snap * 10), stats


def _bisecting_vertical(P: Polygon, cell_poly) -> Optional[object]:
    x0, _, x1, _ = cell_poly.bounds
    total = cell_poly.area
    lo, hi = x0, x1
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        left = cell_poly.intersection(shapely.box(x0 - 1, cell_poly.bounds[1] - 1, mid, cell_poly.bounds[3] + 1)).area
        if left < 0.5 * total:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    inner = cell_poly.buffer(-1e-12 * max(1.0, x1 - x0))
    for c in vertical_chords(P, x):
        if LineString([c.a, c.b]).intersects(inner if not inner.is_empty else cell_poly):
            return c
    return None


def repair(P: Polygon, chords: list, delta: float, max_rounds: int = 1000):
    """Add area-bisecting vertical chords to any cell still larger than delta."""
    added = 0
    chords = list(chords)
    for _ in range(max_rounds):
        arr = decompose(P, chords, validate=False)
        big = [c for c in arr.cells if c.area > delta * (1 + 1e-9)]
        if not big:
            break
        progress = False
        for cell in big:
            c = _bisecting_vertical(P, cell.boundary.to_shapely())
            if c is not None:
                chords.append(c)
                added += 1
                progress = True
        chords = dedupe_chords(chords, P.tau_snap * 10)
        if not progress:
            break
    return chords, added


@dataclass
class AreaPipeline:
    decomposition: ConvexDecomposition
    pieces: list
    order: list
    selections: dict
    weights: dict
    chords: list
    stats: dict


def build_pieces(dec: ConvexDecomposition, provider: Callable = balanced_split_provider) -> tuple:
    """Pieces (root = Q, children = convex pockets) in bottom-up order."""
    pts = dec.polygon.outer
    Q = dec.Q
    root = Piece(build_subdivision(Q, provider))
    pieces = [root]
    diagonals = dec.component_diagonals()
    for ring, diag in zip(dec.component_rings, diagonals):
        comp = make_polygon([pts[i] for i in ring], normalize=False, validate=False)
        T = tree_from_leaves([tuple(comp.outer)])
        pieces.append(Piece(reroot(T, diag), diag))
        root.children.append(len(pieces) - 1)
    order = list(range(1, len(pieces))) + [0]
    return pieces, order


def area_pipeline(P: Polygon, delta: float, provider: Callable = balanced_split_provider) -> AreaPipeline:
    dec = carve_convex_decomposition(P)
    pieces, order = build_pieces(dec, provider)
    U, weights = unrefine(pieces, order, delta)
    chords, stats = place_area_lasers(P, pieces, U, weights, delta)
    stats["selected"] = sum(len(v) for v in U.values())
    stats["core_vertices"] = len(dec.L)
    stats["components"] = len(dec.component_rings)
    stats["tree_depth"] = pieces[0].tree.depth
    return AreaPipeline(dec, pieces, order, U, weights, chords, stats)


def solve_min_laser_area(P: Polygon, delta: float, provider: Callable = balanced_split_provider) -> Solution:
    """Lasers cutting a simple polygon into pieces of area at most ``delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if P.holes:
        raise InvalidPolygon("area cutting is only available for simple polygons")
    if is_convex(P):
        sol = cut_convex_area(P, delta)
        sol.algorithm = "convex-grid"
        return sol
    pipe = area_pipeline(P, delta, provider)
    chords, added = repair(P, pipe.chords, delta)
    stats = dict(pipe.stats)
    stats["repair_lasers"] = added
    return evaluate(P, chords, "area", algorithm="area-unrefine", threshold=delta, stats=stats)
