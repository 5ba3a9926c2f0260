"""Pure-Python/NumPy implementations of the hot geometric kernels.

The compiled module ``chordcut._ckernels`` exposes the same functions with the
same signatures; :mod:`chordcut.kernels` picks one of the two at import time.
"""

from __future__ import annotations

import numpy as np

# Shewchuk's static error bound for the 2x2 orientation determinant.
_ORIENT_ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


def orient2d_exact(ax, ay, bx, by, cx, cy) -> float:
    """Sign-exact orientation evaluated with integer arithmetic.

    Every finite double is an integer over a power of two, so scaling all six
    coordinates to the largest denominator makes the determinant an exact
    integer expression.
    """
    ratios = [float(v).as_integer_ratio() for v in (ax, ay, bx, by, cx, cy)]
    den = max(d for _, d in ratios)
    iax, iay, ibx, iby, icx, icy = (n * (den // d) for n, d in ratios)
    det = (iax - icx) * (iby - icy) - (iay - icy) * (ibx - icx)
    if det > 0:
        return 1.0
    if det < 0:
        return -1.0
    return 0.0


def orient2d(ax, ay, bx, by, cx, cy) -> float:
    """Twice the signed area of triangle abc, with an exact sign.

    Positive when a, b, c turn counterclockwise.  The magnitude is the
    floating-point estimate unless the filter fails, in which case only the
    sign (+1, -1 or 0) is meaningful.
    """
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    detsum = abs(detleft) + abs(detright)
    if abs(det) > _ORIENT_ERRBOUND * detsum:
        return det
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def point_in_ring(x: float, y: float, ring: np.ndarray) -> int:
    """Locate a point against one closed ring: 1 inside, 0 on it, -1 outside."""
    n = len(ring)
    inside = False
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        if (ay > y) != (by > y):
            o = orient2d(ax, ay, bx, by, x, y)
            if o == 0.0:
                return 0
            if (o > 0) == (by > ay):
                inside = not inside
        elif ay == y and by == y:
            if min(ax, bx) <= x <= max(ax, bx):
                return 0
        if ax == x and ay == y:
            return 0
    return 1 if inside else -1


def points_in_ring(xs: np.ndarray, ys: np.ndarray, ring: np.ndarray, tol: float) -> np.ndarray:
    """Vectorised location of many points against one ring.

    Points within ``tol`` of the ring are reported as 0 (boundary).  Crossing
    parity is evaluated in floating point; callers that need an exact answer
    for a single point use :func:`point_in_ring`.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    a = np.asarray(ring, dtype=float)
    b = np.roll(a, -1, axis=0)
    ax, ay = a[:, 0][None, :], a[:, 1][None, :]
    bx, by = b[:, 0][None, :], b[:, 1][None, :]
    px, py = xs[:, None], ys[:, None]
    straddle = (ay > py) != (by > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        xint = ax + (py - ay) * (bx - ax) / (by - ay)
    crossings = np.count_nonzero(straddle & (xint > px), axis=1)
    result = np.where(crossings % 2 == 1, 1, -1)
    d = _dist_matrix(xs, ys, np.column_stack([a, b]))
    result[(d <= tol).any(axis=1)] = 0
    return result


def _dist_matrix(xs: np.ndarray, ys: np.ndarray, segs: np.ndarray) -> np.ndarray:
    segs = np.asarray(segs, dtype=float).reshape(-1, 4)
    ax, ay, bx, by = (segs[:, k][None, :] for k in range(4))
    px, py = np.asarray(xs, dtype=float)[:, None], np.asarray(ys, dtype=float)[:, None]
    dx, dy = bx - ax, by - ay
    ll = dx * dx + dy * dy
    with np.errstate(divide="ignore", invalid="ignore"):
        t = ((px - ax) * dx + (py - ay) * dy) / ll
    t = np.where(ll > 0, np.clip(t, 0.0, 1.0), 0.0)
    qx, qy = ax + t * dx - px, ay + t * dy - py
    return np.sqrt(qx * qx + qy * qy)


def min_dist_to_segments(xs: np.ndarray, ys: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """Distance from each point to the closest of the given segments."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    out = np.empty(len(xs))
    step = max(1, 200_000 // max(1, len(segs)))
    for lo in range(0, len(xs), step):
        out[lo : lo + step] = _dist_matrix(xs[lo : lo + step], ys[lo : lo + step], segs).min(axis=1)
    return out


def segment_intersections(segs: np.ndarray, tol: float, first_free: int = 0):
    """All contacts between pairs of segments.

    Returns a list of ``(i, j, ti, tj)`` where ``ti``/``tj`` are parameters
    along segments i and j.  Endpoints within ``tol`` of another segment are
    reported as contacts, which also covers collinear overlaps.  Pairs where
    both indices are below ``first_free`` are skipped (used for polygon edges,
    which are known not to cross).
    """
    segs = np.asarray(segs, dtype=float).reshape(-1, 4)
    n = len(segs)
    out = []
    if n < 2:
        return out
    xmin = np.minimum(segs[:, 0], segs[:, 2]) - tol
    xmax = np.maximum(segs[:, 0], segs[:, 2]) + tol
    ymin = np.minimum(segs[:, 1], segs[:, 3]) - tol
    ymax = np.maximum(segs[:, 1], segs[:, 3]) + tol
    for i in range(max(1, first_free), n):
        js = np.arange(i)
        ok = (xmin[js] <= xmax[i]) & (xmax[js] >= xmin[i]) & (ymin[js] <= ymax[i]) & (ymax[js] >= ymin[i])
        for j in js[ok]:
            out.extend(_pair_contacts(segs, i, int(j), tol))
    return out


def _pair_contacts(segs, i, j, tol):
    ax, ay, bx, by = segs[i]
    cx, cy, dx, dy = segs[j]
    res = []
    o1 = orient2d(ax, ay, bx, by, cx, cy)
    o2 = orient2d(ax, ay, bx, by, dx, dy)
    o3 = orient2d(cx, cy, dx, dy, ax, ay)
    o4 = orient2d(cx, cy, dx, dy, bx, by)
    if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
        ex, ey = bx - ax, by - ay
        fx, fy = dx - cx, dy - cy
        den = ex * fy - ey * fx
        ti = ((cx - ax) * fy - (cy - ay) * fx) / den
        tj = ((cx - ax) * ey - (cy - ay) * ex) / den
        res.append((i, j, min(max(ti, 0.0), 1.0), min(max(tj, 0.0), 1.0)))
    # Endpoint contacts (also catches touching and collinear overlap).
    for (px, py, tself, owner, other) in (
        (ax, ay, 0.0, i, j),
        (bx, by, 1.0, i, j),
        (cx, cy, 0.0, j, i),
        (dx, dy, 1.0, j, i),
    ):
        sx, sy, ux, uy = segs[other]
        vx, vy = ux - sx, uy - sy
        ll = vx * vx + vy * vy
        t = 0.0 if ll == 0 else ((px - sx) * vx + (py - sy) * vy) / ll
        t = min(max(t, 0.0), 1.0)
        qx, qy = sx + t * vx - px, sy + t * vy - py
        if qx * qx + qy * qy <= tol * tol:
            if owner == i:
                res.append((i, j, tself, t))
            else:
                res.append((i, j, t, tself))
    return res


def grid_distance_field(xs: np.ndarray, ys: np.ndarray, segs: np.ndarray, rings: list, tol: float) -> np.ndarray:
    """Signed distance samples: distance to the boundary for inside points, -1 elsewhere.

    ``rings`` is the list of boundary rings (outer first, then holes); a point
    is inside when it is inside the outer ring and outside every hole.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    inside = points_in_ring(xs, ys, rings[0], tol) == 1
    for h in rings[1:]:
        if not inside.any():
            break
        inside &= points_in_ring(xs, ys, h, tol) == -1
    out = np.full(len(xs), -1.0)
    if inside.any():
        out[inside] = min_dist_to_segments(xs[inside], ys[inside], segs)
    return out
