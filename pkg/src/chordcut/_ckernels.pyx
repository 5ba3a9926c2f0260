# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot geometric kernels.

Signatures and results match :mod:`chordcut._pykernels`; the rational
fallback of the orientation filter is shared with the Python module.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

from chordcut._pykernels import orient2d_exact

cnp.import_array()

cdef double ERRBOUND = (3.0 + 16.0 * 2.0**-53) * 2.0**-53


cdef inline double _orient(double ax, double ay, double bx, double by, double cx, double cy):
    cdef double detleft = (ax - cx) * (by - cy)
    cdef double detright = (ay - cy) * (bx - cx)
    cdef double det = detleft - detright
    cdef double detsum = fabs(detleft) + fabs(detright)
    if fabs(det) > ERRBOUND * detsum:
        return det
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def orient2d(double ax, double ay, double bx, double by, double cx, double cy):
    return _orient(ax, ay, bx, by, cx, cy)


cdef int _point_in_ring(double x, double y, double[:, :] ring):
    cdef Py_ssize_t n = ring.shape[0], i, k
    cdef bint inside = False
    cdef double ax, ay, bx, by, o
    for i in range(n):
        k = i + 1
        if k == n:
            k = 0
        ax = ring[i, 0]
        ay = ring[i, 1]
        bx = ring[k, 0]
        by = ring[k, 1]
        if (ay > y) != (by > y):
            o = _orient(ax, ay, bx, by, x, y)
            if o == 0.0:
                return 0
            if (o > 0) == (by > ay):
                inside = not inside
        elif ay == y and by == y:
            if (ax <= x <= bx) or (bx <= x <= ax):
                return 0
        if ax == x and ay == y:
            return 0
    return 1 if inside else -1


def point_in_ring(double x, double y, ring):
    cdef double[:, :] r = np.ascontiguousarray(ring, dtype=np.float64)
    return _point_in_ring(x, y, r)


cdef inline double _seg_dist2(double px, double py, double ax, double ay, double bx, double by):
    cdef double dx = bx - ax, dy = by - ay
    cdef double ll = dx * dx + dy * dy
    cdef double t = 0.0
    if ll > 0:
        t = ((px - ax) * dx + (py - ay) * dy) / ll
        if t < 0:
            t = 0
        elif t > 1:
            t = 1
    cdef double qx = ax + t * dx - px, qy = ay + t * dy - py
    return qx * qx + qy * qy


def points_in_ring(xs, ys, ring, double tol):
    cdef double[:] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef double[:, :] r = np.ascontiguousarray(ring, dtype=np.float64)
    cdef Py_ssize_t m = X.shape[0], n = r.shape[0], p, i, k
    out = np.empty(m, dtype=np.int64)
    cdef long long[:] o = out
    cdef double x, y, ax, ay, bx, by, xint, tol2 = tol * tol
    cdef bint inside, onb
    for p in range(m):
        x = X[p]
        y = Y[p]
        inside = False
        onb = False
        for i in range(n):
            k = i + 1
            if k == n:
                k = 0
            ax = r[i, 0]
            ay = r[i, 1]
            bx = r[k, 0]
            by = r[k, 1]
            if _seg_dist2(x, y, ax, ay, bx, by) <= tol2:
                onb = True
                break
            if (ay > y) != (by > y):
                xint = ax + (y - ay) * (bx - ax) / (by - ay)
                if xint > x:
                    inside = not inside
        if onb:
            o[p] = 0
        elif inside:
            o[p] = 1
        else:
            o[p] = -1
    return out


def min_dist_to_segments(xs, ys, segs):
    cdef double[:] X = np.ascontiguousarray(xs, dtype=np.float64)
    cdef double[:] Y = np.ascontiguousarray(ys, dtype=np.float64)
    cdef double[:, :] S = np.ascontiguousarray(np.asarray(segs, dtype=np.float64).reshape(-1, 4))
    cdef Py_ssize_t m = X.shape[0], n = S.shape[0], p, j
    out = np.empty(m, dtype=np.float64)
    cdef double[:] o = out
    cdef double best, d
    for p in range(m):
        best = 1e308
        for j in range(n):
            d = _seg_dist2(X[p], Y[p], S[j, 0], S[j, 1], S[j, 2], S[j, 3])
            if d < best:
                best = d
        o[p] = sqrt(best)
    return out


def segment_intersections(segs, double tol, Py_ssize_t first_free=0):
    cdef double[:, :] S = np.ascontiguousarray(np.asarray(segs, dtype=np.float64).reshape(-1, 4))
    cdef Py_ssize_t n = S.shape[0], i, j, e
    cdef double ax, ay, bx, by, cx, cy, dx, dy, o1, o2, o3, o4
    cdef double ex, ey, fx, fy, den, ti, tj, tol2 = tol * tol
    cdef double px, py, sx, sy, vx, vy, ll, t, qx, qy, tself
    cdef Py_ssize_t owner, other
    out = []
    if first_free < 1:
        first_free = 1
    for i in range(first_free, n):
        ax = S[i, 0]; ay = S[i, 1]; bx = S[i, 2]; by = S[i, 3]
        for j in range(i):
            cx = S[j, 0]; cy = S[j, 1]; dx = S[j, 2]; dy = S[j, 3]
            if max(ax, bx) + tol < min(cx, dx) or max(cx, dx) + tol < min(ax, bx):
                continue
            if max(ay, by) + tol < min(cy, dy) or max(cy, dy) + tol < min(ay, by):
                continue
            o1 = _orient(ax, ay, bx, by, cx, cy)
            o2 = _orient(ax, ay, bx, by, dx, dy)
            o3 = _orient(cx, cy, dx, dy, ax, ay)
            o4 = _orient(cx, cy, dx, dy, bx, by)
            if ((o1 > 0 and o2 < 0) or (o1 < 0 and o2 > 0)) and ((o3 > 0 and o4 < 0) or (o3 < 0 and o4 > 0)):
                ex = bx - ax; ey = by - ay
                fx = dx - cx; fy = dy - cy
                den = ex * fy - ey * fx
                ti = ((cx - ax) * fy - (cy - ay) * fx) / den
                tj = ((cx - ax) * ey - (cy - ay) * ex) / den
                out.append((i, j, min(max(ti, 0.0), 1.0), min(max(tj, 0.0), 1.0)))
            for e in range(4):
                if e == 0:
                    px = ax; py = ay; tself = 0.0; owner = i; other = j
                elif e == 1:
                    px = bx; py = by; tself = 1.0; owner = i; other = j
                elif e == 2:
                    px = cx; py = cy; tself = 0.0; owner = j; other = i
                else:
                    px = dx; py = dy; tself = 1.0; owner = j; other = i
                sx = S[other, 0]; sy = S[other, 1]
                vx = S[other, 2] - sx; vy = S[other, 3] - sy
                ll = vx * vx + vy * vy
                t = 0.0
                if ll > 0:
                    t = ((px - sx) * vx + (py - sy) * vy) / ll
                if t < 0:
                    t = 0.0
                elif t > 1:
                    t = 1.0
                qx = sx + t * vx - px
                qy = sy + t * vy - py
                if qx * qx + qy * qy <= tol2:
                    if owner == i:
                        out.append((i, j, tself, t))
                    else:
                        out.append((i, j, t, tself))
    return out


def grid_distance_field(xs, ys, segs, rings, double tol):
    X = np.ascontiguousarray(xs, dtype=np.float64)
    Y = np.ascontiguousarray(ys, dtype=np.float64)
    inside = points_in_ring(X, Y, rings[0], tol) == 1
    for h in rings[1:]:
        if not inside.any():
            break
        inside &= points_in_ring(X, Y, h, tol) == -1
    out = np.full(X.shape[0], -1.0)
    if inside.any():
        out[inside] = min_dist_to_segments(X[inside], Y[inside], segs)
    return out
