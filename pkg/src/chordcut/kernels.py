"""Kernel selection: the compiled extension when it imports, else NumPy.

Set ``CHORDCUT_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by the equivalence tests).
"""

from __future__ import annotations

import os

from chordcut import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CHORDCUT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from chordcut import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None
    if _compiled is not None:
        _impl = _compiled
        BACKEND = "cython"

orient2d = _impl.orient2d
point_in_ring = _impl.point_in_ring
points_in_ring = _impl.points_in_ring
min_dist_to_segments = _impl.min_dist_to_segments
segment_intersections = _impl.segment_intersections
grid_distance_field = _impl.grid_distance_field

__all__ = [
    "BACKEND",
    "orient2d",
    "point_in_ring",
    "points_in_ring",
    "min_dist_to_segments",
    "segment_intersections",
    "grid_distance_field",
]
