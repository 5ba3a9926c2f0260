"""Time the compiled kernels against the NumPy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N wall time of each backend and
the speedup, then an end-to-end timing of a holed in-circle solve under each
backend (run in a subprocess so the import-time selection applies).
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from chordcut import _pykernels as py

try:
    from chordcut import _ckernels as ck
except ImportError:
    ck = None


def cases():
    rng = np.random.default_rng(0)
    t = np.sort(rng.uniform(0, 2 * np.pi, 200))
    ring = np.column_stack([np.cos(t), np.sin(t)]) * rng.uniform(0.7, 1.3, (200, 1))
    xs, ys = rng.uniform(-1.5, 1.5, 20000), rng.uniform(-1.5, 1.5, 20000)
    segs = np.hstack([ring, np.roll(ring, -1, axis=0)])
    free = rng.uniform(-1, 1, (120, 4))
    tri = rng.uniform(-1, 1, (20000, 6))
    return {
        "orient2d x20000": lambda m: [m.orient2d(*r) for r in tri],
        "points_in_ring 20000x200": lambda m: m.points_in_ring(xs, ys, ring, 1e-12),
        "min_dist_to_segments 20000x200": lambda m: m.min_dist_to_segments(xs, ys, segs),
        "segment_intersections 320 segs": lambda m: m.segment_intersections(np.vstack([segs, free]), 1e-9, 200),
        "grid_distance_field 20000": lambda m: m.grid_distance_field(xs, ys, segs, [ring], 1e-12),
    }


SOLVE = """
import time
from chordcut.geometry import make_polygon
from chordcut.circle import solve_min_laser_circle
from chordcut import kernels
P = make_polygon([(0, 0), (8, 0), (8, 6), (0, 6)], [[(3, 2), (3, 4), (5, 4), (5, 2)]])
t = time.perf_counter()
sol = solve_min_laser_circle(P, 1.0)
print(kernels.BACKEND, sol.count, round(time.perf_counter() - t, 3))
"""


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if ck is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':34s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        if ck is None:
            print(f"{name:34s} {tp:10.4f}")
            continue
        tc = min(timeit.repeat(lambda: fn(ck), number=1, repeat=args.repeat))
        print(f"{name:34s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
    print("\nend to end (holed 8x6, in-circle radius 1):")
    for pure in ("1", "0"):
        env = dict(os.environ, CHORDCUT_PURE_PYTHON=pure)
        out = subprocess.run([sys.executable, "-c", SOLVE], env=env, capture_output=True, text=True, check=True)
        backend, count, secs = out.stdout.split()
        print(f"  {backend:8s} lasers={count} time={secs}s")


if __name__ == "__main__":
    main()
