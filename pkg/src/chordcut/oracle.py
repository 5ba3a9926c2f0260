"""Brute-force reference solvers and the universal feasibility check."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
import shapely

from chordcut.arrangement import MeasureKind, as_chord, decompose, largest_inscribed_disk
from chordcut.geometry import Polygon, points_diameter
from chordcut.solution import supporting_lines


@dataclass
class OracleBudget:
    max_candidates: int = 16
    max_subset_size: int = 5
    time_limit: Optional[float] = None


@dataclass
class Exact:
    k: int
    witness: tuple
    tested: dict = field(default_factory=dict)

    known = True


@dataclass
class Unknown:
    reason: str
    tested: dict = field(default_factory=dict)

    known = False


def measure_tolerance(m: MeasureKind, delta: float, diam: float, tau_r: Optional[float] = None) -> float:
    """Slack allowed when comparing a cell measure against ``delta``."""
    if m is MeasureKind.INRADIUS:
        return 1e-4 * diam if tau_r is None else tau_r
    return 1e-9 * max(delta, 1e-300)


def _worst(P: Polygon, lasers: Sequence, m: MeasureKind, delta: Optional[float], tau_r: Optional[float],
           cutoff: Optional[float] = None):
    arr = decompose(P, lasers)
    best, idx = -math.inf, -1
    for i, c in enumerate(arr.cells):
        if m is MeasureKind.AREA:
            v = c.area
        elif m is MeasureKind.DIAMETER:
            v = c.diameter
        else:
            v = largest_inscribed_disk(c.boundary, tau_r=tau_r, delta=delta)[0]
        if v > best:
            best, idx = v, i
        if cutoff is not None and best > cutoff:
            break
    return best, idx, arr


def colex_combinations(n: int, k: int):
    """k-subsets of range(n) in colexicographic order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, n):
        for rest in colex_combinations(top, k - 1):
            yield rest + (top,)


def exact_min_lasers(P: Polygon, candidates: Sequence, delta: float, m, budget: Optional[OracleBudget] = None,
                     tau_r: Optional[float] = None):
    """Smallest subset of ``candidates`` whose cells all have measure <= delta."""
    budget = budget or OracleBudget()
    m = MeasureKind.parse(m)
    cands = [as_chord(c) for c in candidates]
    if len(cands) > budget.max_candidates:
        return Unknown(f"{len(cands)} candidates exceed the budget of {budget.max_candidates}")
    start = time.monotonic()
    limit = delta + measure_tolerance(m, delta, P.diameter, tau_r)
    tested: dict = {}
    for k in range(0, min(budget.max_subset_size, len(cands)) + 1):
        tested[k] = 0
        for sub in colex_combinations(len(cands), k):
            if budget.time_limit is not None and time.monotonic() - start > budget.time_limit:
                return Unknown("time limit", tested)
            tested[k] += 1
            worst, _, _ = _worst(P, [cands[i] for i in sub], m, delta, tau_r, cutoff=limit)
            if worst <= limit:
                return Exact(k, tuple(cands[i] for i in sub), tested)
    return Unknown(f"no feasible subset of size <= {budget.max_subset_size}", tested)


def inradius_bruteforce(cell: Polygon, pitch: float) -> float:
    """Maximum boundary distance over grid samples of the given pitch."""
    sp = cell.to_shapely()
    x0, y0, x1, y1 = sp.bounds
    xs = np.arange(x0 + 0.5 * pitch, x1, pitch)
    ys = np.arange(y0 + 0.5 * pitch, y1, pitch)
    best = 0.0
    bnd = sp.boundary
    for y in ys:
        pts = shapely.points(xs, np.full_like(xs, y))
        inside = shapely.contains(sp, pts)
        if inside.any():
            best = max(best, float(shapely.distance(bnd, pts[inside]).max()))
    return best


@dataclass
class VerifyReport:
    feasible: bool
    worst_value: float
    worst_cell: int
    counts: dict
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "feasible": self.feasible,
            "worst_value": self.worst_value,
            "worst_cell": self.worst_cell,
            "counts": dict(self.counts),
            "tolerance": self.tolerance,
        }


def verify_solution(P: Polygon, lasers: Sequence, m, delta: float, tau_r: Optional[float] = None) -> VerifyReport:
    m = MeasureKind.parse(m)
    lasers = [as_chord(c) for c in lasers]
    worst, idx, arr = _worst(P, lasers, m, delta, tau_r)
    tol = measure_tolerance(m, delta, P.diameter, tau_r)
    if m is MeasureKind.INRADIUS and tau_r is None:
        tol = 1e-4 * points_diameter(arr.cells[idx].boundary.outer)
    counts = {"lasers": len(lasers), "cells": len(arr.cells), "lines": supporting_lines(lasers, P.tau_snap * 10)}
    return VerifyReport(worst <= delta + tol, float(worst), idx, counts, tol)


def exact_set_cover(sets: Sequence, universe: int, max_size: int = 4) -> Optional[tuple]:
    """Smallest index tuple of ``sets`` covering range(universe), by colex enumeration.

    Returns None when no cover of at most ``max_size`` sets exists.
    """
    masks = [sum(1 << e for e in s) for s in sets]
    full = (1 << universe) - 1
    for k in range(0, max_size + 1):
        for sub in colex_combinations(len(masks), k):
            m = 0
            for i in sub:
                m |= masks[i]
            if m == full:
                return sub
    return None
