"""Solver output contract: lasers plus the verified per-cell report."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from chordcut.arrangement import Arrangement, MeasureKind, cell_measure, decompose, largest_inscribed_disk
from chordcut.geometry import Chord, Polygon, Point


@dataclass
class CellReport:
    area: float
    diameter: float
    inradius: Optional[float] = None


@dataclass
class Solution:
    lasers: list
    measure: MeasureKind
    max_measure: float
    worst_cell: int
    cells: list
    algorithm: str
    threshold: Optional[float] = None
    budget: Optional[int] = None
    stats: dict = field(default_factory=dict)
    flags: list = field(default_factory=list)
    arrangement: Optional[Arrangement] = field(default=None, repr=False, compare=False)

    @property
    def count(self) -> int:
        return len(self.lasers)

    @property
    def feasible(self) -> bool:
        return self.threshold is None or self.max_measure <= self.threshold * (1 + 1e-9)


def dedupe_chords(chords: Sequence, tol: float) -> list:
    """Drop repeated chords (either orientation), keeping first occurrences."""
    out: list = []
    for c in chords:
        c = c if isinstance(c, Chord) else Chord(Point(*c[0]), Point(*c[1]))
        dup = False
        for d in out:
            if (math.dist(c.a, d.a) <= tol and math.dist(c.b, d.b) <= tol) or (
                math.dist(c.a, d.b) <= tol and math.dist(c.b, d.a) <= tol
            ):
                dup = True
                break
        if not dup:
            out.append(c)
    return out


def supporting_lines(chords: Sequence, tol: float) -> int:
    """Number of distinct lines carrying the chords."""
    lines: list = []
    for c in chords:
        (ax, ay), (bx, by) = c[0], c[1]
        th = math.atan2(by - ay, bx - ax) % math.pi
        nx, ny = -math.sin(th), math.cos(th)
        off = nx * ax + ny * ay
        if not any(abs(math.sin(th - t)) <= 1e-12 and abs(off - o) <= tol for t, o in lines):
            lines.append((th, off))
    return len(lines)


def evaluate(
    P: Polygon,
    lasers: Sequence,
    measure,
    *,
    algorithm: str,
    threshold: Optional[float] = None,
    budget: Optional[int] = None,
    stats: Optional[dict] = None,
    flags: Optional[list] = None,
    tau_r: Optional[float] = None,
    with_inradius: Optional[bool] = None,
) -> Solution:
    """Decompose, measure every cell and package the result."""
    m = MeasureKind.parse(measure)
    lasers = list(lasers)
    arr = decompose(P, lasers)
    if with_inradius is None:
        with_inradius = m is MeasureKind.INRADIUS
    reports = []
    values = []
    for c in arr.cells:
        r = None
        if with_inradius:
            r = largest_inscribed_disk(c.boundary, tau_r=tau_r, delta=threshold if m is MeasureKind.INRADIUS else None)[0]
        reports.append(CellReport(c.area, c.diameter, r))
        if m is MeasureKind.AREA:
            values.append(c.area)
        elif m is MeasureKind.DIAMETER:
            values.append(c.diameter)
        else:
            values.append(r)
    k = max(range(len(values)), key=lambda i: (values[i], -i))
    st = {"lasers": len(lasers), "lines": supporting_lines(lasers, P.tau_snap * 10), "cells": len(arr.cells)}
    st.update(stats or {})
    return Solution(
        lasers=lasers,
        measure=m,
        max_measure=float(values[k]),
        worst_cell=k,
        cells=reports,
        algorithm=algorithm,
        threshold=threshold,
        budget=budget,
        stats=st,
        flags=list(flags or []),
        arrangement=arr,
    )
