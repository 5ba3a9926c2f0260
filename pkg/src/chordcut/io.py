"""File formats: polygon JSON, solution JSON and SVG rendering."""

from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from chordcut.arrangement import as_chord
from chordcut.errors import InvalidPolygon, ParseError
from chordcut.geometry import Chord, Polygon, make_polygon

FORMAT_VERSION = 1


# --------------------------------------------------------------------------
# polygon JSON


def _num(v) -> str:
    return json.dumps(float(v))


def _ring_lines(ring, indent: str) -> list:
    return [f"{indent}[{_num(x)}, {_num(y)}]" for x, y in ring]


def dumps_polygon(P: Polygon, metadata: Optional[dict] = None) -> str:
    """Canonical text: one vertex per line, outer ring CCW, holes CW.

    ``metadata`` (generator parameters, budgets) goes in an extra field that
    readers ignore.
    """
    out = ["{", f'  "format_version": {FORMAT_VERSION},', '  "outer": [']
    out.append(",\n".join(_ring_lines(P.outer, "    ")))
    if P.holes:
        out.append("  ],")
        out.append('  "holes": [')
        blocks = ["    [\n" + ",\n".join(_ring_lines(h, "      ")) + "\n    ]" for h in P.holes]
        out.append(",\n".join(blocks))
        out.append("  ]")
    else:
        out.append("  ],")
        out.append('  "holes": []')
    if metadata:
        out[-1] += ","
        out.append('  "metadata": ' + json.dumps(_plain(metadata), sort_keys=True))
    out.append("}")
    return "\n".join(out) + "\n"


def _field_line(text: str, name: str) -> Optional[int]:
    m = re.search(r'"%s"\s*:' % re.escape(name), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _ring(value, name: str, text: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{name} must be a list of [x, y] pairs", _field_line(text, name), name)
    pts = []
    for i, p in enumerate(value):
        ok = isinstance(p, list) and len(p) == 2
        ok = ok and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in p)
        if not ok or not all(math.isfinite(c) for c in p):
            raise ParseError(f"{name}[{i}] is not a finite [x, y] pair", _field_line(text, name), f"{name}[{i}]")
        pts.append((float(p[0]), float(p[1])))
    return pts


def loads_polygon(text: str) -> Polygon:
    """Parse polygon JSON text; ring orientation is normalized on the way in."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, None) from None
    if not isinstance(data, dict):
        raise ParseError("top level must be an object", 1, None)
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format_version {version!r}", _field_line(text, "format_version"), "format_version")
    if "outer" not in data:
        raise ParseError("missing field 'outer'", None, "outer")
    outer = _ring(data["outer"], "outer", text)
    holes_raw = data.get("holes", [])
    if not isinstance(holes_raw, list):
        raise ParseError("holes must be a list of rings", _field_line(text, "holes"), "holes")
    holes = [_ring(h, f"holes[{k}]", text) for k, h in enumerate(holes_raw)]
    try:
        return make_polygon(outer, holes)
    except InvalidPolygon as e:
        raise ParseError(f"invalid polygon: {e}", _field_line(text, "outer"), "outer") from None


def read_polygon(path) -> Polygon:
    return loads_polygon(Path(path).read_text())


def write_polygon(P: Polygon, path, metadata: Optional[dict] = None) -> None:
    Path(path).write_text(dumps_polygon(P, metadata))


# --------------------------------------------------------------------------
# solution JSON


def _plain(v):
    """JSON-safe copy of a stats value (numpy scalars, tuples, enums)."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        return v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(getattr(v, "value", v))


def solution_dict(sol) -> dict:
    lasers = [[[float(c.a[0]), float(c.a[1])], [float(c.b[0]), float(c.b[1])]] for c in sol.lasers]
    return {
        "format_version": FORMAT_VERSION,
        "measure": sol.measure.value,
        "algorithm": sol.algorithm,
        "threshold": sol.threshold,
        "budget": sol.budget,
        "lasers": lasers,
        "cells": [{"area": c.area, "diameter": c.diameter, "inradius": c.inradius} for c in sol.cells],
        "max_measure": sol.max_measure,
        "worst_cell": sol.worst_cell,
        "feasible": sol.feasible,
        "flags": list(sol.flags),
        "stats": _plain(sol.stats),
    }


def dumps_solution(sol) -> str:
    return json.dumps(solution_dict(sol), indent=2, sort_keys=True) + "\n"


def write_solution(sol, path) -> None:
    Path(path).write_text(dumps_solution(sol))


def read_solution_lasers(path) -> list:
    """Lasers of a solution file (or a bare list of [[ax, ay], [bx, by]] segments)."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, None) from None
    raw = data.get("lasers") if isinstance(data, dict) else data
    if not isinstance(raw, list):
        raise ParseError("expected a list of lasers", _field_line(text, "lasers"), "lasers")
    out = []
    for i, seg in enumerate(raw):
        try:
            (ax, ay), (bx, by) = seg
            out.append(as_chord(((ax, ay), (bx, by))))
        except (TypeError, ValueError):
            raise ParseError(f"lasers[{i}] is not a segment", _field_line(text, "lasers"), f"lasers[{i}]") from None
    return out


# --------------------------------------------------------------------------
# SVG


def _f(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _View:
    def __init__(self, bbox, width: float, pad: float = 10.0):
        x0, y0, x1, y1 = bbox
        span = max(x1 - x0, y1 - y0, 1e-12)
        self.s = (width - 2 * pad) / span
        self.x0, self.y1, self.pad = x0, y1, pad
        self.w = (x1 - x0) * self.s + 2 * pad
        self.h = (y1 - y0) * self.s + 2 * pad

    def pt(self, p) -> str:
        return f"{_f((p[0] - self.x0) * self.s + self.pad)},{_f((self.y1 - p[1]) * self.s + self.pad)}"

    def path(self, rings) -> str:
        return " ".join("M " + " L ".join(self.pt(p) for p in r) + " Z" for r in rings)


def _tint(t: float) -> str:
    """Light yellow (small) to red (large) for t in [0, 1]."""
    t = min(max(t, 0.0), 1.0)
    g = round(235 - 180 * t)
    b = round(180 - 160 * t)
    return f"#ff{g:02x}{b:02x}"


def render_svg(
    P: Polygon,
    lasers: Sequence = (),
    *,
    solution=None,
    rooms: Sequence = (),
    threshold: Optional[float] = None,
    width: float = 800.0,
) -> str:
    """SVG picture with one group per layer: polygon, holes, cells, lasers, rooms, annotation.

    Cells come from ``solution`` (tinted by their measure); rooms carry their
    kind as a class so the layout categories can be counted.
    """
    from chordcut.instances import ROOM_COLORS

    v = _View(P.bbox, width)
    if solution is not None:
        lasers = solution.lasers
        threshold = solution.threshold if threshold is None else threshold
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(v.w)}" height="{_f(v.h)}" '
        f'viewBox="0 0 {_f(v.w)} {_f(v.h)}">'
    ]
    out.append('<g id="polygon">')
    out.append(f'<path class="polygon" d="{v.path([P.outer])}" fill="#dde6f0" stroke="#223" stroke-width="1"/>')
    out.append("</g>")
    out.append('<g id="holes">')
    for h in P.holes:
        out.append(f'<path class="hole" d="{v.path([h])}" fill="#ffffff" stroke="#223" stroke-width="0.5"/>')
    out.append("</g>")
    out.append('<g id="cells">')
    if solution is not None and solution.arrangement is not None:
        vals = [_cell_value(c, solution.measure.value) for c in solution.cells]
        top = max((x for x in vals if x is not None), default=1.0) or 1.0
        for i, (cell, val) in enumerate(zip(solution.arrangement.cells, vals)):
            b = cell.boundary
            t = (val or 0.0) / top
            worst = ' data-worst="true"' if i == solution.worst_cell else ""
            out.append(
                f'<path class="cell" data-index="{i}" data-measure="{_f(val or 0.0)}"{worst} '
                f'd="{v.path(b.rings)}" fill="{_tint(t)}" fill-opacity="0.7" fill-rule="evenodd" stroke="none"/>'
            )
    out.append("</g>")
    out.append('<g id="lasers">')
    for c in lasers:
        a, b = (c.a, c.b) if isinstance(c, Chord) else (c[0], c[1])
        pa, pb = v.pt(a).split(","), v.pt(b).split(",")
        out.append(
            f'<line class="laser" x1="{pa[0]}" y1="{pa[1]}" x2="{pb[0]}" y2="{pb[1]}" stroke="#c00" stroke-width="1.5"/>'
        )
    out.append("</g>")
    out.append('<g id="rooms">')
    for r in rooms:
        x0, y0, x1, y1 = r.rect
        color = ROOM_COLORS.get(r.kind, "gray")
        out.append(
            f'<path class="room room-{r.kind}" data-label="{escape(r.label)}" '
            f'd="{v.path([[(x0, y0), (x1, y0), (x1, y1), (x0, y1)]])}" fill="{color}" fill-opacity="0.35" stroke="none"/>'
        )
    out.append("</g>")
    if threshold is not None:
        out.append(f'<text id="threshold" x="{_f(v.pad)}" y="{_f(v.h - 2)}" font-size="12">δ = {_f(threshold)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _cell_value(report, measure: str):
    if measure == "area":
        return report.area
    if measure == "diameter":
        return report.diameter
    return report.inradius
