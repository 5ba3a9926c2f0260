import math
import random

import numpy as np
import pytest
import shapely
from shapely.geometry import LineString
from shapely.ops import unary_union
from hypothesis import given, settings, strategies as st

from chordcut.arrangement import Cell, MeasureKind, cell_measure, decompose, largest_inscribed_disk, max_measure
from chordcut.errors import InvalidChord
from chordcut.geometry import convex_hull, extend_to_chord, make_polygon, points_diameter, polygon_area
from chordcut.geometry import SegmentOutside

from conftest import regular_polygon


def polygonize_oracle(P, lasers):
    """Independent cell areas: P minus thin slabs around the (overshooting) lasers.

    Lasers are lengthened slightly so floating endpoints cannot leave gaps,
    then removed as slabs of width 2 eps; areas agree with the exact cells up
    to eps times the total laser length.
    """
    sp = P.to_shapely()
    eps = 1e-9 * P.diameter
    slabs = []
    for a, b in lasers:
        dx, dy = b[0] - a[0], b[1] - a[1]
        ll = math.hypot(dx, dy)
        ux, uy = dx / ll * 1e-6 * P.diameter, dy / ll * 1e-6 * P.diameter
        slabs.append(LineString([(a[0] - ux, a[1] - uy), (b[0] + ux, b[1] + uy)]).buffer(eps, cap_style="flat"))
    rest = sp.difference(unary_union(slabs)) if slabs else sp
    faces = list(getattr(rest, "geoms", [rest]))
    return sorted(f.area for f in faces if f.area > 0)


def random_chords(P, k, rng):
    out = []
    sp = P.to_shapely()
    x0, y0, x1, y1 = P.bbox
    while len(out) < k:
        p = (rng.uniform(x0, x1), rng.uniform(y0, y1))
        if not sp.contains(shapely.Point(p)):
            continue
        t = rng.uniform(0, math.pi)
        d = 1e-6 * P.diameter
        try:
            out.append(extend_to_chord(P, ((p[0] - d * math.cos(t), p[1] - d * math.sin(t)), (p[0] + d * math.cos(t), p[1] + d * math.sin(t)))))
        except SegmentOutside:
            continue
    return out


class TestDecompose:
    def test_one_chord(self, unit_square):
        A = decompose(unit_square, [((0.5, 0), (0.5, 1))])
        assert sorted(c.area for c in A.cells) == [0.5, 0.5]

    def test_cross(self, unit_square):
        A = decompose(unit_square, [((0.5, 0), (0.5, 1)), ((0, 0.5), (1, 0.5))])
        assert [c.area for c in A.cells] == [0.25] * 4

    def test_hole_split_line(self, holed_square):
        A = decompose(holed_square, [((0, 2), (1, 2)), ((3, 2), (4, 2))])
        assert sorted(c.area for c in A.cells) == [6, 6]

    def test_cell_with_hole(self, holed_square):
        A = decompose(holed_square, [])
        assert len(A.cells) == 1 and len(A.cells[0].boundary.holes) == 1
        assert A.cells[0].area == 12
        A = decompose(holed_square, [((0, 2), (1, 2))])
        assert len(A.cells) == 1 and A.cells[0].area == 12

    def test_invalid_chord_named(self, unit_square):
        with pytest.raises(InvalidChord) as ei:
            decompose(unit_square, [((0.5, 0), (0.5, 1)), ((0.2, 0.2), (0.8, 0.2))])
        assert ei.value.index == 1

    def test_through_reflex_vertex(self, l_polygon):
        A = decompose(l_polygon, [((0, 0), (1, 1))])
        assert sorted(c.area for c in A.cells) == pytest.approx([1.5, 1.5])

    def test_concurrent_chords(self, unit_square):
        lasers = [((0, 0), (1, 1)), ((1, 0), (0, 1)), ((0.5, 0), (0.5, 1))]
        A = decompose(unit_square, lasers)
        assert len(A.cells) == 6
        assert sorted(c.area for c in A.cells) == pytest.approx(polygonize_oracle(unit_square, lasers))

    def test_laser_endpoint_at_vertex(self, unit_square):
        A = decompose(unit_square, [((0, 0), (1, 1))])
        assert sorted(c.area for c in A.cells) == [0.5, 0.5]


class TestMeasures:
    def test_square_cell(self, unit_square):
        c = Cell(unit_square)
        assert cell_measure(c, MeasureKind.DIAMETER) == pytest.approx(math.sqrt(2))
        assert cell_measure(c, MeasureKind.AREA) == 1
        tau = 1e-4 * math.sqrt(2)
        assert abs(cell_measure(c, MeasureKind.INRADIUS) - 0.5) <= tau

    def test_rectangle_inradius(self):
        R = make_polygon([(0, 0), (2, 0), (2, 1), (0, 1)])
        assert abs(cell_measure(R, "incircle") - 0.5) <= 1e-4 * math.sqrt(5)

    def test_l_cell_inradius(self, l_polygon):
        # Frozen oracle: tangent to x=0, y=0 and the reflex vertex (1,1),
        # c = sqrt(2) (1 - c)  =>  c = 2 - sqrt(2).
        r, center = largest_inscribed_disk(l_polygon)
        assert abs(r - (2 - math.sqrt(2))) <= 1e-4 * l_polygon.diameter

    def test_l_cell_inradius_vs_dense_grid(self, l_polygon):
        # Independent brute force with shapely distances on a fine grid.
        sp = l_polygon.to_shapely()
        xs = np.linspace(0, 2, 161)
        pts = shapely.points(*np.meshgrid(xs, xs))
        inside = shapely.contains(sp, pts)
        best = shapely.distance(sp.exterior, pts[inside]).max()
        r, _ = largest_inscribed_disk(l_polygon)
        h = xs[1] - xs[0]
        assert best - 1e-12 <= r + 1e-4 * l_polygon.diameter
        assert r <= best + h * math.sqrt(2) / 2

    def test_max_measure_examples(self, unit_square):
        assert max_measure(unit_square, [], "diameter") == (pytest.approx(math.sqrt(2)), 0)
        v, k = max_measure(unit_square, [((0.5, 0), (0.5, 1))], "area")
        assert v == 0.5 and k in (0, 1)
        R = make_polygon([(0, 0), (10, 0), (10, 0.5), (0, 0.5)])
        v, _ = max_measure(R, [((x, 0), (x, 0.5)) for x in range(1, 10)], MeasureKind.DIAMETER)
        assert v == pytest.approx(math.sqrt(1.25))

    def test_inradius_disk_contained(self, l_polygon):
        r, c = largest_inscribed_disk(l_polygon)
        tau = 1e-4 * l_polygon.diameter
        disk = shapely.Point(c).buffer(max(r - tau, 0), 64)
        assert l_polygon.to_shapely().buffer(1e-12).contains(disk)


# ---------------------------------------------------------------- properties

@st.composite
def polygon_and_chords(draw):
    kind = draw(st.sampled_from(["convex", "l", "holed", "comb"]))
    if kind == "convex":
        P = regular_polygon(draw(st.integers(3, 9)), 2.0, draw(st.floats(0, 1)))
    elif kind == "l":
        P = make_polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
    elif kind == "holed":
        P = make_polygon([(0, 0), (4, 0), (4, 4), (0, 4)], [[(1, 1), (1, 3), (3, 3), (3, 1)]])
    else:
        P = make_polygon([(0, 0), (5, 0), (5, 3), (4, 3), (4, 1), (3, 1), (3, 3), (2, 3), (2, 1), (1, 1), (1, 3), (0, 3)])
    k = draw(st.integers(0, 6))
    seed = draw(st.integers(0, 10**6))
    return P, random_chords(P, k, random.Random(seed))


@settings(max_examples=60, deadline=None)
@given(polygon_and_chords())
def test_conservation_and_oracle(data):
    P, lasers = data
    A = decompose(P, lasers)
    areas = sorted(c.area for c in A.cells)
    assert sum(areas) == pytest.approx(polygon_area(P), rel=1e-9)
    ref = polygonize_oracle(P, lasers)
    assert len(areas) == len(ref)
    assert areas == pytest.approx(ref, rel=1e-6, abs=1e-7 * P.diameter**2)


@settings(max_examples=40, deadline=None)
@given(polygon_and_chords(), st.sampled_from(["area", "diameter"]))
def test_monotone_under_added_chord(data, m):
    P, lasers = data
    if not lasers:
        return
    before = max_measure(P, lasers[:-1], m)[0]
    after = max_measure(P, lasers, m)[0]
    assert after <= before * (1 + 1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 8), st.integers(0, 6), st.integers(0, 10**6))
def test_convex_cell_count_bound(k, ell, seed):
    P = regular_polygon(k, 2.0)
    lasers = random_chords(P, ell, random.Random(seed))
    assert len(decompose(P, lasers).cells) <= 1 + ell + ell * (ell - 1) // 2


@settings(max_examples=30, deadline=None)
@given(polygon_and_chords())
def test_cell_diameter_is_hull_diameter(data):
    P, lasers = data
    for c in decompose(P, lasers).cells:
        pts = list(c.boundary.outer) + [p for h in c.boundary.holes for p in h]
        brute = max(math.dist(p, q) for p in pts for q in pts)
        assert c.diameter == pytest.approx(brute, rel=1e-14)
        assert c.diameter == pytest.approx(points_diameter(convex_hull(pts)), rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(polygon_and_chords())
def test_inradius_disk_inside_cell(data):
    P, lasers = data
    for c in decompose(P, lasers).cells[:3]:
        r, ctr = largest_inscribed_disk(c.boundary)
        tau = 1e-4 * c.diameter
        if r <= tau:
            continue
        disk = shapely.Point(ctr).buffer(r - tau, 32)
        assert c.boundary.to_shapely().buffer(1e-9 * P.diameter).contains(disk)
