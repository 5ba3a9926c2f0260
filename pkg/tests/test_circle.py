import math

import numpy as np
import pytest
import shapely

from chordcut.arrangement import decompose, largest_inscribed_disk
from chordcut.circle import (
    CoverInstance,
    PinnedDiskSet,
    anchored_replacements,
    candidate_chords,
    cover_instance,
    grid_points,
    greedy_cover,
    hit_matrix,
    pinned_disks,
    solve_min_laser_circle,
)
from chordcut.errors import UncoverableElement
from chordcut.geometry import Chord, Point, chords_on_line, horizontal_chords, make_polygon
from chordcut.instances import gen_random_holed
from chordcut.oracle import exact_set_cover
from chordcut.solution import supporting_lines


def rect_ring(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


SQ4 = make_polygon(rect_ring(0, 0, 4, 4))
HOLED6 = make_polygon(rect_ring(0, 0, 6, 6), [rect_ring(2, 2, 4, 4)])
# Two 5x2.6 chambers joined by a bent corridor of width 0.5; no chord
# reaches both, and a band of horizontal chords serves each.
TWIN = make_polygon([(0, 0), (7, 0), (7, 6), (10, 6), (10, 8.6), (5, 8.6), (5, 6), (6.5, 6), (6.5, 0.5),
                     (5, 0.5), (5, 2.6), (0, 2.6)])


def clearance(P, pts):
    E = P.edge_array
    best = np.full(len(pts), np.inf)
    for x0, y0, x1, y1 in E:
        dx, dy = x1 - x0, y1 - y0
        t = np.clip(((pts[:, 0] - x0) * dx + (pts[:, 1] - y0) * dy) / (dx * dx + dy * dy), 0, 1)
        best = np.minimum(best, np.hypot(pts[:, 0] - x0 - t * dx, pts[:, 1] - y0 - t * dy))
    return best


def sample_disks(P, r, n=1000, seed=0):
    """Centers of n uniformly sampled radius-r disks inside P (rejection sampling)."""
    rng = np.random.default_rng(seed)
    g = P.to_shapely()
    x0, y0, x1, y1 = P.bbox
    out = []
    while len(out) < n:
        pts = np.column_stack([rng.uniform(x0, x1, 4096), rng.uniform(y0, y1, 4096)])
        ok = shapely.contains_xy(g, pts[:, 0], pts[:, 1]) & (clearance(P, pts) >= r)
        out.extend(pts[ok])
    return np.asarray(out[:n])


def random_chords(P, n, seed=0):
    rng = np.random.default_rng(seed)
    g = P.to_shapely()
    x0, y0, x1, y1 = P.bbox
    out = []
    while len(out) < n:
        p = (rng.uniform(x0, x1), rng.uniform(y0, y1))
        if not g.contains(shapely.Point(p)):
            continue
        th = rng.uniform(0, math.pi)
        q = (p[0] + math.cos(th), p[1] + math.sin(th))
        for c in chords_on_line(P, p, q):
            if shapely.LineString([c.a, c.b]).distance(shapely.Point(p)) < 1e-9:
                out.append(c)
    return out


def pipeline(P, r, axis_only=False, seed=0):
    G = grid_points(P, r, seed)
    C = candidate_chords(P, G, r, axis_only)
    D = pinned_disks(P, C, r)
    return G, C, D, cover_instance(P, C, D)


# -- grid points ----------------------------------------------------------


def test_grid_size_tracks_area():
    sizes = [len(grid_points(SQ4, 1.0, seed)) for seed in range(200)]
    assert all(4 <= s <= 9 for s in sizes)
    assert np.mean(sizes) == pytest.approx(SQ4.area / 2, rel=0.1)


def test_grid_covers_sampled_disks():
    G = grid_points(SQ4, 1.0)
    for c in sample_disks(SQ4, 1.0, 1000, seed=1):
        assert np.hypot(*(G.points - c).T).min() <= 1.0 + 1e-12


def test_grid_reproducible():
    a, b = grid_points(HOLED6, 1.0, 7), grid_points(HOLED6, 1.0, 7)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, grid_points(HOLED6, 1.0, 8).points)


def test_grid_spacing():
    assert grid_points(SQ4, 0.5).spacing == pytest.approx(math.sqrt(2) * 0.5)
    with pytest.raises(ValueError):
        grid_points(SQ4, 0.0)


# -- candidates -----------------------------------------------------------


def test_axis_candidates_count_bound():
    G = grid_points(SQ4, 1.0)
    C = candidate_chords(SQ4, G, 1.0, axis_only=True)
    assert len(C) <= 2 * (len(G) + 4)
    assert all(c.is_vertical or c.is_horizontal for c in C)


def test_general_candidates_line_bound():
    G = grid_points(SQ4, 1.0)
    C = candidate_chords(SQ4, G, 1.0)
    a = len(G) + 4
    assert supporting_lines(C, 1e-9) <= a * (a - 1) // 2


def test_anchored_copies_of_middle_chord_dominate():
    # The chord y = 2 alone hits every unit disk in the 4x4 square; its
    # anchored copies are candidates and together still hit them all.
    G, C, D, inst = pipeline(SQ4, 1.0)
    mid = horizontal_chords(SQ4, 2.0)[0]
    assert hit_matrix(D.centers, [mid], 1.0, 1e-9).all()
    anchors = np.vstack([G.points, np.asarray(SQ4.outer, dtype=float)])
    reps = anchored_replacements(SQ4, mid, anchors)
    assert 1 <= len(reps) <= 4
    assert hit_matrix(D.centers, reps, 1.0, 1e-9).any(axis=1).all()
    for s in reps:
        assert any(contains_segment(c, s) for c in C)


def contains_segment(c, s, tol=1e-7):
    line = shapely.LineString([c.a, c.b])
    return line.distance(shapely.Point(s.a)) <= tol and line.distance(shapely.Point(s.b)) <= tol


# -- pinned disks ---------------------------------------------------------


def test_no_candidates_no_disks():
    thin = make_polygon(rect_ring(0, 0, 10, 1.5))
    G = grid_points(thin, 1.0)
    C = candidate_chords(thin, G, 1.0)
    assert len(pinned_disks(thin, C, 1.0)) == 0
    assert len(pinned_disks(SQ4, [], 1.0)) == 0


def test_single_candidate_at_most_three_disks():
    mid = horizontal_chords(SQ4, 2.5)[0]
    D = pinned_disks(SQ4, [mid], 1.0)
    assert 1 <= len(D) <= 3


def test_pinned_disks_inside_polygon():
    _, _, D, _ = pipeline(HOLED6, 1.0)
    assert len(D) > 0
    assert (clearance(HOLED6, D.centers) >= 1.0 - 1e-4).all()


def test_pinned_types_are_distinct():
    _, C, D, _ = pipeline(SQ4, 1.0)
    H = hit_matrix(D.centers, C, 1.0, 1e-9)
    assert len({row.tobytes() for row in H}) == len(D)


@pytest.mark.parametrize("P", [SQ4, HOLED6], ids=["square", "holed"])
def test_sampled_disks_match_their_type(P):
    _, C, D, _ = pipeline(P, 1.0)
    tree = shapely.STRtree(D.faces)
    samples = sample_disks(P, 1.0, 1000, seed=2)
    H = hit_matrix(samples, C, 1.0, 1e-9)
    R = hit_matrix(D.centers, C, 1.0, 1e-9)
    for k, c in enumerate(samples):
        pt = shapely.Point(c)
        faces = [int(i) for i in tree.query(pt) if D.faces[int(i)].covers(pt)]
        assert faces
        assert any((H[k] == R[D.face_disk[f]]).all() for f in faces)


# -- greedy cover ---------------------------------------------------------


def test_greedy_single_element():
    ch = [Chord(Point(0, 0), Point(1, 0)), Chord(Point(0, 1), Point(1, 1))]
    inst = CoverInstance(PinnedDiskSet(np.zeros((1, 2)), 1.0), ch, [frozenset(), frozenset({0})])
    assert greedy_cover(inst) == [ch[1]]


def test_greedy_uncoverable():
    ch = [Chord(Point(0, 0), Point(1, 0))]
    inst = CoverInstance(PinnedDiskSet(np.zeros((2, 2)), 1.0), ch, [frozenset({0})])
    with pytest.raises(UncoverableElement):
        greedy_cover(inst)


def test_greedy_square_against_exact_cover():
    _, _, D, inst = pipeline(SQ4, 1.0)
    picked = greedy_cover(inst)
    opt = exact_set_cover(inst.sets, len(D), 4)
    assert opt is not None and 1 <= len(opt) <= 4
    assert len(picked) <= 4
    assert len(picked) <= (1 + math.log(len(D))) * len(opt)


def test_greedy_twin_chambers():
    _, _, D, inst = pipeline(TWIN, 1.0)
    opt = exact_set_cover(inst.sets, len(D), 2)
    assert opt is not None and len(opt) == 2
    assert exact_set_cover(inst.sets, len(D), 1) is None
    assert len(greedy_cover(inst)) == 2


@pytest.mark.parametrize("P", [SQ4, HOLED6], ids=["square", "holed"])
def test_greedy_log_bound_small_universe(P):
    _, _, D, inst = pipeline(P, 1.0, axis_only=True)
    assert len(D) <= 20
    opt = exact_set_cover(inst.sets, len(D), 6)
    assert opt is not None
    assert len(greedy_cover(inst)) <= (1 + math.log(max(len(D), 1))) * len(opt)


# -- end to end -----------------------------------------------------------


def max_inradius_ok(P, sol, r):
    for c in decompose(P, sol.lasers).cells:
        tau_r = 1e-4 * c.diameter
        if largest_inscribed_disk(c.boundary, tau_r=tau_r, delta=r)[0] > r + tau_r:
            return False
    return True


def test_thin_polygon_no_lasers():
    thin = make_polygon(rect_ring(0, 0, 10, 1.5))
    sol = solve_min_laser_circle(thin, 1.0)
    assert sol.count == 0 and sol.feasible


def test_square_end_to_end():
    sol = solve_min_laser_circle(SQ4, 1.0)
    assert sol.count <= 4
    assert max_inradius_ok(SQ4, sol, 1.0)


@pytest.mark.parametrize("axis_only", [False, True])
@pytest.mark.parametrize("P", [SQ4, HOLED6, TWIN], ids=["square", "holed", "twin"])
def test_reformulation_equivalence(P, axis_only):
    sol = solve_min_laser_circle(P, 1.0, axis_only)
    assert max_inradius_ok(P, sol, 1.0)
    samples = sample_disks(P, 1.0, 1000, seed=3)
    assert hit_matrix(samples, sol.lasers, 1.0, 1e-9).any(axis=1).all()
    if axis_only:
        assert all(c.is_vertical or c.is_horizontal for c in sol.lasers)


def test_cover_complete():
    _, _, D, inst = pipeline(HOLED6, 1.0)
    picked = greedy_cover(inst)
    assert hit_matrix(D.centers, picked, 1.0, 1e-9).any(axis=1).all()


def test_random_holed_end_to_end():
    P = gen_random_holed(10, 1, seed=4)
    r = P.diameter / 10
    sol = solve_min_laser_circle(P, r, seed=5)
    assert max_inradius_ok(P, sol, r)
    samples = sample_disks(P, r, 500, seed=6)
    assert hit_matrix(samples, sol.lasers, r, 1e-9 * P.diameter).any(axis=1).all()


@pytest.mark.parametrize("P", [SQ4, HOLED6], ids=["square", "holed"])
def test_anchoring_soundness(P):
    G, C, D, _ = pipeline(P, 1.0)
    anchors = np.vstack([G.points, np.vstack([np.asarray(r, dtype=float) for r in P.rings])])
    for c in random_chords(P, 50, seed=8):
        reps = anchored_replacements(P, c, anchors)
        assert 1 <= len(reps) <= 4
        hit_c = hit_matrix(D.centers, [c], 1.0, 1e-9)[:, 0]
        hit_r = hit_matrix(D.centers, reps, 1.0, 1e-9).any(axis=1)
        assert (hit_r | ~hit_c).all()
        for s in reps:
            assert any(contains_segment(cand, s) for cand in C)


@pytest.mark.parametrize("P", [SQ4, HOLED6, TWIN], ids=["square", "holed", "twin"])
def test_lazy_universe_hits_every_disk(P):
    sol = solve_min_laser_circle(P, 1.0, max_bands=0)
    assert sol.stats["universe"] == "lazy"
    assert max_inradius_ok(P, sol, 1.0)
    samples = sample_disks(P, 1.0, 1000, seed=9)
    assert hit_matrix(samples, sol.lasers, 1.0, 1e-9).any(axis=1).all()
