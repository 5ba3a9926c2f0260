"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line (outside pytest's capture)
with the numbers it checked, then asserts.
"""

import itertools
import math
import os
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from chordcut.arrangement import decompose, largest_inscribed_disk, max_measure
from chordcut.axis import (
    candidate_chords as axis_candidates,
    dp_min_laser_area,
    histogram_diameter_sweep,
    phase1_count,
    stabbing_counts,
    window_partition,
)
from chordcut.circle import (
    candidate_chords,
    cover_instance,
    greedy_cover,
    grid_points,
    hit_matrix,
    lazy_cover,
    pinned_disks,
    solve_min_laser_circle,
    useful_candidates,
)
from chordcut.convex import cut_convex_area, lower_bound_convex_area, solve_convex_area
from chordcut.diameter import HORIZONTAL, VERTICAL, bicriteria_diameter, lines_met, solve_k_laser_diameter
from chordcut.geometry import Chord, Point, convex_hull, horizontal_chords, make_polygon, polygon_area, vertical_chords
from chordcut.holes import bicriteria_holes, holes_state, make_strips
from chordcut.instances import (
    CnfFormula,
    gen_area_gadget,
    gen_circle_gadget,
    gen_random_convex,
    gen_random_histogram,
    gen_random_holed,
    gen_random_orthogonal,
    gen_random_pseudo_histogram,
    gen_random_simple,
)
from chordcut.io import write_polygon
from chordcut.oracle import OracleBudget, exact_min_lasers, exact_set_cover, verify_solution

from test_arrangement import random_chords
from test_axis import random_axis_chords
from test_circle import HOLED6, SQ4, TWIN, sample_disks
from test_convex import keys
from test_holes import separates


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")

    return emit


def rect_ring(x0, y0, x1, y1):
    return [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]


# --------------------------------------------------------------------------- 1


def test_criterion_01_conservation_and_monotonicity(report):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad = []
    checks = 0
    for i in range(200):
        if i % 2 == 0:
            P = gen_random_simple(rng.randint(5, 30), seed=i)
        else:
            P = gen_random_holed(rng.randint(8, 20), holes=1 + i % 3, seed=i)
        lasers = random_chords(P, rng.randint(0, 5), rng)
        arr = decompose(P, lasers)
        total = sum(c.area for c in arr.cells)
        if abs(total - polygon_area(P)) > 1e-9 * polygon_area(P):
            bad.append((i, "area sum", total, polygon_area(P)))
        extra = random_chords(P, 2, rng)
        for m in ("area", "diameter"):
            before = max_measure(P, lasers, m)[0]
            for c in extra:
                after = max_measure(P, lasers + [c], m)[0]
                checks += 1
                if after > before * (1 + 1e-12):
                    bad.append((i, m, before, after))
        if i % 10 == 0:
            # in-circle radius: the measure is computed to tau_r, so allow 2 tau_r
            tau = 1e-4 * P.diameter
            before = max_measure(P, lasers, "incircle", tau_r=tau)[0]
            after = max_measure(P, lasers + extra[:1], "incircle", tau_r=tau)[0]
            checks += 1
            if after > before + 2 * tau:
                bad.append((i, "incircle", before, after))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    report(1, ok, f"200 instances, {checks} added-chord checks, {len(bad)} violations, {elapsed:.1f}s")
    assert not bad, bad[:5]
    assert elapsed < 60


# --------------------------------------------------------------------------- 2


def independent_box_area(C):
    """Minimum area of an enclosing rectangle with a side on a hull edge."""
    h = np.asarray(convex_hull(C.outer), dtype=float)
    best = math.inf
    for i in range(len(h)):
        e = h[(i + 1) % len(h)] - h[i]
        u = e / np.hypot(*e)
        v = np.array([-u[1], u[0]])
        pu, pv = h @ u, h @ v
        best = min(best, (pu.max() - pu.min()) * (pv.max() - pv.min()))
    return best


def test_criterion_02_convex_area(report):
    rng = np.random.default_rng(7)
    bad = []
    sandwiched = 0
    for i in range(50):
        C = gen_random_convex(int(rng.integers(3, 16)), seed=100 + i)
        ratio = float(np.exp(rng.uniform(0, math.log(400))))
        delta = polygon_area(C) / ratio
        plan = solve_convex_area(C, delta)
        sol = cut_convex_area(C, delta)
        if any(c.area > delta * (1 + 1e-9) for c in sol.cells):
            bad.append((i, "cell area", sol.max_measure, delta))
        if sol.count > 2 * math.ceil(math.sqrt(2 * polygon_area(C) / delta)):
            bad.append((i, "count bound", sol.count))
        box = independent_box_area(C)
        if plan.m != math.ceil(math.sqrt(box / delta)):
            bad.append((i, "grid order", plan.m, box / delta))
        if sol.count <= 16 and ratio <= 12:
            budget = OracleBudget(max_candidates=16, max_subset_size=sol.count, time_limit=20)
            res = exact_min_lasers(C, sol.lasers, delta, "area", budget)
            if res.known:
                sandwiched += 1
                if not lower_bound_convex_area(C, delta) <= res.k <= sol.count:
                    bad.append((i, "sandwich", lower_bound_convex_area(C, delta), res.k, sol.count))
    ok = not bad and sandwiched >= 10
    report(2, ok, f"50 convex polygons, {sandwiched} oracle sandwiches, {len(bad)} violations")
    assert not bad, bad[:5]
    assert sandwiched >= 10


# --------------------------------------------------------------------------- 3


def grid_candidates(P, step, cap):
    x0, y0, x1, y1 = P.bbox
    out = []
    for x in np.arange(x0 + step, x1 - 1e-9, step):
        out += vertical_chords(P, float(x))
    for y in np.arange(y0 + step, y1 - 1e-9, step):
        out += horizontal_chords(P, float(y))
    return out if len(out) <= cap else None


def test_criterion_03_bicriteria_diameter(report):
    bad = []
    for i in range(100):
        P = gen_random_simple(6 + i % 40, seed=300 + i)
        delta = P.diameter / (3 + i % 8)
        sol = bicriteria_diameter(P, delta)
        for c in decompose(P, sol.lasers).cells:
            x0, y0, x1, y1 = c.bbox
            if not (x1 - x0 < 3 * delta and y1 - y0 < 3 * delta):
                bad.append((i, "extent", x1 - x0, y1 - y0, delta))
        if sol.max_measure > 3 * math.sqrt(2) * delta + 1e-9:
            bad.append((i, "diameter", sol.max_measure))
    # tiny instances: rectangles up to 3.5 x 2 with the half-delta grid as candidates
    tiny = 0
    compared = 0
    delta = 1.0
    for w, h in itertools.product((1.5, 2.0, 2.5, 3.0, 3.5), (0.6, 1.0, 1.5, 2.0)):
        P = make_polygon(rect_ring(0, 0, w, h))
        cands = grid_candidates(P, delta / 2, 16)
        res = exact_min_lasers(P, cands, delta, "diameter",
                               OracleBudget(max_candidates=16, max_subset_size=len(cands)))
        if not res.known:
            bad.append(("tiny oracle", w, h))
            continue
        tiny += 1
        sol = bicriteria_diameter(P, delta)
        if sol.stats["k_V"] >= 1 and sol.stats["k_H"] >= 1:
            compared += 1
            if sol.count > 2 * (res.k - 1):
                bad.append(("tiny", w, h, sol.count, res.k))
    ok = not bad and tiny == 20
    report(3, ok, f"100 simple polygons, {tiny} oracle instances ({compared} with k_V, k_H >= 1), {len(bad)} violations")
    assert not bad, bad[:5]
    assert tiny == 20


# --------------------------------------------------------------------------- 4


def test_criterion_04_k_laser_diameter(report):
    bad = []
    for i in range(30):
        P = gen_random_simple(8 + i, seed=400 + i) if i % 3 else gen_random_orthogonal(12 + i, seed=400 + i)
        k = 2 + i % 9
        sol = solve_k_laser_diameter(P, k, 0.1)
        d0 = sol.stats["delta0"]
        tol = P.tau_snap
        if sol.count > k:
            bad.append((i, "count", sol.count, k))
        for c in decompose(P, sol.lasers).cells:
            for axis, origin in ((VERTICAL, sol.stats["origin_x"]), (HORIZONTAL, sol.stats["origin_y"])):
                met = lines_met(c.bbox, origin, d0, axis, tol)
                if len(met) > 3 or (met and met != list(range(met[0], met[0] + len(met)))):
                    bad.append((i, "lines met", axis, met))
        bound = 4 * math.sqrt(2) * d0
        if sol.stats["diameter_bound"] != bound or not verify_solution(P, sol.lasers, "diameter", bound + 1e-9).feasible:
            bad.append((i, "bound", sol.max_measure, bound))
    report(4, not bad, f"30 instances, budgets 2..10, {len(bad)} violations")
    assert not bad, bad[:5]


# --------------------------------------------------------------------------- 5


def test_criterion_05_histogram_sweep(report):
    bad = []
    for i in range(100):
        H = gen_random_histogram(3 + i % 10, seed=500 + i)
        base = Chord(Point(H.bbox[0], 0.0), Point(H.bbox[2], 0.0))
        delta = 0.8 + 0.1 * (i % 12)
        lasers, st = histogram_diameter_sweep(H, base, delta)
        width = H.bbox[2] - H.bbox[0]
        if any(c.diameter > delta * (1 + 1e-9) for c in decompose(H, lasers).cells):
            bad.append((i, "diameter"))
        if st.phase1 != math.ceil(2 * width / delta) - 1 or st.phase1 != phase1_count(width, delta):
            bad.append((i, "phase1", st.phase1, width / delta))
        if st.vertical > 2 * st.horizontal:
            bad.append((i, "v <= 2h", st.vertical, st.horizontal))
    ratios = []
    for i in range(6):
        H = gen_random_histogram(2 + i % 2, seed=550 + i, max_height=2.0)
        base = Chord(Point(H.bbox[0], 0.0), Point(H.bbox[2], 0.0))
        delta = 1.2
        lasers, _ = histogram_diameter_sweep(H, base, delta)
        C = axis_candidates(H, delta, "diameter")
        res = exact_min_lasers(H, C.chords, delta, "diameter", OracleBudget(max_candidates=40, max_subset_size=6,
                                                                            time_limit=30))
        if res.known:
            ratios.append(len(lasers) / max(res.k, 1))
    if not ratios or max(ratios) > 20:
        bad.append(("ratio", ratios))
    detail = f"100 histograms, {len(ratios)} oracle ratios (max {max(ratios, default=float('nan')):.2f}), {len(bad)} violations"
    report(5, not bad, detail)
    assert not bad, bad[:5]


# --------------------------------------------------------------------------- 6


def test_criterion_06_window_partition(report):
    bad = []
    worst = 0
    for i in range(50):
        P = gen_random_simple(10 + i % 25, seed=600 + i) if i % 2 else gen_random_orthogonal(10 + i % 30, seed=600 + i)
        measure = "diameter" if i % 3 else "area"
        delta = P.diameter / 5 if measure == "diameter" else P.area / 8
        wp = window_partition(P, delta, measure)
        counts = stabbing_counts(wp, random_axis_chords(P, 100, 600 + i))
        worst = max(worst, max(counts))
        if max(counts) > 3:
            bad.append((i, max(counts)))
    report(6, not bad, f"50 instances x 100 axis chords, max pieces crossed {worst}")
    assert not bad, bad[:5]


# --------------------------------------------------------------------------- 7


def test_criterion_07_dp_optimality(report):
    bad = []
    done = 0
    seed = 0
    while done < 30 and seed < 500:
        P = gen_random_pseudo_histogram(3 + seed % 2, 1 + seed % 2, seed)
        delta = 1.5 + 0.25 * (seed % 3)
        C = axis_candidates(P, delta, "area")
        seed += 1
        if len(C) > 14:
            continue
        base = Chord(Point(P.bbox[0], 0.0), Point(P.bbox[2], 0.0))
        kv, kh, _ = dp_min_laser_area(P, C, delta, base, objective="total").best()
        ex = exact_min_lasers(P, C.chords, delta, "area", OracleBudget(max_candidates=14, max_subset_size=14))
        done += 1
        if not ex.known or kv + kh != ex.k:
            bad.append((seed - 1, len(C), kv + kh, ex.k if ex.known else None))
    ok = not bad and done == 30
    report(7, ok, f"{done} pseudo-histograms with |C| <= 14, {len(bad)} count mismatches")
    assert not bad, bad
    assert done == 30


# --------------------------------------------------------------------------- 8


def test_criterion_08_holes_bicriteria(report):
    bad = []
    for i in range(15):
        P = gen_random_holed(10 + i % 8, holes=1 + i % 3, seed=800 + i)
        delta = P.diameter / (4 + i % 4)
        sol = bicriteria_holes(P, delta)
        tol = 1e-9 * P.diameter
        for cell in decompose(P, sol.lasers).cells:
            for axis, origin in ((VERTICAL, P.bbox[0]), (HORIZONTAL, P.bbox[1])):
                if len(lines_met(cell.bbox, origin, delta, axis, tol)) > 1:
                    bad.append((i, "grid lines", axis))
        st = holes_state(P, delta)
        for axis in (VERTICAL, HORIZONTAL):
            for path in st.paths[axis]:
                if len(path) > 3 * path.associated_count:
                    bad.append((i, "link bound", len(path), path.associated_count))
            for s in make_strips(P, delta, axis):
                if s.full and not separates(s, [c for p in st.paths[axis] if p.strip == s.index for c in p.lasers]):
                    bad.append((i, "separation", axis, s.index))
    tiny = []
    for j, (w, h, hole) in enumerate([
        (3, 0.8, (1.2, 0.3, 1.8, 0.5)), (2, 2, (0.7, 0.7, 1.3, 1.3)), (3, 1.2, (1.3, 0.3, 2.1, 0.4)),
        (2.5, 1.5, (0.4, 0.5, 0.9, 1.0)), (3, 1, (0.5, 0.3, 2.5, 0.7)), (2, 1.6, (1.1, 0.2, 1.6, 1.3)),
        (1.8, 1.8, (0.5, 0.5, 1.0, 1.0)), (2.6, 1.1, (1.6, 0.2, 2.2, 0.9)), (3.2, 0.9, (0.3, 0.3, 0.8, 0.6)),
        (2.4, 2.1, (0.9, 1.2, 1.5, 1.8)),
    ]):
        P = make_polygon(rect_ring(0, 0, w, h), [rect_ring(*hole)])
        delta = 1.0
        cands = grid_candidates(P, 0.5, 16)
        res = exact_min_lasers(P, cands, delta, "diameter",
                               OracleBudget(max_candidates=16, max_subset_size=len(cands)))
        sol = bicriteria_holes(P, delta)
        if not res.known or sol.count > 6 * res.k:
            bad.append(("tiny", j, sol.count, res.k if res.known else None))
        tiny.append((sol.count, res.k if res.known else None))
    report(8, not bad, f"15 holed instances + 10 tiny oracle instances (count, k*) = {tiny}, {len(bad)} violations")
    assert not bad, bad[:5]


# --------------------------------------------------------------------------- 9


def inradius_bound_ok(P, lasers, r):
    for c in decompose(P, lasers).cells:
        tau = 1e-4 * c.diameter
        if largest_inscribed_disk(c.boundary, tau_r=tau, delta=r)[0] > r + tau:
            return False
    return True


def solver_universe(P, r, axis_only, max_bands=150):
    """The pinned disks and greedy picks along the same path the solver takes."""
    C = useful_candidates(P, candidate_chords(P, grid_points(P, r, 0), r, axis_only), r)
    if len(C) <= max_bands:
        D = pinned_disks(P, C, r)
        inst = cover_instance(P, C, D)
        return D, inst, greedy_cover(inst) if len(D) else []
    picked, D, _ = lazy_cover(P, C, r)
    return D, None, picked


def test_criterion_09_circle_pipeline(report):
    bad = []
    instances = [("square", SQ4, 1.0), ("holed", HOLED6, 1.0), ("twin", TWIN, 1.0)]
    P = gen_random_holed(10, holes=1, seed=4)
    instances.append(("random", P, P.diameter / 10))
    log_checked = 0
    for name, P, r in instances:
        for axis_only in (False, True):
            sol = solve_min_laser_circle(P, r, axis_only)
            D, inst, picked = solver_universe(P, r, axis_only)
            if keys(picked) != keys(sol.lasers):
                bad.append((name, axis_only, "solver picks differ"))
            tol = 1e-9 * max(1.0, P.diameter)
            if len(D) and not hit_matrix(D.centers, picked, r, tol).any(axis=1).all():
                bad.append((name, axis_only, "pinned disk missed"))
            samples = sample_disks(P, r, 1000, seed=11)
            if not hit_matrix(samples, sol.lasers, r, tol).any(axis=1).all():
                bad.append((name, axis_only, "sampled disk missed"))
            if not inradius_bound_ok(P, sol.lasers, r):
                bad.append((name, axis_only, "inradius"))
            if inst is not None and 0 < len(D) <= 20:
                opt = exact_set_cover(inst.sets, len(D), 8)
                log_checked += 1
                if opt is None or len(picked) > (1 + math.log(len(D))) * len(opt):
                    bad.append((name, axis_only, "greedy bound", len(picked), opt))
            if name == "square" and sol.count > 4:
                bad.append(("square count", sol.count))
    ok = not bad and log_checked >= 2
    report(9, ok, f"{len(instances)} instances x 2 variants, {log_checked} greedy-vs-exact checks, {len(bad)} violations")
    assert not bad, bad
    assert log_checked >= 2


# --------------------------------------------------------------------------- 10


def satisfiable_formulas(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(3, 4)
        m = rng.randint(1, 3)
        clauses = []
        for _ in range(m):
            vs = rng.sample(range(1, n + 1), 3)
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
        phi = CnfFormula(n, clauses)
        sats = [a for a in itertools.product([False, True], repeat=n) if phi.satisfied_by(a)]
        if sats:
            out.append((phi, list(rng.choice(sats))))
    return out


def test_criterion_10_gadget_witness(report):
    bad = []
    worst_area = worst_r = 0.0
    tau = 1e-4
    for phi, a in satisfiable_formulas(10, 10):
        k = 3 * phi.m + 2 * phi.n + 5
        G = gen_area_gadget(phi, a)
        rep = verify_solution(G.polygon, G.witness_lasers, "area", 2.0)
        worst_area = max(worst_area, rep.worst_value)
        if G.k != k or len(G.witness_lasers) != k or not rep.worst_value < 2:
            bad.append(("area", phi.clauses, a, rep.worst_value))
        Gc = gen_circle_gadget(phi, a)
        rc = verify_solution(Gc.polygon, Gc.witness_lasers, "incircle", 0.625, tau_r=tau)
        worst_r = max(worst_r, rc.worst_value)
        if Gc.k != k or len(Gc.witness_lasers) != k or not rc.worst_value <= 0.625 + tau:
            bad.append(("circle", phi.clauses, a, rc.worst_value))
    report(10, not bad, f"10 formulas, max witness area {worst_area:.4f} < 2, max inradius {worst_r:.5f} <= 0.625 + {tau}")
    assert not bad, bad


# --------------------------------------------------------------------------- 11


def test_criterion_11_determinism(report, tmp_path):
    write_polygon(gen_random_simple(18, seed=3), tmp_path / "simple.json")
    write_polygon(gen_random_holed(12, holes=2, seed=3), tmp_path / "holed.json")
    write_polygon(gen_random_convex(9, seed=3), tmp_path / "convex.json")
    write_polygon(gen_random_orthogonal(20, seed=3), tmp_path / "ortho.json")
    runs = [
        ("convex.json", ["--measure", "area", "--threshold", "0.5"]),
        ("simple.json", ["--measure", "area", "--threshold", "5"]),
        ("ortho.json", ["--measure", "area", "--threshold", "2", "--axis-only"]),
        ("simple.json", ["--measure", "diameter", "--threshold", "3"]),
        ("simple.json", ["--measure", "diameter", "--budget", "6"]),
        ("ortho.json", ["--measure", "diameter", "--threshold", "2", "--axis-only"]),
        ("holed.json", ["--measure", "diameter", "--threshold", "4", "--axis-only"]),
        ("holed.json", ["--measure", "diameter", "--budget", "5", "--axis-only", "--holes"]),
        ("holed.json", ["--measure", "incircle", "--threshold", "1.5", "--seed", "7"]),
    ]
    bad = []
    for j, (inp, args) in enumerate(runs):
        outs = []
        for rep in range(3):
            out = tmp_path / f"s{j}_{rep}.json"
            env = dict(os.environ, PYTHONHASHSEED=str(rep * 101))
            cmd = [sys.executable, "-m", "chordcut.cli", "solve", "-i", str(tmp_path / inp), "-o", str(out)] + args
            proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
            if proc.returncode != 0:
                bad.append((j, "exit", proc.returncode, proc.stderr[-200:]))
                break
            outs.append(out.read_bytes())
        if len(outs) == 3 and not outs[0] == outs[1] == outs[2]:
            bad.append((j, "bytes differ", args))
    report(11, not bad, f"{len(runs)} solver configurations x 3 processes, {len(bad)} mismatches")
    assert not bad, bad
