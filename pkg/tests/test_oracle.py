import math
from itertools import combinations

import pytest

from chordcut.arrangement import largest_inscribed_disk
from chordcut.geometry import Chord, Point, make_polygon, vertical_chords
from chordcut.instances import CnfFormula, gen_area_gadget
from chordcut.oracle import (
    Exact,
    OracleBudget,
    Unknown,
    colex_combinations,
    exact_min_lasers,
    exact_set_cover,
    inradius_bruteforce,
    verify_solution,
)


def rect(w, h):
    return make_polygon([(0, 0), (w, 0), (w, h), (0, h)])


def vchord(x, h):
    return Chord(Point(x, 0.0), Point(x, h))


def test_two_by_one_needs_one_chord():
    res = exact_min_lasers(rect(2, 1), [vchord(1, 1)], 1.0, "area")
    assert isinstance(res, Exact) and res.k == 1


def test_unit_square_needs_none(unit_square):
    res = exact_min_lasers(unit_square, [Chord(Point(0.5, 0), Point(0.5, 1))], 1.0, "area")
    assert res.known and res.k == 0 and res.witness == ()


def test_thin_strip_grid_chords():
    # Pieces of a 10 x 0.5 strip cut at x = 1..9 are 1 x 0.5 rectangles of
    # diameter sqrt(1.25) > 1, so delta = 1 is infeasible over these candidates.
    P = rect(10, 0.5)
    cands = [vchord(x, 0.5) for x in range(1, 10)]
    budget = OracleBudget(max_candidates=16, max_subset_size=9)
    assert not exact_min_lasers(P, cands, 1.0, "diameter", budget).known
    res = exact_min_lasers(P, cands, math.sqrt(1.25), "diameter", budget)
    assert res.known and res.k == 9
    assert res.tested[8] == math.comb(9, 8)


def test_witness_minimality_counts():
    P = rect(4, 1)
    cands = [vchord(x, 1) for x in (0.5, 1, 1.5, 2, 2.5, 3, 3.5)]
    res = exact_min_lasers(P, cands, 1.0, "area", OracleBudget(max_subset_size=4))
    assert res.k == 3
    assert res.tested[res.k - 1] == math.comb(len(cands), res.k - 1)
    # colex-first feasible triple
    assert [c.a.x for c in res.witness] == [1, 2, 3]


def test_monotone_in_delta():
    P = make_polygon([(0, 0), (3, 0), (3, 1), (1, 1), (1, 3), (0, 3)])
    cands = []
    for x in (0.5, 1, 1.5, 2, 2.5):
        cands += vertical_chords(P, x)
    ks = []
    for d in (0.75, 1.0, 1.5, 2.5, 5.0):
        res = exact_min_lasers(P, cands, d, "area", OracleBudget(max_subset_size=6))
        ks.append(res.k if res.known else math.inf)
    assert ks == sorted(ks, reverse=True)


def test_budget_exceeded_is_unknown():
    cands = [vchord(0.1 * i, 1) for i in range(1, 20)]
    res = exact_min_lasers(rect(2, 1), cands, 0.01, "area")
    assert isinstance(res, Unknown) and "budget" in res.reason


def test_time_limit_is_unknown():
    cands = [vchord(0.2 * i, 1) for i in range(1, 10)]
    res = exact_min_lasers(rect(2, 1), cands, 1e-3, "area", OracleBudget(max_subset_size=9, time_limit=0.0))
    assert isinstance(res, Unknown)


def test_colex_order():
    got = list(colex_combinations(4, 2))
    assert got == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    assert sorted(got) == sorted(combinations(range(4), 2))


def test_exact_set_cover():
    sets = [{0, 1}, {1, 2}, {2, 3}, {0, 3}]
    assert exact_set_cover(sets, 4) == (0, 2)
    assert exact_set_cover([{0}, {1}], 3) is None
    assert exact_set_cover([], 0) == ()


@pytest.mark.parametrize("w,h,expect", [(1, 1, 0.5), (2, 1, 0.5)])
def test_inradius_bruteforce_rectangles(w, h, expect):
    pitch = 1e-3 if w == 1 else 2e-3
    r = inradius_bruteforce(rect(w, h), pitch)
    assert abs(r - expect) <= pitch * math.sqrt(2) / 2


def test_inradius_bruteforce_matches_measure_on_l_cell(l_polygon):
    pitch = 2e-3
    brute = inradius_bruteforce(l_polygon, pitch)
    fast, _ = largest_inscribed_disk(l_polygon, tau_r=1e-5)
    assert abs(brute - fast) <= pitch * math.sqrt(2) / 2 + 1e-5
    assert fast >= brute - 1e-12


def test_verify_deleting_a_laser_breaks_tight_solution():
    P = rect(4, 1)
    lasers = [vchord(x, 1) for x in (1, 2, 3)]
    assert verify_solution(P, lasers, "area", 1.0).feasible
    for drop in range(3):
        rep = verify_solution(P, [c for i, c in enumerate(lasers) if i != drop], "area", 1.0)
        assert not rep.feasible
        assert rep.worst_value == pytest.approx(2.0)
        assert rep.counts["lasers"] == 2


def test_verify_gadget_witness():
    G = gen_area_gadget(CnfFormula(3, [(1, 2, 3)]), [True, True, True])
    rep = verify_solution(G.polygon, G.witness_lasers, "area", 2.0)
    assert rep.feasible and rep.worst_value < 2
    # Interior separators, variable and clause lasers are each essential.
    for i, role in enumerate(G.witness_roles):
        if role.startswith("variable") or role in ("separator x=2", "separator y=3", "clause c1"):
            rest = [c for j, c in enumerate(G.witness_lasers) if j != i]
            rep = verify_solution(G.polygon, rest, "area", 2.0)
            assert not rep.feasible and rep.worst_value > 2
