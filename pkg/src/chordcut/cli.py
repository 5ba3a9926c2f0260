"""Command line: solve, verify, render, generate and oracle subcommands.

Exit codes: 0 ok, 1 input error, 2 unsupported variant, 3 degenerate budget,
4 verified infeasible.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from dataclasses import dataclass
from typing import Optional

from chordcut.errors import ChordCutError, DegenerateBudget, UnsupportedVariant
from chordcut.geometry import Polygon, horizontal_chords, is_convex, vertical_chords

log = logging.getLogger("chordcut")

EXIT_OK, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_BUDGET, EXIT_INFEASIBLE = 0, 1, 2, 3, 4
MEASURES = ("area", "diameter", "incircle")


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    svg: Optional[str] = None
    measure: Optional[str] = None
    threshold: Optional[float] = None
    budget: Optional[int] = None
    epsilon: float = 0.1
    axis_only: bool = False
    holes: bool = False
    seed: int = 0
    tau_r: Optional[float] = None


def _route(P: Polygon, cfg: RunConfig):
    """Pick the solver for (measure, objective, axis restriction, holes)."""
    from chordcut import area, axis, circle, convex, diameter, holes

    holed = cfg.holes or bool(P.holes)
    if cfg.measure == "area":
        if cfg.budget is not None:
            raise UnsupportedVariant("no approximation is known for the k-laser area variant")
        if holed:
            raise UnsupportedVariant("the area variant is only supported for polygons without holes")
        if cfg.axis_only:
            return lambda: axis.solve_axis_area(P, cfg.threshold)
        if is_convex(P):
            return lambda: convex.cut_convex_area(P, cfg.threshold)
        return lambda: area.solve_min_laser_area(P, cfg.threshold)
    if cfg.measure == "diameter":
        if cfg.budget is not None:
            if not holed:
                return lambda: diameter.solve_k_laser_diameter(P, cfg.budget, cfg.epsilon)
            if cfg.axis_only:
                return lambda: holes.solve_k_laser_holes(P, cfg.budget, cfg.epsilon)
            raise UnsupportedVariant("the k-laser diameter variant with holes needs --axis-only")
        if holed:
            if cfg.axis_only:
                return lambda: holes.bicriteria_holes(P, cfg.threshold)
            raise UnsupportedVariant("the diameter variant with holes needs --axis-only")
        if cfg.axis_only:
            return lambda: axis.solve_axis_diameter(P, cfg.threshold)
        return lambda: diameter.bicriteria_diameter(P, cfg.threshold)
    if cfg.budget is not None:
        raise UnsupportedVariant("no approximation is known for the k-laser in-circle variant")
    return lambda: circle.solve_min_laser_circle(P, cfg.threshold, cfg.axis_only, seed=cfg.seed, tau_r=cfg.tau_r)


def _check_objective(cfg: RunConfig) -> None:
    if (cfg.threshold is None) == (cfg.budget is None):
        raise ValueError("give exactly one of --threshold and --budget")
    if cfg.threshold is not None and not cfg.threshold > 0:
        raise ValueError("--threshold must be positive")


def cmd_solve(cfg: RunConfig) -> int:
    from chordcut import io

    _check_objective(cfg)
    P = io.read_polygon(cfg.input)
    run = _route(P, cfg)
    try:
        sol = run()
        code = EXIT_OK
    except DegenerateBudget as e:
        print(f"degenerate budget: {e}", file=sys.stderr)
        if e.solution is None:
            return EXIT_BUDGET
        sol, code = e.solution, EXIT_BUDGET
    _emit(io.dumps_solution(sol), cfg.output)
    if cfg.svg:
        with open(cfg.svg, "w") as f:
            f.write(io.render_svg(P, solution=sol))
    log.info("%s: %d lasers, max %s %.6g", sol.algorithm, sol.count, sol.measure.value, sol.max_measure)
    return code


def cmd_verify(cfg: RunConfig, solution_path: str) -> int:
    from chordcut import io
    from chordcut.oracle import verify_solution

    if cfg.threshold is None or not cfg.threshold > 0:
        raise ValueError("verify needs a positive --threshold")
    P = io.read_polygon(cfg.input)
    lasers = io.read_solution_lasers(solution_path)
    rep = verify_solution(P, lasers, cfg.measure, cfg.threshold, tau_r=cfg.tau_r)
    print(json.dumps(io._plain(rep.as_dict()), sort_keys=True))
    print("feasible" if rep.feasible else "infeasible")
    return EXIT_OK if rep.feasible else EXIT_INFEASIBLE


def cmd_render(cfg: RunConfig, solution_path: Optional[str]) -> int:
    from chordcut import io
    from chordcut.solution import evaluate

    P = io.read_polygon(cfg.input)
    sol = None
    if solution_path:
        lasers = io.read_solution_lasers(solution_path)
        sol = evaluate(P, lasers, cfg.measure or "area", algorithm="render", threshold=cfg.threshold, tau_r=cfg.tau_r)
    _emit(io.render_svg(P, solution=sol, threshold=cfg.threshold), cfg.output)
    return EXIT_OK


def parse_formula(text: str):
    """Clauses as signed integers; ';' or newlines separate clauses, a trailing 0 is optional.

    DIMACS headers ("p cnf n m") and comment lines ("c ...") are accepted.
    """
    from chordcut.instances import CnfFormula

    num_vars = None
    clauses = []
    for line in re.split(r"[;\n]", text):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) < 3 or parts[1] != "cnf":
                raise ValueError(f"bad header {line!r}")
            num_vars = int(parts[2])
            continue
        lits = [int(t) for t in line.split()]
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if lits:
            clauses.append(tuple(lits))
    if not clauses:
        raise ValueError("the formula has no clauses")
    n = num_vars if num_vars is not None else max(abs(l) for c in clauses for l in c)
    return CnfFormula(n, clauses)


def parse_assignment(text: str, n: int) -> list:
    """'1 0 1', 'TFT' or signed literals '1 -2 3' for variables 1..n."""
    toks = text.replace(",", " ").split()
    if len(toks) == 1 and re.fullmatch(r"[01TFtf]+", toks[0]) and len(toks[0]) == n:
        toks = list(toks[0])
    if len(toks) != n:
        raise ValueError(f"the assignment must give {n} values")
    vals = []
    for i, t in enumerate(toks, start=1):
        if t in ("1", "T", "t"):
            vals.append(True)
        elif t in ("0", "F", "f"):
            vals.append(False)
        elif re.fullmatch(r"-?\d+", t) and abs(int(t)) == i:
            vals.append(int(t) > 0)
        else:
            raise ValueError(f"cannot read value {t!r} for variable {i}")
    return vals


def cmd_generate(args) -> int:
    from chordcut import instances, io

    meta: dict = {"seed": args.seed}
    if args.gadget:
        phi = parse_formula(args.formula)
        assignment = parse_assignment(args.assignment, phi.n) if args.assignment else None
        gen = instances.gen_area_gadget if args.gadget == "area" else instances.gen_circle_gadget
        G = gen(phi, assignment)
        P = G.polygon
        meta = {
            "gadget": args.gadget,
            "m": phi.m,
            "n": phi.n,
            "k": G.k,
            "measure": G.measure,
            "threshold": G.threshold,
            "corridor_width": G.corridor_width,
            "box": list(G.box),
            "rooms": G.room_counts(),
        }
        if G.witness_lasers is not None:
            meta["witness"] = [[list(c.a), list(c.b)] for c in G.witness_lasers]
        rooms = G.rooms
    else:
        kind, n = args.random, args.n
        if kind == "simple":
            P = instances.gen_random_simple(n, args.seed)
        elif kind == "convex":
            P = instances.gen_random_convex(n, args.seed)
        elif kind == "orthogonal":
            P = instances.gen_random_orthogonal(n, args.seed)
        elif kind == "holed":
            P = instances.gen_random_holed(n, args.holes_count, args.seed)
        else:
            P = instances.gen_random_histogram(n, args.seed)
        meta.update({"random": kind, "n": n})
        rooms = ()
    _emit(io.dumps_polygon(P, meta), args.output)
    if args.svg:
        with open(args.svg, "w") as f:
            f.write(io.render_svg(P, rooms=rooms))
    return EXIT_OK


def axis_candidates(P: Polygon) -> list:
    """Vertical and horizontal maximal chords through every vertex, without repeats."""
    out, seen = [], set()
    xs = sorted({x for r in P.rings for x, _ in r})
    ys = sorted({y for r in P.rings for _, y in r})
    for x in xs:
        for c in vertical_chords(P, x):
            key = c.canonical().as_tuple()
            if key not in seen:
                seen.add(key)
                out.append(c)
    for y in ys:
        for c in horizontal_chords(P, y):
            key = c.canonical().as_tuple()
            if key not in seen:
                seen.add(key)
                out.append(c)
    return out


def cmd_oracle(cfg: RunConfig, max_candidates: int, max_subset_size: int) -> int:
    from chordcut import io
    from chordcut.oracle import OracleBudget, exact_min_lasers

    if cfg.threshold is None or not cfg.threshold > 0:
        raise ValueError("oracle needs a positive --threshold")
    P = io.read_polygon(cfg.input)
    cands = axis_candidates(P)
    if len(cands) > max_candidates:
        print(f"note: {len(cands)} axis chords, keeping the {max_candidates} longest", file=sys.stderr)
        cands = sorted(cands, key=lambda c: (-c.length, c.canonical().as_tuple()))[:max_candidates]
    res = exact_min_lasers(P, cands, cfg.threshold, cfg.measure,
                           OracleBudget(max_candidates=max_candidates, max_subset_size=max_subset_size))
    out = {"known": res.known, "k": res.k if res.known else None, "candidates": len(cands)}
    if res.known:
        out["lasers"] = [[list(c.a), list(c.b)] for c in res.witness]
    _emit(json.dumps(io._plain(out), indent=2, sort_keys=True) + "\n", cfg.output)
    return EXIT_OK


def _emit(text: str, path: Optional[str]) -> None:
    if path and path != "-":
        with open(path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chordcut", description="Cut polygons into small cells with chords.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, measure_required=True):
        sp.add_argument("--input", "-i", required=True, help="polygon JSON file")
        sp.add_argument("--output", "-o", help="output file (default: stdout)")
        sp.add_argument("--measure", choices=MEASURES, required=measure_required)
        sp.add_argument("--threshold", type=float, help="cell size bound delta")
        sp.add_argument("--tolerance-inradius", type=float, dest="tau_r", help="in-circle tolerance tau_r")

    s = sub.add_parser("solve", help="place lasers")
    common(s)
    s.add_argument("--budget", type=int, help="number of lasers k")
    s.add_argument("--epsilon", type=float, default=0.1)
    s.add_argument("--axis-only", action="store_true")
    s.add_argument("--holes", action="store_true", help="treat the input as a polygon with holes")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--svg", help="also write a picture of the solution")

    v = sub.add_parser("verify", help="check a laser set against a threshold")
    common(v)
    v.add_argument("--solution", "-s", required=True)

    r = sub.add_parser("render", help="draw a polygon and optionally a solution")
    common(r, measure_required=False)
    r.add_argument("--solution", "-s")

    g = sub.add_parser("generate", help="write a gadget or random polygon")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--gadget", choices=("area", "circle"))
    src.add_argument("--random", choices=("simple", "convex", "orthogonal", "holed", "histogram"))
    g.add_argument("--formula", help="3CNF clauses, e.g. '1 2 3; -1 2 4'")
    g.add_argument("--assignment", help="truth values, e.g. '1 0 1'")
    g.add_argument("-n", type=int, default=12, help="vertex count (or steps for histograms)")
    g.add_argument("--holes-count", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--output", "-o")
    g.add_argument("--svg")

    o = sub.add_parser("oracle", help="exact minimum over axis-parallel vertex chords")
    common(o)
    o.add_argument("--max-candidates", type=int, default=16)
    o.add_argument("--max-subset-size", type=int, default=5)
    return p


def _setup_logging() -> None:
    level = os.environ.get("CHORDCUT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        output=getattr(args, "output", None),
        svg=getattr(args, "svg", None),
        measure=getattr(args, "measure", None),
        threshold=getattr(args, "threshold", None),
        budget=getattr(args, "budget", None),
        epsilon=getattr(args, "epsilon", 0.1),
        axis_only=getattr(args, "axis_only", False),
        holes=getattr(args, "holes", False),
        seed=getattr(args, "seed", 0),
        tau_r=getattr(args, "tau_r", None),
    )
    try:
        if args.command == "solve":
            return cmd_solve(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.solution)
        if args.command == "render":
            return cmd_render(cfg, args.solution)
        if args.command == "generate":
            if args.gadget and not args.formula:
                raise ValueError("--gadget needs --formula")
            return cmd_generate(args)
        return cmd_oracle(cfg, args.max_candidates, args.max_subset_size)
    except UnsupportedVariant as e:
        print(f"unsupported variant: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DegenerateBudget as e:
        print(f"degenerate budget: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ChordCutError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
