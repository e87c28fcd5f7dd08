"""Command-line surface: generate boundary data, solve, verify, trace.

Reports are JSON with sorted keys and compact separators, doubles rendered
as 17-significant-digit strings and exact rationals as "p/q", so identical
inputs (including seeds) produce byte-identical output.  SVG renderings are
documentation, never a source of truth.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional

import numpy as np

from . import __version__
from .circle_geometry import Angle, Arc, DomainError
from .boundary_data import PiecewiseConstantBoundary, build_fn, build_gn
from .chord_solver import ChordConfiguration, solve_binary
from .level_stack import (
    DEFAULT_SEED,
    LevelSetStack,
    NestednessError,
    bv_energy,
    solve_general,
)
from . import analysis


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_dict(rep: analysis.ScenarioReport) -> dict:
    return {
        "scenario": rep.scenario,
        "seed": rep.seed,
        "version": __version__,
        "verdicts": [
            {
                "name": v.name,
                "value": _json_value(v.value),
                "tolerance": None if v.tolerance is None else _fmt(v.tolerance),
                "pass": bool(v.passed),
            }
            for v in rep.verdicts
        ],
    }


def _merge_reports(name: str, parts: List[analysis.ScenarioReport], seed: int) -> analysis.ScenarioReport:
    merged = analysis.ScenarioReport(name, seed=seed)
    for part in parts:
        for v in part.verdicts:
            merged.add(f"{part.scenario}: {v.name}", v.value, v.tolerance, v.passed)
    return merged


# ---------------------------------------------------------------------------
# generate

def cmd_generate(args) -> int:
    kind = args.spec[0]
    if kind in ("cantor-fn", "cantor-gn"):
        if len(args.spec) != 2 or not args.spec[1].isdigit():
            print(f"usage: generate {kind} <stage>", file=sys.stderr)
            return 2
        n = int(args.spec[1])
        try:
            data = build_fn(n) if kind == "cantor-fn" else build_gn(n)
        except DomainError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    elif kind == "notconverge":
        bps = [Angle.of_pi(Fraction(2 * k + 1, 4)) for k in range(4)]
        data = PiecewiseConstantBoundary(bps, [1.0, 0.0, 1.0, 0.0])
    elif kind == "arcs":
        if len(args.spec) != 2:
            print("usage: generate arcs '<json list of [start, end]>'", file=sys.stderr)
            return 2
        try:
            raw = json.loads(args.spec[1])
            if not isinstance(raw, list):
                raise ValueError("expected a JSON list")
            if not raw:
                data = PiecewiseConstantBoundary.constant(0.0)
            else:
                arcs = [Arc(Angle.of_radians(float(s)), Angle.of_radians(float(e))) for s, e in raw]
                data = PiecewiseConstantBoundary.from_arcs(arcs, 1.0, 0.0)
        except (ValueError, TypeError, DomainError) as exc:
            print(f"error: malformed arcs spec: {exc}", file=sys.stderr)
            return 2
    else:
        print(f"error: unknown generator {kind!r}", file=sys.stderr)
        return 2
    _write(_dump(data.to_json_dict()), args.out)
    return 0


# ---------------------------------------------------------------------------
# solve

def _load_data(path: str) -> PiecewiseConstantBoundary:
    with open(path) as fh:
        return PiecewiseConstantBoundary.from_json_dict(json.load(fh))


def _config_dict(cfg: ChordConfiguration) -> dict:
    return {
        "energy": _fmt(cfg.energy),
        "label_area": _fmt(cfg.label_area),
        "matching": [[int(i), int(j)] for i, j in cfg.matching],
        "base_value": cfg.base_value,
        "transition_angles": [_fmt(t.angle.normalized().radians) for t in cfg.transitions],
    }


def cmd_solve(args) -> int:
    try:
        data = _load_data(args.input)
        if data.is_binary:
            cfg = solve_binary(data, args.mode)
            report = {"mode": args.mode, "kind": "binary", **_config_dict(cfg)}
            stack = None
        else:
            stack = solve_general(data, args.mode, samples=args.samples, seed=args.seed)
            report = {
                "mode": args.mode,
                "kind": "stack",
                "bv_energy": _fmt(bv_energy(stack)),
                "values": [_fmt(v) for v in stack.values],
                "levels": [
                    {"threshold": _fmt(sl.threshold), "gap": _fmt(sl.gap), **_config_dict(sl.config)}
                    for sl in stack.slices
                ],
            }
            cfg = None
    except (DomainError, NestednessError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    if args.render:
        svg = render_svg(data, cfg if cfg is not None else stack)
        with open(args.render, "w") as fh:
            fh.write(svg)
    _write(_dump(report), args.out)
    return 0


# ---------------------------------------------------------------------------
# SVG rendering

_SIZE = 1000
_CX = _CY = 500
_R = 450
_ARC_PALETTE = ["#7570b3", "#d95f02", "#1b9e77", "#e7298a", "#66a61e", "#e6ab02"]
_CHORD_COLOR = "#333333"
_FILL = "#d95f02"


def _xy(angle_rad: float):
    return _CX + _R * math.cos(angle_rad), _CY - _R * math.sin(angle_rad)


def _arc_path_to(a: float, b: float) -> str:
    """SVG arc continuation from the point at angle a ccw to angle b."""
    meas = (b - a) % math.tau
    large = 1 if meas > math.pi else 0
    x, y = _xy(b)
    return f"A {_R} {_R} 0 {large} 0 {x:.3f} {y:.3f}"


def _cell_path(cell) -> str:
    from .circle_geometry import ArcEdge

    start = cell.edges[0].start.normalized().radians
    x0, y0 = _xy(start)
    parts = [f"M {x0:.3f} {y0:.3f}"]
    for edge in cell.edges:
        a = edge.start.normalized().radians
        b = edge.end.normalized().radians
        if isinstance(edge, ArcEdge):
            parts.append(_arc_path_to(a, b))
        else:
            x, y = _xy(b)
            parts.append(f"L {x:.3f} {y:.3f}")
    parts.append("Z")
    return " ".join(parts)


def _render_config(cfg: ChordConfiguration, opacity: float = 0.35) -> List[str]:
    parts = []
    for cell, label in cfg.cells():
        if label != 1:
            continue
        parts.append(
            f'<path d="{_cell_path(cell)}" fill="{_FILL}" fill-opacity="{opacity:.3f}" stroke="none"/>'
        )
    if cfg.n_chords == 0 and cfg.base_value == 1:
        parts.append(
            f'<circle cx="{_CX}" cy="{_CY}" r="{_R}" fill="{_FILL}" fill-opacity="{opacity:.3f}"/>'
        )
    for i, j in cfg.matching:
        xa, ya = _xy(cfg.transitions[i].angle.normalized().radians)
        xb, yb = _xy(cfg.transitions[j].angle.normalized().radians)
        parts.append(
            f'<line x1="{xa:.3f}" y1="{ya:.3f}" x2="{xb:.3f}" y2="{yb:.3f}" '
            f'stroke="{_CHORD_COLOR}" stroke-width="3"/>'
        )
    return parts


def render_svg(data: PiecewiseConstantBoundary, solution) -> str:
    """Unit circle, data arcs colored by value, chords, shaded level regions."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
    ]
    if isinstance(solution, LevelSetStack):
        n = max(len(solution.slices), 1)
        for sl in solution.slices:
            parts.extend(_render_config(sl.config, opacity=0.7 / n))
    elif solution is not None:
        parts.extend(_render_config(solution))
    parts.append(
        f'<circle cx="{_CX}" cy="{_CY}" r="{_R}" fill="none" stroke="black" stroke-width="2"/>'
    )
    values = sorted(set(data.values))
    color_of = {v: _ARC_PALETTE[i % len(_ARC_PALETTE)] for i, v in enumerate(values)}
    if not data.is_constant:
        bps = [bp.normalized().radians for bp in data.breakpoints]
        for i, v in enumerate(data.values):
            a = bps[i]
            b = bps[(i + 1) % len(bps)]
            xa, ya = _xy(a)
            parts.append(
                f'<path d="M {xa:.3f} {ya:.3f} {_arc_path_to(a, b)}" fill="none" '
                f'stroke="{color_of[v]}" stroke-width="8"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# verify

def _suite_monotone(args) -> analysis.ScenarioReport:
    fixed = PiecewiseConstantBoundary(
        [
            Angle(Fraction(1, 4), 0),
            Angle(Fraction(3, 4), 0),
            Angle(Fraction(9, 8), 0),
            Angle(Fraction(7, 4), 0),
        ],
        [1.0, 0.0, 1.0, 0.0],
    )
    caps = PiecewiseConstantBoundary(
        [Angle.of_pi(Fraction(2 * k + 1, 4)) for k in range(4)], [1.0, 0.0, 1.0, 0.0]
    )
    rep_a = analysis.monotone_pipeline(fixed, 5, samples=args.samples, seed=args.seed)
    rep_a.scenario = "fixed-arcs"
    rep_b = analysis.monotone_pipeline(caps, 5, samples=args.samples, seed=args.seed)
    rep_b.scenario = "opposite-caps"
    return _merge_reports("monotone", [rep_a, rep_b], args.seed)


def _suite_inequalities(args) -> analysis.ScenarioReport:
    rep_a = analysis.trapezoid_check(10)
    rep_b = analysis.sin_meanval_check(range(6, 21), Fraction(1, 4))
    return _merge_reports("inequalities", [rep_a, rep_b], args.seed)


def cmd_verify(args) -> int:
    suites = {
        "nonexistence": lambda: analysis.cantor_nonexistence_demo(8, seed=args.seed),
        "nonlinearity": lambda: analysis.nonlin_demo(8, seed=args.seed),
        "nonlocality": lambda: analysis.nonlocality_demo(1, 1, seed=args.seed),
        "monotone": lambda: _suite_monotone(args),
        "inequalities": lambda: _suite_inequalities(args),
        "oracle": lambda: analysis.oracle_check(200, seed=args.seed),
    }
    try:
        rep = suites[args.suite]()
    except (DomainError, NestednessError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    _write(_dump(_report_dict(rep)), args.out)
    return 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# trace

def cmd_trace(args) -> int:
    try:
        data = _load_data(args.input)
        if data.is_binary:
            fn = analysis.config_to_function(solve_binary(data))
        else:
            fn = solve_general(data, seed=args.seed)
        est = analysis.trace(
            fn, args.angle, r0=args.r0, levels=args.levels, samples=args.samples, seed=args.seed
        )
    except (DomainError, NestednessError, OSError, ValueError, KeyError) as exc:
        sys.stderr.write(_dump({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    report = {
        "point": _fmt(est.point),
        "radii": [_fmt(r) for r in est.radii],
        "averages": [_fmt(a) for a in est.averages],
        "stderrs": [_fmt(s) for s in est.stderrs],
        "limit": _fmt(est.limit),
        "residual": _fmt(est.residual),
        "starved": est.starved,
        "seed": args.seed,
        "version": __version__,
    }
    _write(_dump(report), args.out)
    return 0


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lglab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"lglab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write boundary data JSON")
    g.add_argument("spec", nargs="+", help="cantor-fn N | cantor-gn N | arcs JSON | notconverge")
    g.add_argument("--out", default=None)
    g.set_defaults(fn=cmd_generate)

    s = sub.add_parser("solve", help="solve boundary data from JSON")
    s.add_argument("input")
    s.add_argument("--mode", choices=["minimal", "maximal"], default="minimal")
    s.add_argument("--render", default=None, metavar="FILE.svg")
    s.add_argument("--out", default=None)
    s.add_argument("--samples", type=int, default=20000)
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(fn=cmd_solve)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument(
        "suite",
        choices=["nonexistence", "nonlinearity", "nonlocality", "monotone", "inequalities", "oracle"],
    )
    v.add_argument("--out", default=None)
    v.add_argument("--samples", type=int, default=50000)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.set_defaults(fn=cmd_verify)

    t = sub.add_parser("trace", help="boundary trace of the solved data at an angle")
    t.add_argument("input")
    t.add_argument("angle", type=float)
    t.add_argument("--r0", type=float, default=1e-3)
    t.add_argument("--levels", type=int, default=4)
    t.add_argument("--samples", type=int, default=4096)
    t.add_argument("--seed", type=int, default=DEFAULT_SEED)
    t.add_argument("--out", default=None)
    t.set_defaults(fn=cmd_trace)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
