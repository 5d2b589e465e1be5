"""Command line front end.

    mbill <orbit|portrait|twist|stability-map|verify>
          [--config cfg.json] [--out DIR] [--jobs N] [--seed N] [--verbose]

Config files are JSON with three sections:

    {"norm":  {"a": 0.9, "b": 0.1, "k": 2},
     "table": {"kind": "lemon", "L": 1.0},
     "run":   { ... subcommand parameters ... }}

Exit codes: 0 success, 1 verify failure, 2 configuration error,
3 orbit terminated early (corner or tangency; files are still written).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import closedforms as cf
from .dynamics import PhasePointSU, iterate, momentum_u, su_to_state
from .errors import BilliardError, ConfigError
from .fastpath import ConicOrbitEngine
from .geometry import ConicPiece, build_table
from .normalform import classify, report
from .norms import MixedNorm
from .svg import SvgCanvas, color_wheel
from .verify import run_all


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _load_config(path: str) -> dict:
    if path is None:
        raise ConfigError("--config is required for this subcommand")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from None


def _norm_from(cfg: dict, unit_sum: bool) -> MixedNorm:
    sec = cfg.get("norm")
    if not isinstance(sec, dict):
        raise ConfigError("norm section missing")
    try:
        a = float(sec["a"])
    except KeyError:
        raise ConfigError("norm.a missing") from None
    b = float(sec.get("b", 1.0 - a))
    k = int(sec.get("k", 2))
    if unit_sum and abs(a + b - 1.0) > 1e-12:
        raise ConfigError(f"norm.a + norm.b must equal 1 for this subcommand, got {a + b}")
    try:
        return MixedNorm(a, b, k)
    except ValueError as exc:
        raise ConfigError(f"norm: {exc}") from None


def _table_from(cfg: dict):
    sec = cfg.get("table")
    if not isinstance(sec, dict):
        raise ConfigError("table section missing")
    try:
        return build_table(sec)
    except BilliardError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"table: {exc}") from None


def _run_section(cfg: dict) -> dict:
    sec = cfg.get("run", {})
    if not isinstance(sec, dict):
        raise ConfigError("run section must be an object")
    return sec


def _locate_boundary_point(table, point, tol=1e-6):
    """(piece, t) of the boundary point nearest to `point`; must be on it."""
    p = np.asarray(point, dtype=float)
    best = None
    for idx, piece in enumerate(table.pieces):
        ts = np.linspace(piece.lo, piece.hi, 512)
        d2 = [float(((piece.point(t) - p) ** 2).sum()) for t in ts]
        i = int(np.argmin(d2))
        t = ts[i]
        for _ in range(40):  # local descent on |gamma(t) - p|^2
            g1 = piece.d1(t)
            g2 = piece.d2(t)
            r = piece.point(t) - p
            grad = 2 * float(r @ g1)
            hess = 2 * float(g1 @ g1 + r @ g2)
            if hess <= 0:
                break
            t_new = min(max(t - grad / hess, piece.lo), piece.hi)
            if abs(t_new - t) < 1e-14:
                t = t_new
                break
            t = t_new
        dist = float(np.hypot(*(piece.point(t) - p)))
        if best is None or dist < best[0]:
            best = (dist, idx, t)
    if best[0] > tol:
        raise ConfigError(f"run.start.point {point} is {best[0]:.2e} away from the boundary")
    return best[1], best[2]


def _start_phase_point(table, norm, sec) -> PhasePointSU:
    start = sec.get("start")
    if not isinstance(start, dict):
        raise ConfigError("run.start missing")
    if "point" in start:
        piece, t = _locate_boundary_point(table, start["point"])
        if "angle" not in start:
            raise ConfigError("run.start.angle missing")
        ang = float(start["angle"])
        d = np.array([math.cos(ang), math.sin(ang)])
        chart = table.charts(norm)[piece]
        s = chart.s_of_t(t)
        u = momentum_u(table, norm, piece, s, d)
        if not -1.0 < u < 1.0:
            raise ConfigError(f"run.start.angle points outside the table (u = {u})")
        return PhasePointSU(piece, s, u)
    try:
        piece = int(start["piece"])
        s = float(start["s"])
        u = float(start["u"])
    except KeyError as exc:
        raise ConfigError(f"run.start.{exc.args[0]} missing") from None
    if not 0 <= piece < len(table.pieces):
        raise ConfigError(f"run.start.piece {piece} out of range")
    if not -1.0 < u < 1.0:
        raise ConfigError(f"run.start.u must lie in (-1, 1), got {u}")
    return PhasePointSU(piece, s, u)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_orbit(cfg, out_dir, verbose=False) -> int:
    norm = _norm_from(cfg, unit_sum=False)
    table = _table_from(cfg)
    sec = _run_section(cfg)
    n = int(sec.get("bounces", 100))
    if n < 1:
        raise ConfigError(f"run.bounces must be >= 1, got {n}")
    start = _start_phase_point(table, norm, sec)
    orb = iterate(table, norm, start, n)

    csv_path = os.path.join(out_dir, "orbit.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("piece_id,s,u,x,y,dir_x,dir_y\n")
        for pp, st in zip(orb.points, orb.states):
            fh.write(",".join([str(pp.piece), _fmt(pp.s), _fmt(pp.u),
                               _fmt(st.pos[0]), _fmt(st.pos[1]),
                               _fmt(st.dir[0]), _fmt(st.dir[1])]) + "\n")

    lo, hi = table.bbox()
    pad = 0.05 * max(hi - lo)
    canvas = SvgCanvas((lo[0] - pad, hi[0] + pad), (lo[1] - pad, hi[1] + pad))
    canvas.polyline(table.boundary_polyline(), stroke="#222222", width=1.6)
    canvas.polyline(orb.positions, stroke="#aa3311", width=0.8, opacity=0.85)
    canvas.write(os.path.join(out_dir, "orbit.svg"))

    if verbose:
        print(f"orbit: {len(orb.points) - 1} bounces written to {csv_path}")
    if orb.event is not None:
        print(f"orbit terminated early: {orb.event}", file=sys.stderr)
        return 3
    return 0


def cmd_portrait(cfg, out_dir, seed=0, verbose=False, max_svg_points=200000) -> int:
    norm = _norm_from(cfg, unit_sum=False)
    table = _table_from(cfg)
    sec = _run_section(cfg)
    gs = int(sec.get("grid_s", 40))
    gu = int(sec.get("grid_u", 40))
    n = int(sec.get("bounces", 500))
    if gs < 2 or gu < 2:
        raise ConfigError("run.grid_s and run.grid_u must be >= 2")
    urange = sec.get("u_range", [-0.95, 0.95])
    ulo, uhi = float(urange[0]), float(urange[1])
    if not (-1 < ulo < uhi < 1):
        raise ConfigError(f"run.u_range must satisfy -1 < lo < hi < 1, got {urange}")

    conic = len(table.pieces) == 1 and isinstance(table.pieces[0], ConicPiece)
    rows = []  # (orbit_id, bounce, piece, s, u)
    if conic:
        eng = ConicOrbitEngine(table, norm)
        svals = (np.arange(gs) + 0.5) / gs * eng.total
        uvals = np.linspace(ulo, uhi, gu)
        SS, UU = np.meshgrid(svals, uvals, indexing="ij")
        S, U, _, _ = eng.run(eng.phi_of_s(SS.ravel()), UU.ravel(), n)
        n_orbits = SS.size
        data = (S, U)
    else:
        charts = table.charts(norm)
        total = sum(c.s_max - c.s_min for c in charts.charts)
        uvals = np.linspace(ulo, uhi, gu)
        ics = []
        for i in range(gs):
            target = (i + 0.5) / gs * total
            acc = 0.0
            for pc, c in enumerate(charts.charts):
                span = c.s_max - c.s_min
                if target <= acc + span:
                    ics.append((pc, c.s_min + (target - acc)))
                    break
                acc += span
        orbits = []
        for pc, s in ics:
            for u in uvals:
                orb = iterate(table, norm, PhasePointSU(pc, float(s), float(u)), n)
                orbits.append(orb)
        n_orbits = len(orbits)
        data = orbits

    csv_path = os.path.join(out_dir, "portrait.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("orbit_id,bounce,piece_id,s,u\n")
        if conic:
            S, U = data
            for oid in range(n_orbits):
                for b in range(n + 1):
                    fh.write(f"{oid},{b},0,{_fmt(S[b, oid])},{_fmt(U[b, oid])}\n")
        else:
            for oid, orb in enumerate(data):
                for b, pp in enumerate(orb.points):
                    fh.write(f"{oid},{b},{pp.piece},{_fmt(pp.s)},{_fmt(pp.u)}\n")

    # SVG view, strided when the point count is excessive
    total_pts = n_orbits * (n + 1)
    stride = max(1, int(math.ceil(total_pts / max_svg_points)))
    if conic:
        S, U = data
        smax = eng.total
        canvas = SvgCanvas((0.0, smax), (-1.0, 1.0))
        for oid in range(n_orbits):
            pts = [(S[b, oid], U[b, oid]) for b in range(0, n + 1, stride)]
            canvas.dots(pts, fill=color_wheel(oid, n_orbits), r=0.7, opacity=0.7)
    else:
        smax = max(c.s_max for c in table.charts(norm).charts)
        smin = min(c.s_min for c in table.charts(norm).charts)
        canvas = SvgCanvas((smin, smax), (-1.0, 1.0))
        for oid, orb in enumerate(data):
            pts = [(pp.s, pp.u) for pp in orb.points[::stride]]
            canvas.dots(pts, fill=color_wheel(oid, n_orbits), r=0.7, opacity=0.7)
    canvas.write(os.path.join(out_dir, "portrait.svg"))
    if verbose:
        print(f"portrait: {n_orbits} orbits x {n} bounces -> {csv_path} (svg stride {stride})")
    return 0


def cmd_twist(cfg, out_dir, verbose=False) -> int:
    norm = _norm_from(cfg, unit_sum=True)
    table = _table_from(cfg)
    rep = report(table, norm)
    lines = rep.to_lines()
    path = os.path.join(out_dir, "twist_report.txt")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0


def _stability_row(args):
    kind, fixed, a, yvals = args
    rows = []
    for y in yvals:
        if kind == "lemon":
            L, R, Rpp = y, 1.0, 0.0
        elif kind == "ellipse":
            L, R, Rpp = 2.0 * y, 1.0 / y, 3.0 * (y * y - 1.0) / y
        else:  # polynomial
            a2, a4 = fixed["alpha"][0], fixed["alpha"][1] if len(fixed["alpha"]) > 1 else 0.0
            L, R, Rpp = y, 1.0 / (2 * a2), 6 * a2 - 6 * a4 / (a2 * a2)
        M = cf.vertex_tangent_matrix(a, L, R)
        cls = classify(M)
        nonres = cls.kind == "elliptic" and abs(cls.trace) > 1e-9
        tau = ""
        sign = ""
        if cls.kind == "elliptic":
            try:
                t1 = cf.twist_symmetric_closed(a, L, R, Rpp)
                tau = _fmt(t1)
                sign = "0" if t1 == 0 else ("+" if t1 > 0 else "-")
            except BilliardError:
                pass
        rows.append((a, y, cls.kind, nonres, tau, sign))
    return rows


def cmd_stability_map(cfg, out_dir, jobs=None, verbose=False) -> int:
    _ = _norm_from(cfg, unit_sum=True)  # validates the section; a comes from the grid
    sec = _run_section(cfg)
    tbl = cfg.get("table", {})
    kind = tbl.get("kind")
    if kind not in ("lemon", "ellipse", "polynomial"):
        raise ConfigError(f"table.kind '{kind}' unsupported for stability-map")
    for key in ("x_range", "x_steps", "y_range", "y_steps"):
        if key not in sec:
            raise ConfigError(f"run.{key} missing")
    x0, x1 = (float(v) for v in sec["x_range"])
    y0, y1 = (float(v) for v in sec["y_range"])
    nx, ny = int(sec["x_steps"]), int(sec["y_steps"])
    if nx < 2 or ny < 2:
        raise ConfigError("run.x_steps and run.y_steps must be >= 2")
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    tasks = [(kind, tbl, float(a), [float(y) for y in ys]) for a in xs]
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(tasks) >= 2 * jobs:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            all_rows = list(pool.map(_stability_row, tasks))
    else:
        all_rows = [_stability_row(t) for t in tasks]

    ylabel = "L" if kind in ("lemon", "polynomial") else "delta"
    path = os.path.join(out_dir, "stability_map.csv")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"a,{ylabel},class,nonresonant,tau1,tau1_sign\n")
        for rows in all_rows:
            for a, y, ckind, nonres, tau, sign in rows:
                fh.write(f"{_fmt(a)},{_fmt(y)},{ckind},"
                         f"{str(nonres).lower()},{tau},{sign}\n")
    if verbose:
        print(f"stability map: {nx} x {ny} points -> {path}")
    return 0


def cmd_verify(verbose=False) -> int:
    results = run_all(verbose=verbose)
    return 0 if all(r.ok for r in results) else 1


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mbill",
        description="Minkowski billiards: orbits, portraits, twist coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("orbit", "portrait", "twist", "stability-map", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", default=None)
        sp.add_argument("--out", default=".")
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)

    try:
        if args.command == "verify":
            return cmd_verify(verbose=args.verbose)
        cfg = _load_config(args.config)
        os.makedirs(args.out, exist_ok=True)
        if args.command == "orbit":
            return cmd_orbit(cfg, args.out, verbose=args.verbose)
        if args.command == "portrait":
            return cmd_portrait(cfg, args.out, seed=args.seed, verbose=args.verbose)
        if args.command == "twist":
            return cmd_twist(cfg, args.out, verbose=args.verbose)
        if args.command == "stability-map":
            return cmd_stability_map(cfg, args.out, jobs=args.jobs,
                                     verbose=args.verbose)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except BilliardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
