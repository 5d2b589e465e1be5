"""The Minkowski billiard map.

Free flight along straight chords, the variational reflection law (the
difference of Legendre covectors of the incoming and outgoing directions
annihilates the boundary tangent), the generating-function phase
coordinates (s, u) with u = dL/ds, and the explicit tangent map in those
coordinates. All root finding is bracketed Newton with bisection fallback,
1e-12 tolerances on angles and parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (CoincidentPoints, CornerHit, DegenerateDenominator,
                     GrazingAngle, NoRoot, OutOfRange, TangencyAtCorner,
                     TangentialHit)
from .geometry import ArcPiece, ConicPiece, SegmentPiece, Table


@dataclass
class StatePoint:
    """Boundary point plus outgoing direction (F-unit, inward)."""

    pos: np.ndarray
    dir: np.ndarray


@dataclass
class PhasePointSU:
    piece: int
    s: float
    u: float


@dataclass
class Impact:
    piece: int
    t: float       # piece parameter
    s: float       # F-arclength on the piece chart
    pos: np.ndarray
    lam: float     # ray parameter of the hit


@dataclass
class OrbitResult:
    points: list          # PhasePointSU per bounce (including the start)
    states: list          # StatePoint per bounce
    event: str | None     # None | "corner" | "tangential"

    @property
    def positions(self):
        return np.array([st.pos for st in self.states])


# ---------------------------------------------------------------------------
# scalar root helpers
# ---------------------------------------------------------------------------

def _bracketed_newton(f, df, lo, hi, flo, fhi, tol=1e-12, maxiter=30):
    """Root of f on [lo, hi] with f(lo), f(hi) of opposite sign.

    Newton steps clipped to the shrinking bracket, bisection fallback; after
    the first sub-tolerance step one more Newton round polishes the root.
    """
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise NoRoot(f"no sign change on bracket [{lo}, {hi}]")
    x = 0.5 * (lo + hi)
    fx = f(x)
    small_steps = 0
    for _ in range(maxiter + 3):
        if fx == 0.0:
            return x
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        d = df(x)
        x_new = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not (lo <= x_new <= hi):
            x_new = 0.5 * (lo + hi)
        small_steps = small_steps + 1 if abs(x_new - x) <= tol * (1.0 + abs(x_new)) else 0
        x = x_new
        fx = f(x)
        if small_steps >= 2:
            return x
    return x


def _bisect(f, lo, hi, flo, fhi, tol=1e-13, maxiter=100):
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if hi - lo <= tol * (1.0 + abs(mid)):
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# reflection
# ---------------------------------------------------------------------------

def _angle_solve(norm, w, target, tol=1e-12):
    """Angle phi in the open inward half-circle over tangent w with
    grad F(e(phi)) . w == target. Monotone for strictly convex norms."""
    nw = math.hypot(w[0], w[1])
    wa = math.atan2(w[1], w[0])
    fw = norm.eval(w)
    if not (-fw < target < fw):
        raise OutOfRange(f"pairing target {target} outside (-{fw}, {fw})")
    pad = 1e-13

    def g(phi):
        e = (math.cos(phi), math.sin(phi))
        gr = norm.grad(e)
        return gr[0] * w[0] + gr[1] * w[1] - target

    def dg(phi):
        e = (math.cos(phi), math.sin(phi))
        de = (-e[1], e[0])
        h = norm.hess(e)
        return h.quad(np.asarray(de), np.asarray(w))

    lo, hi = wa + pad, wa + math.pi - pad
    return _bracketed_newton(g, dg, lo, hi, g(lo), g(hi), tol=tol)


def reflect(norm, boundary_tangent, incident, tol=1e-12):
    """Finsler reflection: outgoing F-unit direction v with
    (grad F(v) - grad F(incident)) . boundary_tangent = 0, v inward.

    ``boundary_tangent`` must carry the ccw orientation (interior on its
    left); ``incident`` is the arriving direction of travel (points out of
    the table at the impact point). Solved as a single bracketed root find
    for the direction angle on the inward half-circle.
    """
    w = np.asarray(boundary_tangent, dtype=float)
    if w[0] == 0.0 and w[1] == 0.0:
        raise TangencyAtCorner("zero boundary tangent")
    c = float(norm.grad(incident) @ w)
    phi = _angle_solve(norm, w, c, tol=tol)
    e = np.array([math.cos(phi), math.sin(phi)])
    return e / norm.eval(e)


def reflect_tangent_construction(norm, boundary_tangent, incident, tol=1e-12,
                                 n_scan=720):
    """Reflection via the indicatrix tangent-line construction (cross-check).

    Intersect the tangent line of the indicatrix at the incident direction
    with the boundary tangent line; the outgoing direction is the second
    indicatrix point whose tangent line passes through that intersection.
    Falls back to straight reversal when the two lines are parallel.
    """
    w = np.asarray(boundary_tangent, dtype=float)
    u = np.asarray(incident, dtype=float)
    u = u / norm.eval(u)
    wa = math.atan2(w[1], w[0])
    gu = norm.grad(u)
    denom = float(gu @ w)
    if abs(denom) < 1e-12 * norm.eval(w):
        return -u  # indicatrix tangent parallel to the wall: straight reversal
    w_pt = w * (1.0 / denom)

    def h(phi):
        gr = norm.grad((math.cos(phi), math.sin(phi)))
        return float(gr @ w_pt) - 1.0

    pad = 1e-9
    phis = np.linspace(wa + pad, wa + math.pi - pad, n_scan)
    vals = [h(p) for p in phis]
    roots = []
    for i in range(len(phis) - 1):
        if vals[i] == 0.0 or vals[i] * vals[i + 1] < 0:
            def dh(phi):
                e = (math.cos(phi), math.sin(phi))
                de = (-e[1], e[0])
                return norm.hess(e).quad(np.asarray(de), w_pt)
            roots.append(_bracketed_newton(h, dh, phis[i], phis[i + 1],
                                           vals[i], vals[i + 1], tol=tol))
    if not roots:
        raise NoRoot("tangent-line construction found no inward root")
    phi = roots[0]
    e = np.array([math.cos(phi), math.sin(phi)])
    return e / norm.eval(e)


# ---------------------------------------------------------------------------
# ray-boundary intersection
# ---------------------------------------------------------------------------

def _ray_arc_hits(piece: ArcPiece, p, d, lam_lo, lam_hi):
    """Intersections of the ray p + lam*d with a convex graph arc.

    In the arc frame (xi along the tangent, eta along inward) the residual
    h(lam) = eta(lam) - f(xi(lam)) is concave, so the ray crosses at most
    twice; roots are isolated by splitting at the maximum of h.
    """
    rel = np.asarray(p, dtype=float) - piece.P
    xi0, dxi = float(rel @ piece.T), float(d @ piece.T)
    eta0, deta = float(rel @ piece.E), float(d @ piece.E)
    eps = piece.hi

    # clip to |xi| <= eps
    lo, hi = lam_lo, lam_hi
    if abs(dxi) < 1e-300:
        if abs(xi0) > eps:
            return []
    else:
        a = (-eps - xi0) / dxi
        b = (eps - xi0) / dxi
        lo = max(lo, min(a, b))
        hi = min(hi, max(a, b))
    if not lo < hi:
        return []

    prof = piece.profile
    dom = prof.domain()
    if math.isfinite(dom):
        # keep xi strictly inside the profile domain
        cap = min(dom * (1 - 1e-14), eps)
        if abs(dxi) >= 1e-300:
            a = (-cap - xi0) / dxi
            b = (cap - xi0) / dxi
            lo = max(lo, min(a, b))
            hi = min(hi, max(a, b))
            if not lo < hi:
                return []

    def h(lam):
        return (eta0 + lam * deta) - prof.f(xi0 + lam * dxi)

    def dh(lam):
        return deta - prof.d1(xi0 + lam * dxi) * dxi

    hlo, hhi = h(lo), h(hi)
    dlo, dhi = dh(lo), dh(hi)
    roots = []

    def _root(a, b, fa, fb):
        if fa == 0.0:
            roots.append(a)
        elif fa * fb < 0:
            roots.append(_bracketed_newton(h, dh, a, b, fa, fb))

    if dlo > 0 and dhi < 0:
        peak = _bisect(dh, lo, hi, dlo, dhi)
        hp = h(peak)
        _root(lo, peak, hlo, hp)
        _root(peak, hi, hp, hhi)
    else:
        _root(lo, hi, hlo, hhi)

    out = []
    for lam in roots:
        xi = xi0 + lam * dxi
        out.append((lam, xi))  # piece parameter equals xi
    return out


def _ray_segment_hits(piece: SegmentPiece, p, d, lam_lo, lam_hi):
    m = np.array([-piece.dir[1], piece.dir[0]])
    dm = float(d @ m)
    if abs(dm) < 1e-14 * math.hypot(d[0], d[1]):
        return []
    lam = float((piece.A - p) @ m) / dm
    if not lam_lo <= lam <= lam_hi:
        return []
    t = float((p + lam * d - piece.A) @ piece.dir)
    if -1e-12 <= t <= piece.length + 1e-12:
        return [(lam, min(max(t, 0.0), piece.length))]
    return []


def _ray_conic_hits(piece: ConicPiece, p, d, lam_lo, lam_hi):
    px, py = p[0] / piece.A, p[1] / piece.B
    dx, dy = d[0] / piece.A, d[1] / piece.B
    qa = dx * dx + dy * dy
    qb = 2.0 * (px * dx + py * dy)
    qc = px * px + py * py - 1.0
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    out = []
    for lam in ((-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)):
        if lam_lo <= lam <= lam_hi:
            x = px + lam * dx
            y = py + lam * dy
            phi = math.atan2(y, x)
            if phi < piece.lo:
                phi += 2.0 * math.pi
            out.append((lam, phi))
    return out


def next_impact(table: Table, norm, state: StatePoint,
                corner_tol=1e-9, grazing_tol=1e-10) -> Impact:
    """First boundary intersection strictly ahead of the state.

    Raises CornerHit within ``corner_tol`` arclength of a piece junction
    and TangentialHit when the ray meets the boundary tangentially.
    """
    p, d = state.pos, state.dir
    lo_pt, hi_pt = table.bbox()
    diam = float(np.hypot(*(hi_pt - lo_pt)))
    nd = math.hypot(d[0], d[1])
    lam_min = 1e-10 * diam / nd
    lam_max = 4.0 * diam / nd

    best = None
    for idx, piece in enumerate(table.pieces):
        if isinstance(piece, ArcPiece):
            hits = _ray_arc_hits(piece, p, d, lam_min, lam_max)
        elif isinstance(piece, SegmentPiece):
            hits = _ray_segment_hits(piece, p, d, lam_min, lam_max)
        else:
            hits = _ray_conic_hits(piece, p, d, lam_min, lam_max)
        for lam, t in hits:
            if best is None or lam < best[0]:
                best = (lam, idx, t)
    if best is None:
        raise NoRoot("ray found no forward boundary intersection")
    lam, idx, t = best
    piece = table.pieces[idx]
    g1 = piece.d1(t)
    n_in = np.array([-g1[1], g1[0]])
    trans = abs(float(d @ n_in)) / (nd * math.hypot(*n_in))
    if trans < grazing_tol:
        raise TangentialHit(f"grazing incidence (|d.n| = {trans:.2e})")
    chart = table.charts(norm)[idx]
    s = chart.s_of_t(t)
    if not piece.periodic:
        if min(s - chart.s_min, chart.s_max - s) < corner_tol:
            raise CornerHit(f"impact within {corner_tol} of a junction on piece {idx}")
    return Impact(idx, t, s, piece.point(t), lam)


# ---------------------------------------------------------------------------
# phase coordinates
# ---------------------------------------------------------------------------

def momentum_u(table: Table, norm, piece: int, s: float, direction) -> float:
    """u = dL/ds = -grad F(dir) . gamma'(s); 0-homogeneous in dir."""
    _, d1s, _ = table.boundary_frame(norm, piece, s)
    return -float(norm.grad(direction) @ d1s)


def direction_from_su(table: Table, norm, pp: PhasePointSU,
                      check_monotone: bool = False) -> np.ndarray:
    """Inward F-unit direction with momentum u at (piece, s)."""
    if not -1.0 < pp.u < 1.0:
        raise OutOfRange(f"u = {pp.u} outside the open interval (-1, 1)")
    _, d1s, _ = table.boundary_frame(norm, pp.piece, pp.s)
    if check_monotone:
        wa = math.atan2(d1s[1], d1s[0])
        vals = []
        for phi in np.linspace(wa + 1e-6, wa + math.pi - 1e-6, 50):
            gr = norm.grad((math.cos(phi), math.sin(phi)))
            vals.append(-float(gr @ d1s))
        dv = np.diff(vals)
        if not (np.all(dv > 0) or np.all(dv < 0)):
            raise NoRoot("u(direction angle) is not monotone on the inward arc")
    phi = _angle_solve(norm, d1s, -pp.u)
    e = np.array([math.cos(phi), math.sin(phi)])
    return e / norm.eval(e)


def chord_data(table: Table, norm, a: tuple, b: tuple) -> dict:
    """Generating-function data of the chord from (piece, s) to (piece1, s1).

    L = F(chord), u = -grad F(chord) . gamma'(s), u1 = -grad F(chord) . gamma'(s1).
    """
    p0, t0, _ = table.boundary_frame(norm, a[0], a[1])
    p1, t1, _ = table.boundary_frame(norm, b[0], b[1])
    v = p1 - p0
    if math.hypot(v[0], v[1]) < 1e-12:
        raise CoincidentPoints("chord endpoints coincide")
    gf = norm.grad(v)
    return {"L": norm.eval(v),
            "u": -float(gf @ t0),
            "u1": -float(gf @ t1),
            "chord": v}


def su_to_state(table: Table, norm, pp: PhasePointSU) -> StatePoint:
    pos, _, _ = table.boundary_frame(norm, pp.piece, pp.s)
    return StatePoint(pos, direction_from_su(table, norm, pp))


def state_to_su(table: Table, norm, piece: int, s: float, direction) -> PhasePointSU:
    return PhasePointSU(piece, s, momentum_u(table, norm, piece, s, direction))


# ---------------------------------------------------------------------------
# stepping
# ---------------------------------------------------------------------------

def step_state(table: Table, norm, state: StatePoint) -> tuple[StatePoint, Impact]:
    imp = next_impact(table, norm, state)
    g1 = table.pieces[imp.piece].d1(imp.t)
    out = reflect(norm, g1, state.dir)
    return StatePoint(imp.pos, out), imp


def step_su(table: Table, norm, pp: PhasePointSU) -> PhasePointSU:
    d = direction_from_su(table, norm, pp)
    pos, _, _ = table.boundary_frame(norm, pp.piece, pp.s)
    imp = next_impact(table, norm, StatePoint(pos, d))
    cd = chord_data(table, norm, (pp.piece, pp.s), (imp.piece, imp.s))
    return PhasePointSU(imp.piece, imp.s, cd["u1"])


def iterate(table: Table, norm, start: PhasePointSU, n: int) -> OrbitResult:
    """n applications of the billiard map; terminal events are recorded."""
    pts = [start]
    states = [su_to_state(table, norm, start)]
    event = None
    cur = start
    for _ in range(n):
        try:
            nxt = step_su(table, norm, cur)
        except CornerHit:
            event = "corner"
            break
        except TangentialHit:
            event = "tangential"
            break
        pts.append(nxt)
        states.append(su_to_state(table, norm, nxt))
        cur = nxt
    return OrbitResult(pts, states, event)


# ---------------------------------------------------------------------------
# tangent maps
# ---------------------------------------------------------------------------

def tangent_map_su(table: Table, norm, a: tuple, b: tuple) -> np.ndarray:
    """Derivative of (s, u) -> (s1, u1) along the chord a -> b.

    Entries combine the norm Hessian at the chord vector with the boundary
    F-arclength frames at both endpoints; the determinant is exactly 1.
    """
    p0, t0, c0 = table.boundary_frame(norm, a[0], a[1])
    p1, t1, c1 = table.boundary_frame(norm, b[0], b[1])
    v = p1 - p0
    if math.hypot(v[0], v[1]) < 1e-12:
        raise CoincidentPoints("chord endpoints coincide")
    H = norm.hess(v)
    gf = norm.grad(v)
    Dden = H.quad(t0, t1)
    scale = abs(H.quad(t0, t0)) + abs(H.quad(t1, t1)) + 1e-300
    if abs(Dden) < 1e-12 * scale:
        raise DegenerateDenominator(f"tangent-map denominator {Dden:.3e}")
    du_ds = H.quad(t0, t0) - float(gf @ c0)
    EG = H.quad(t1, t1) + float(gf @ c1)
    ds1_ds = du_ds / Dden
    ds1_du = -1.0 / Dden
    du1_du = EG / Dden
    du1_ds = Dden - EG * du_ds / Dden
    return np.array([[ds1_ds, ds1_du], [du1_ds, du1_du]])


def euclid_tangent_map(theta, theta1, L, kappa, kappa1) -> np.ndarray:
    """Euclidean billiard derivative in (s, theta); oracle for tangent_map_su.

    d(s1, theta1)/d(s, theta); preserves the area form sin(theta) ds /\\ dtheta,
    so its determinant is sin(theta)/sin(theta1).
    """
    st, st1 = math.sin(theta), math.sin(theta1)
    if st1 <= 1e-12:
        raise GrazingAngle(f"sin(theta1) = {st1}")
    return np.array([
        [(L * kappa - st) / st1, L / st1],
        [(L * kappa * kappa1 - kappa1 * st - kappa * st1) / st1,
         (L * kappa1 - st1) / st1],
    ])
