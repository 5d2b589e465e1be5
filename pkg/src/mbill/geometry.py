"""Billiard tables and their differential geometry.

A table is a closed, convex, piecewise-smooth boundary traversed
counterclockwise. Supported shapes:

* two convex graph arcs facing each other across a chord of length L,
  closed by horizontal segments (polynomial profiles, or circular arcs as
  in the lemon table);
* a full circle or axis-aligned ellipse (one smooth periodic piece).

Every table carries exactly two "vertices": the endpoints of the straight
period-2 orbit along the symmetry axis. Each vertex knows its local convex
profile, which gives exact curvature data (R and R'' at the vertex) and the
degree-4 Taylor expansion of the boundary in the F-arclength parameter --
the inputs the twist pipeline needs.

Arclength here always means F-arclength: charts s <-> t are built per norm
by composite Gauss-Legendre quadrature (auto-refined to 1e-12 absolute)
and inverted by safeguarded Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (FlatPoint, GeometryOverlap, NonConvexArc, OutOfChart,
                     QuadratureFailure)
from .jets import Jet2, implicit_jet_solve, norm_on_jets

_CATALAN = (1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786)

_GL_X16, _GL_W16 = np.polynomial.legendre.leggauss(16)
_GL_X24, _GL_W24 = np.polynomial.legendre.leggauss(24)


def _gl(fun, a, b, xs, ws):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    return half * sum(w * fun(mid + half * x) for x, w in zip(xs, ws))


# ---------------------------------------------------------------------------
# vertex profiles: even convex graphs f(t), f(0) = f'(0) = 0, f''(0) > 0
# ---------------------------------------------------------------------------

class EvenPolyProfile:
    """f(t) = sum of coeffs[n-1] * t^(2n); coeffs = [alpha2, alpha4, ...]."""

    def __init__(self, coeffs):
        self.coeffs = tuple(float(c) for c in coeffs)
        if not self.coeffs or self.coeffs[0] <= 0.0:
            raise NonConvexArc("leading even coefficient must be positive")

    def f(self, t):
        return sum(c * t ** (2 * (n + 1)) for n, c in enumerate(self.coeffs))

    def d1(self, t):
        return sum(2 * (n + 1) * c * t ** (2 * n + 1) for n, c in enumerate(self.coeffs))

    def d2(self, t):
        return sum((2 * n + 2) * (2 * n + 1) * c * t ** (2 * n) for n, c in enumerate(self.coeffs))

    def taylor(self, order):
        out = [0.0] * (order + 1)
        for n, c in enumerate(self.coeffs):
            if 2 * (n + 1) <= order:
                out[2 * (n + 1)] = c
        return out

    def domain(self):
        return math.inf

    def convex_limit(self):
        """Largest t0 with f'' > 0 on [0, t0); inf when f'' never vanishes."""
        # f''(t) is a polynomial in t^2
        dd = [(2 * n + 2) * (2 * n + 1) * c for n, c in enumerate(self.coeffs)]
        if len(dd) == 1:
            return math.inf
        roots = np.roots(list(reversed(dd)))
        pos = [math.sqrt(r.real) for r in roots
               if abs(r.imag) < 1e-12 * (1 + abs(r.real)) and r.real > 0]
        return min(pos) if pos else math.inf


class ConicProfile:
    """f(t) = ax * (1 - sqrt(1 - (t/ay)^2)): circle arc when ax == ay."""

    def __init__(self, ax, ay):
        if ax <= 0 or ay <= 0:
            raise NonConvexArc("conic semi-axes must be positive")
        self.ax = float(ax)
        self.ay = float(ay)

    def _w(self, t):
        q = 1.0 - (t / self.ay) ** 2
        if q <= 0.0:
            raise OutOfChart(f"conic profile parameter |t| >= {self.ay}")
        return math.sqrt(q)

    def f(self, t):
        return self.ax * (1.0 - self._w(t))

    def d1(self, t):
        return self.ax * t / (self.ay ** 2 * self._w(t))

    def d2(self, t):
        return self.ax / (self.ay ** 2 * self._w(t) ** 3)

    def taylor(self, order):
        out = [0.0] * (order + 1)
        for n in range(1, order // 2 + 1):
            out[2 * n] = self.ax * _CATALAN[n - 1] / (2 ** (2 * n - 1) * self.ay ** (2 * n))
        return out

    def domain(self):
        return self.ay

    def convex_limit(self):
        return self.ay


# ---------------------------------------------------------------------------
# boundary pieces
# ---------------------------------------------------------------------------

class ArcPiece:
    """Convex graph arc: point(t) = vertex + t * tangent + f(t) * inward.

    The parameter t runs with the ccw orientation of the boundary and is 0
    at the vertex; f is the profile in the vertex frame.
    """

    periodic = False

    def __init__(self, profile, vertex_pos, tangent_dir, inward_dir, eps):
        self.profile = profile
        self.P = np.asarray(vertex_pos, dtype=float)
        self.T = np.asarray(tangent_dir, dtype=float)
        self.E = np.asarray(inward_dir, dtype=float)
        self.lo = -float(eps)
        self.hi = float(eps)

    def point(self, t):
        return self.P + t * self.T + self.profile.f(t) * self.E

    def d1(self, t):
        return self.T + self.profile.d1(t) * self.E

    def d2(self, t):
        return self.profile.d2(t) * self.E

    def euclid_curvature_t(self, t):
        g1 = self.d1(t)
        g2 = self.d2(t)
        num = g1[0] * g2[1] - g1[1] * g2[0]
        den = (g1[0] ** 2 + g1[1] ** 2) ** 1.5
        return num / den


class SegmentPiece:
    """Straight closing segment, parameterized by Euclidean length."""

    periodic = False

    def __init__(self, start, end):
        self.A = np.asarray(start, dtype=float)
        self.B = np.asarray(end, dtype=float)
        d = self.B - self.A
        self.length = float(np.hypot(d[0], d[1]))
        self.dir = d / self.length
        self.lo = 0.0
        self.hi = self.length

    def point(self, t):
        return self.A + t * self.dir

    def d1(self, t):
        return self.dir.copy()

    def d2(self, t):
        return np.zeros(2)

    def euclid_curvature_t(self, t):
        return 0.0


class ConicPiece:
    """Full circle/ellipse boundary (A cos phi, B sin phi), one periodic piece.

    phi runs over [-pi/2, 3pi/2); phi = -pi/2 is the bottom vertex of the
    vertical 2-orbit, phi = +pi/2 the top one.
    """

    periodic = True

    def __init__(self, A, B):
        self.A = float(A)
        self.B = float(B)
        self.lo = -0.5 * math.pi
        self.hi = 1.5 * math.pi

    def point(self, t):
        return np.array([self.A * math.cos(t), self.B * math.sin(t)])

    def d1(self, t):
        return np.array([-self.A * math.sin(t), self.B * math.cos(t)])

    def d2(self, t):
        return np.array([-self.A * math.cos(t), -self.B * math.sin(t)])

    def euclid_curvature_t(self, t):
        g1 = self.d1(t)
        num = self.A * self.B
        den = (g1[0] ** 2 + g1[1] ** 2) ** 1.5
        return num / den


# ---------------------------------------------------------------------------
# F-arclength charts
# ---------------------------------------------------------------------------

class Chart:
    """Monotone map between a piece parameter t and F-arclength s.

    s = 0 sits at the piece's anchor (the vertex for arcs, the lower
    parameter end otherwise); s increases with t, i.e. along the ccw
    boundary orientation.
    """

    def __init__(self, piece, norm, anchor_t=None, tol=1e-12):
        self.piece = piece
        self.norm = norm
        self.anchor = piece.lo if anchor_t is None else float(anchor_t)
        self._build(tol)

    def speed(self, t):
        return self.norm.eval(self.piece.d1(t))

    def _build(self, tol):
        lo, hi = self.piece.lo, self.piece.hi
        if isinstance(self.piece, SegmentPiece):
            # constant speed: chart is linear
            v = self.speed(0.5 * (lo + hi))
            self.edges = np.array([lo, hi])
            self.cum = np.array([0.0, v * (hi - lo)])
            self._linear_speed = v
            self.s_min, self.s_max = 0.0, v * (hi - lo)
            self.total = self.s_max
            return
        self._linear_speed = None
        n = 64
        for _ in range(7):
            edges = np.linspace(lo, hi, n + 1)
            if not self.piece.periodic and self.anchor not in edges:
                edges = np.sort(np.append(edges, self.anchor))
            a16 = np.array([_gl(self.speed, a, b, _GL_X16, _GL_W16)
                            for a, b in zip(edges[:-1], edges[1:])])
            a24 = np.array([_gl(self.speed, a, b, _GL_X24, _GL_W24)
                            for a, b in zip(edges[:-1], edges[1:])])
            if np.abs(a16 - a24).sum() <= tol:
                break
            n *= 2
        else:
            raise QuadratureFailure("arclength quadrature did not converge")
        cum = np.concatenate([[0.0], np.cumsum(a24)])
        i0 = int(np.argmin(np.abs(edges - self.anchor)))
        self.edges = edges
        self.cum = cum - cum[i0]
        self.s_min = float(self.cum[0])
        self.s_max = float(self.cum[-1])
        self.total = float(cum[-1])

    def s_of_t(self, t):
        if self._linear_speed is not None:
            return (t - self.piece.lo) * self._linear_speed
        if t < self.piece.lo - 1e-12 or t > self.piece.hi + 1e-12:
            raise OutOfChart(f"parameter {t} outside [{self.piece.lo}, {self.piece.hi}]")
        i = int(np.clip(np.searchsorted(self.edges, t) - 1, 0, len(self.edges) - 2))
        return float(self.cum[i] + _gl(self.speed, self.edges[i], t, _GL_X24, _GL_W24))

    def t_of_s(self, s, tol=1e-12, maxiter=30):
        if self._linear_speed is not None:
            return self.piece.lo + s / self._linear_speed
        if self.piece.periodic:
            s = (s - self.s_min) % self.total + self.s_min
        elif s < self.s_min - 1e-9 or s > self.s_max + 1e-9:
            raise OutOfChart(f"arclength {s} outside [{self.s_min}, {self.s_max}]")
        i = int(np.clip(np.searchsorted(self.cum, s) - 1, 0, len(self.edges) - 2))
        t_lo, t_hi = self.edges[i], self.edges[i + 1]
        t = t_lo + (s - self.cum[i]) / max(self.speed(0.5 * (t_lo + t_hi)), 1e-300)
        t = min(max(t, t_lo), t_hi)
        for _ in range(maxiter):
            r = self.s_of_t(t) - s
            if r > 0:
                t_hi = t
            else:
                t_lo = t
            step = r / self.speed(t)
            t_new = t - step
            if not (t_lo <= t_new <= t_hi):
                t_new = 0.5 * (t_lo + t_hi)
            if abs(t_new - t) <= tol * (1.0 + abs(t)):
                return t_new
            t = t_new
        return t


# ---------------------------------------------------------------------------
# vertices and tables
# ---------------------------------------------------------------------------

@dataclass
class VertexInfo:
    piece: int          # index into Table.pieces
    param: float        # piece parameter at the vertex
    pos: np.ndarray
    tangent: np.ndarray  # ccw unit tangent (Euclidean)
    inward: np.ndarray   # unit direction toward the opposite vertex
    profile: object


class ChartSet:
    def __init__(self, table, norm):
        self.charts = [Chart(p, norm, anchor_t=0.0 if isinstance(p, ArcPiece) else None)
                       for p in table.pieces]
        self.vertex_s = []
        for v in table.vertices:
            self.vertex_s.append(self.charts[v.piece].s_of_t(v.param))

    def __getitem__(self, i):
        return self.charts[i]


class Table:
    """Closed convex billiard table with two axis vertices."""

    def __init__(self, pieces, vertices, kind, params):
        self.pieces = pieces
        self.vertices = vertices
        self.kind = kind
        self.params = dict(params)
        self._chart_cache = {}

    # -- charts ---------------------------------------------------------

    def charts(self, norm) -> ChartSet:
        key = norm
        cs = self._chart_cache.get(key)
        if cs is None:
            cs = ChartSet(self, norm)
            self._chart_cache[key] = cs
        return cs

    # -- vertex data ------------------------------------------------------

    def vertex_piece(self, i: int) -> int:
        return self.vertices[i].piece

    def chord_vector(self) -> np.ndarray:
        return self.vertices[1].pos - self.vertices[0].pos

    def vertex_data(self, norm) -> dict:
        """Closed-form vertex quantities: chord length and R, R'' per vertex.

        R = 1/f''(0) and R'' = 3/R - f''''(0) R^2, both exact from the
        profile Taylor coefficients; R'' is with respect to arclength, and
        for even profiles it is the same in the Euclidean and F charts.
        """
        out = {"L": norm.eval(self.chord_vector())}
        for i, v in enumerate(self.vertices):
            tay = v.profile.taylor(4)
            f2 = 2.0 * tay[2]
            f4 = 24.0 * tay[4]
            if f2 <= 0:
                raise FlatPoint("vertex profile has nonpositive curvature")
            R = 1.0 / f2
            out[f"R{i}"] = R
            out[f"R{i}pp"] = 3.0 / R - f4 * R * R
        return out

    def vertex_chart_jet(self, i: int, order: int, norm):
        """Taylor coefficients of gamma(s) = (X(s), Y(s)) at vertex i.

        s is the local F-arclength, zero at the vertex, increasing ccw.
        Returns (x_coeffs, y_coeffs), lists of length order + 1.
        """
        v = self.vertices[i]
        tay = v.profile.taylor(order)
        X = [v.pos[0] + 0.0] + [0.0] * order
        Y = [v.pos[1] + 0.0] + [0.0] * order
        X[1] += v.tangent[0]
        Y[1] += v.tangent[1]
        for n in range(2, order + 1):
            X[n] += tay[n] * v.inward[0]
            Y[n] += tay[n] * v.inward[1]

        # speed(t) = F(X'(t), Y'(t)) as a univariate jet in t
        dX = [n * X[n] for n in range(1, order + 1)]
        dY = [n * Y[n] for n in range(1, order + 1)]
        jx = Jet2.from_univariate(dX, 0, order)
        jy = Jet2.from_univariate(dY, 0, order)
        speed = norm_on_jets(norm, jx, jy)
        s_coeffs = [0.0] + [speed.coeff(n - 1, 0) / n for n in range(1, order + 1)]
        s_jet = Jet2.from_univariate(s_coeffs, 0, order)
        ds_jet = Jet2.from_univariate([n * s_coeffs[n] for n in range(1, order + 1)], 0, order)
        x_var = Jet2.variable(0, order)

        def residual(tj):
            return s_jet.compose(tj, Jet2.zero(order)) - x_var

        def dresidual(tj):
            return ds_jet.compose(tj, Jet2.zero(order))

        t_of_s = implicit_jet_solve(residual, dresidual, 0.0, order)
        zero = Jet2.zero(order)
        xj = Jet2.from_univariate(X, 0, order).compose(t_of_s, zero)
        yj = Jet2.from_univariate(Y, 0, order).compose(t_of_s, zero)
        return ([xj.coeff(n, 0) for n in range(order + 1)],
                [yj.coeff(n, 0) for n in range(order + 1)])

    # -- geometry queries ----------------------------------------------------

    def boundary_frame(self, norm, piece: int, s: float):
        """Position, F-unit tangent, and d^2 gamma/ds^2 at (piece, s)."""
        chart = self.charts(norm)[piece]
        p = self.pieces[piece]
        t = chart.t_of_s(s)
        g1 = p.d1(t)
        g2 = p.d2(t)
        f = norm.eval(g1)
        gf = norm.grad(g1)
        d1s = g1 / f
        d2s = g2 / f ** 2 - g1 * (float(gf @ g2) / f ** 3)
        return p.point(t), d1s, d2s

    def boundary_point(self, norm, piece: int, s: float) -> dict:
        chart = self.charts(norm)[piece]
        p = self.pieces[piece]
        t = chart.t_of_s(s)
        pos = p.point(t)
        g1 = p.d1(t)
        tangent = g1 / norm.eval(g1)
        corner = False
        if not p.periodic:
            corner = min(s - chart.s_min, chart.s_max - s) < 1e-9
        return {"position": pos, "tangent": tangent, "is_corner": corner}

    def bbox(self):
        pts = []
        for p in self.pieces:
            ts = np.linspace(p.lo, p.hi, 64)
            pts.extend(p.point(t) for t in ts)
        pts = np.array(pts)
        return pts.min(axis=0), pts.max(axis=0)

    def boundary_polyline(self, n_per_piece=200):
        """Sampled boundary for plotting, one closed loop."""
        pts = []
        for p in self.pieces:
            for t in np.linspace(p.lo, p.hi, n_per_piece, endpoint=False):
                pts.append(p.point(t))
        pts.append(pts[0])
        return np.array(pts)


# ---------------------------------------------------------------------------
# curvature queries
# ---------------------------------------------------------------------------

def euclid_curvature(table: Table, norm, piece: int, s: float) -> dict:
    """Euclidean curvature data at (piece, s): kappa_e, R, and R', R'' in s.

    R' and R'' use 5-point central differences with one Richardson halving
    at step h = 1e-3 * R (fixed scheme, reproducible across platforms).
    """
    chart = table.charts(norm)[piece]
    p = table.pieces[piece]

    def R_of(sv):
        k = p.euclid_curvature_t(chart.t_of_s(sv))
        if k <= 0:
            raise FlatPoint(f"nonpositive curvature at s={sv}")
        return 1.0 / k

    R = R_of(s)
    h = 1e-3 * R

    def stencil(hh):
        rm2, rm1, rp1, rp2 = R_of(s - 2 * hh), R_of(s - hh), R_of(s + hh), R_of(s + 2 * hh)
        d1 = (rm2 - 8 * rm1 + 8 * rp1 - rp2) / (12 * hh)
        d2 = (-rm2 + 16 * rm1 - 30 * R + 16 * rp1 - rp2) / (12 * hh * hh)
        return d1, d2

    d1a, d2a = stencil(h)
    d1b, d2b = stencil(0.5 * h)
    Rp = (16 * d1b - d1a) / 15.0
    Rpp = (16 * d2b - d2a) / 15.0
    return {"kappa_e": 1.0 / R, "R": R, "Rp": Rp, "Rpp": Rpp}


def minkowski_curvature(table: Table, norm, piece: int, s: float) -> dict:
    """Minkowski curvature kappa_m = kappa_e * r(theta)^3 and the right normal."""
    chart = table.charts(norm)[piece]
    p = table.pieces[piece]
    t = chart.t_of_s(s)
    ke = p.euclid_curvature_t(t)
    if ke <= 0:
        raise FlatPoint(f"nonpositive curvature at s={s}")
    g1 = p.d1(t)
    theta = math.atan2(g1[1], g1[0])
    r = norm.indicatrix_radius(theta)
    dr = norm.indicatrix_radius_dtheta(theta)
    e = np.array([math.cos(theta), math.sin(theta)])
    eperp = np.array([-e[1], e[0]])
    n_gamma = (dr / r ** 2) * e + (1.0 / r) * eperp
    return {"kappa_m": ke * r ** 3, "n_gamma": n_gamma}


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _auto_eps(prof0, prof1, L, margin=0.9):
    """Largest symmetric half-height keeping both arcs convex and separated."""
    cap = margin * min(prof0.convex_limit(), prof1.convex_limit(),
                       prof0.domain(), prof1.domain())

    def gap(t):
        return L - prof0.f(t) - prof1.f(t)

    hi = cap if math.isfinite(cap) else 1.0
    while not math.isfinite(cap) and gap(hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            break
    if gap(hi) <= 0:
        lo = 0.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if gap(mid) > 0:
                lo = mid
            else:
                hi = mid
        hi = margin * lo
    return hi


def make_two_arc_table(prof0, prof1, L, eps=None, kind="polynomial", params=None):
    """Table with left/right arcs facing across [0, L] plus closing segments."""
    if L <= 0:
        raise GeometryOverlap(f"chord length must be positive, got {L}")
    if eps is None:
        eps = _auto_eps(prof0, prof1, L)
    eps = float(eps)
    for prof in (prof0, prof1):
        lim = min(prof.convex_limit(), prof.domain())
        ts = np.linspace(0, eps, 64)
        if eps > lim + 1e-12 or any(prof.d2(t) <= 0 for t in ts if t < prof.domain()):
            raise NonConvexArc(f"arc not strictly convex out to eps={eps}")
    gap = [L - prof0.f(t) - prof1.f(t) for t in np.linspace(0, eps, 64)]
    if min(gap) < -1e-12:
        raise GeometryOverlap("arcs overlap before reaching the half-height")

    left = ArcPiece(prof0, (0.0, 0.0), (0.0, -1.0), (1.0, 0.0), eps)
    right = ArcPiece(prof1, (L, 0.0), (0.0, 1.0), (-1.0, 0.0), eps)
    xl = prof0.f(eps)
    xr = L - prof1.f(eps)
    pieces = [left]
    if xr - xl > 1e-12:
        pieces.append(SegmentPiece((xl, -eps), (xr, -eps)))
        pieces.append(right)
        pieces.append(SegmentPiece((xr, eps), (xl, eps)))
        right_idx = 2
    else:
        pieces.append(right)
        right_idx = 1
    vertices = [
        VertexInfo(0, 0.0, np.array([0.0, 0.0]), np.array([0.0, -1.0]),
                   np.array([1.0, 0.0]), prof0),
        VertexInfo(right_idx, 0.0, np.array([L, 0.0]), np.array([0.0, 1.0]),
                   np.array([-1.0, 0.0]), prof1),
    ]
    return Table(pieces, vertices, kind, params or {"L": L, "eps": eps})


def make_polynomial_table(alpha, beta, L, eps=None):
    """Q(L, alpha, beta): even-polynomial arcs; alpha, beta = [a2, a4, ...]."""
    return make_two_arc_table(EvenPolyProfile(alpha), EvenPolyProfile(beta), L,
                              eps=eps, kind="polynomial",
                              params={"alpha": list(alpha), "beta": list(beta), "L": L})


def make_lemon(L):
    """Lemon table: two unit-radius circular arcs with vertices (0,0), (L,0)."""
    if not 0 < L < 2:
        raise GeometryOverlap(f"lemon requires 0 < L < 2, got {L}")
    tmax = math.sqrt(L - L * L / 4.0)
    return make_two_arc_table(ConicProfile(1.0, 1.0), ConicProfile(1.0, 1.0), L,
                              eps=tmax, kind="lemon", params={"L": L})


def _make_conic_table(A, B, kind, params):
    piece = ConicPiece(A, B)
    vertices = [
        VertexInfo(0, -0.5 * math.pi, np.array([0.0, -B]), np.array([1.0, 0.0]),
                   np.array([0.0, 1.0]), ConicProfile(B, A)),
        VertexInfo(0, 0.5 * math.pi, np.array([0.0, B]), np.array([-1.0, 0.0]),
                   np.array([0.0, -1.0]), ConicProfile(B, A)),
    ]
    return Table([piece], vertices, kind, params)


def make_circle(r=1.0):
    """Circle x^2 + y^2 = r^2; the 2-orbit runs along the vertical diameter."""
    if r <= 0:
        raise GeometryOverlap(f"radius must be positive, got {r}")
    return _make_conic_table(r, r, "circle", {"r": r})


def make_ellipse(delta):
    """Ellipse x^2 + y^2/delta^2 = 1; the 2-orbit runs along the minor axis."""
    if not 0 < delta < 1:
        raise GeometryOverlap(f"ellipse requires 0 < delta < 1, got {delta}")
    return _make_conic_table(1.0, delta, "ellipse", {"delta": delta})


def build_table(spec: dict) -> Table:
    """Build a table from the studio schema: {'kind': ..., params...}."""
    from .errors import ConfigError
    if "kind" not in spec:
        raise ConfigError("table.kind missing")
    kind = spec["kind"]
    try:
        if kind == "lemon":
            return make_lemon(float(spec["L"]))
        if kind == "circle":
            return make_circle(float(spec.get("r", 1.0)))
        if kind == "ellipse":
            return make_ellipse(float(spec["delta"]))
        if kind == "polynomial":
            alpha = [float(c) for c in spec["alpha"]]
            beta = [float(c) for c in spec.get("beta", alpha)]
            eps = spec.get("eps")
            return make_polynomial_table(alpha, beta, float(spec["L"]),
                                         eps=None if eps is None else float(eps))
    except KeyError as exc:
        raise ConfigError(f"table.{exc.args[0]} missing for kind '{kind}'") from None
    raise ConfigError(f"table.kind '{kind}' not one of lemon|circle|ellipse|polynomial")
