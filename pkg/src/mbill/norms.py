"""Minkowski norms on the plane.

The working family is the mixed norm

    F(v) = a * |v|_2 + b * |v|_{2k},    a > 0, b >= 0, k >= 1 integer,

with exact first and second derivatives, the induced indicatrix geometry
(polar radius, Legendre transform), the anti-norm, and Birkhoff
orthogonality. Any object exposing ``eval``, ``grad`` and ``hess`` with the
same signatures can be plugged into the dynamics layer; only the mixed
family is constructed and tested here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotUnit, ZeroVector

Vec2 = np.ndarray  # shape (2,), float


@dataclass(frozen=True)
class Sym2:
    """Symmetric 2x2 matrix stored by entries."""

    xx: float
    xy: float
    yy: float

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.xx, self.xy], [self.xy, self.yy]])

    def dot(self, v: Vec2) -> Vec2:
        return np.array([self.xx * v[0] + self.xy * v[1],
                         self.xy * v[0] + self.yy * v[1]])

    def quad(self, u: Vec2, v: Vec2) -> float:
        """Bilinear form u^T S v."""
        return float(u[0] * (self.xx * v[0] + self.xy * v[1])
                     + u[1] * (self.xy * v[0] + self.yy * v[1]))


def _check_nonzero(v) -> tuple[float, float]:
    v1, v2 = float(v[0]), float(v[1])
    if v1 == 0.0 and v2 == 0.0:
        raise ZeroVector("norm derivative undefined at the zero vector")
    if not (math.isfinite(v1) and math.isfinite(v2)):
        raise ZeroVector(f"non-finite vector ({v1}, {v2})")
    return v1, v2


@dataclass(frozen=True)
class MixedNorm:
    """Mixed Minkowski norm a*|v|_2 + b*|v|_{2k}.

    ``k`` is the half-exponent: the second term uses the 2k-norm. The
    Euclidean norm is the special case b = 0 (or k = 1 with a + b arbitrary).
    The twist pipeline additionally assumes a + b = 1 and k = 2 so that
    motion along the coordinate axes has unit speed.
    """

    a: float
    b: float = 0.0
    k: int = 2

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"weight a must be > 0, got {self.a}")
        if self.b < 0:
            raise ValueError(f"weight b must be >= 0, got {self.b}")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"half-exponent k must be an integer >= 1, got {self.k}")
        object.__setattr__(self, "k", int(self.k))

    # -- basic evaluation ------------------------------------------------

    def eval(self, v) -> float:
        v1, v2 = _check_nonzero(v)
        n2 = math.hypot(v1, v2)
        if self.b == 0.0:
            return self.a * n2
        p = 2 * self.k
        n2k = (v1 ** p + v2 ** p) ** (1.0 / p)
        return self.a * n2 + self.b * n2k

    def grad(self, v) -> Vec2:
        """Exact gradient (F_{v1}, F_{v2}); 0-homogeneous."""
        v1, v2 = _check_nonzero(v)
        n2 = math.hypot(v1, v2)
        g1 = self.a * v1 / n2
        g2 = self.a * v2 / n2
        if self.b != 0.0:
            p = 2 * self.k
            s = v1 ** p + v2 ** p
            w = self.b * s ** (1.0 / p - 1.0)
            g1 += w * v1 ** (p - 1)
            g2 += w * v2 ** (p - 1)
        return np.array([g1, g2])

    def hess(self, v) -> Sym2:
        """Exact Hessian of F; degree -1 homogeneous, annihilates v."""
        v1, v2 = _check_nonzero(v)
        n2sq = v1 * v1 + v2 * v2
        alpha = self.a * n2sq ** -1.5
        h11 = alpha * v2 * v2
        h22 = alpha * v1 * v1
        h12 = -alpha * v1 * v2
        if self.b != 0.0:
            p = 2 * self.k
            beta = self.b * (v1 ** p + v2 ** p) ** (1.0 / p - 2.0)
            m = p - 1
            # p - 2 == 0 when k = 1; 0.0**0 == 1.0 keeps that case exact
            h11 += m * beta * v1 ** (p - 2) * v2 ** p
            h22 += m * beta * v1 ** p * v2 ** (p - 2)
            h12 += -m * beta * (v1 * v2) ** (p - 1)
        return Sym2(h11, h12, h22)

    # -- derived geometry ------------------------------------------------

    def fundamental_tensor(self, v) -> Sym2:
        """Hessian of F^2/2 at v: g_ij = F_i F_j + F F_ij. Positive definite."""
        f = self.eval(v)
        g = self.grad(v)
        h = self.hess(v)
        return Sym2(g[0] * g[0] + f * h.xx,
                    g[0] * g[1] + f * h.xy,
                    g[1] * g[1] + f * h.yy)

    def indicatrix_radius(self, theta: float) -> float:
        """Polar radius r(theta) of the unit sphere {F = 1}."""
        return 1.0 / self.eval((math.cos(theta), math.sin(theta)))

    def indicatrix_radius_dtheta(self, theta: float) -> float:
        """dr/dtheta of the indicatrix polar radius."""
        e = np.array([math.cos(theta), math.sin(theta)])
        de = np.array([-e[1], e[0]])
        f = self.eval(e)
        df = float(self.grad(e) @ de)
        return -df / (f * f)

    def unit(self, v) -> Vec2:
        """Rescale v to the indicatrix."""
        v = np.asarray(v, dtype=float)
        return v / self.eval(v)

    def legendre(self, u, tol: float = 1e-9) -> Vec2:
        """Legendre covector p of a unit vector u: p(u)=1, ker p = T_u(indicatrix)."""
        f = self.eval(u)
        if abs(f - 1.0) > tol:
            raise NotUnit(f"legendre requires F(u)=1, got {f}")
        return self.grad(u)

    def antinorm(self, v, n_grid: int = 720, tol: float = 1e-10) -> float:
        """sup over unit w of |det(w, v)| with the standard determinant form.

        The objective theta -> r(theta)*|det(e(theta), v)| is smooth and
        unimodal per half-arc for strictly convex indicatrices; a coarse
        angular grid locates the maximum and golden-section refines it.
        """
        v1, v2 = _check_nonzero(v)

        def val(theta):
            c, s = math.cos(theta), math.sin(theta)
            return abs(c * v2 - s * v1) / self.eval((c, s))

        thetas = np.linspace(0.0, math.pi, n_grid, endpoint=False)
        vals = [val(t) for t in thetas]
        i = int(np.argmax(vals))
        step = math.pi / n_grid
        lo, hi = thetas[i] - step, thetas[i] + step
        invphi = (math.sqrt(5.0) - 1.0) / 2.0
        x1 = hi - invphi * (hi - lo)
        x2 = lo + invphi * (hi - lo)
        f1, f2 = val(x1), val(x2)
        while hi - lo > tol:
            if f1 < f2:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + invphi * (hi - lo)
                f2 = val(x2)
            else:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - invphi * (hi - lo)
                f1 = val(x1)
        return max(f1, f2)

    def birkhoff_orthogonal(self, v, w, tol: float = 1e-10) -> bool:
        """True iff v is Birkhoff orthogonal to w (indicatrix tangent at v parallel to w)."""
        w = np.asarray(w, dtype=float)
        nw = float(np.hypot(w[0], w[1]))
        if nw == 0.0:
            return True
        return abs(float(self.grad(v) @ w)) <= tol * nw


EUCLIDEAN = MixedNorm(1.0, 0.0, 2)


def mixed_norm(a: float, k: int = 2) -> MixedNorm:
    """Convenience constructor with the standing normalization a + b = 1."""
    if not 0 < a <= 1:
        raise ValueError(f"mixed_norm expects 0 < a <= 1, got {a}")
    return MixedNorm(a, 1.0 - a, k)
