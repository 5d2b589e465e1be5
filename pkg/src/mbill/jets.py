"""Truncated bivariate Taylor arithmetic (jets) and jet propagation.

A ``Jet2`` is a polynomial sum c[j,k] x^j y^k over total degree j+k <= D
with arithmetic closed at degree D. Jets are used to push boundary charts
and norm derivatives through the implicitly-defined billiard map, yielding
the degree-3 jet of one billiard step around a fixed point. Everything here
is exact up to float roundoff: no finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ScaleDegenerate, SecondOrderNonzero, SingularImplicit


class Jet2:
    """Bivariate truncated Taylor polynomial.

    coeffs[j, k] is the coefficient of x^j y^k; entries with j + k > degree
    are kept at zero. Arithmetic truncates above total degree.
    """

    __slots__ = ("coeffs", "degree")

    def __init__(self, coeffs: np.ndarray, degree: int):
        self.coeffs = coeffs
        self.degree = degree

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(degree: int) -> "Jet2":
        return Jet2(np.zeros((degree + 1, degree + 1)), degree)

    @staticmethod
    def constant(c: float, degree: int) -> "Jet2":
        j = Jet2.zero(degree)
        j.coeffs[0, 0] = c
        return j

    @staticmethod
    def variable(index: int, degree: int, base: float = 0.0) -> "Jet2":
        """base + x (index 0) or base + y (index 1)."""
        j = Jet2.constant(base, degree)
        if index == 0:
            j.coeffs[1, 0] = 1.0
        else:
            j.coeffs[0, 1] = 1.0
        return j

    @staticmethod
    def from_univariate(coeffs, index: int, degree: int) -> "Jet2":
        """Polynomial sum coeffs[n] * t^n in variable x (index 0) or y (index 1)."""
        j = Jet2.zero(degree)
        for n, c in enumerate(coeffs):
            if n > degree:
                break
            if index == 0:
                j.coeffs[n, 0] = c
            else:
                j.coeffs[0, n] = c
        return j

    # -- ring operations ----------------------------------------------------

    def copy(self) -> "Jet2":
        return Jet2(self.coeffs.copy(), self.degree)

    def __add__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.coeffs + other.coeffs, self.degree)
        out = self.copy()
        out.coeffs[0, 0] += other
        return out

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs, self.degree)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            return Jet2(self.coeffs - other.coeffs, self.degree)
        out = self.copy()
        out.coeffs[0, 0] -= other
        return out

    def __rsub__(self, other):
        out = -self
        out.coeffs[0, 0] += other
        return out

    def __mul__(self, other):
        if not isinstance(other, Jet2):
            return Jet2(self.coeffs * other, self.degree)
        D = self.degree
        a, b = self.coeffs, other.coeffs
        out = np.zeros_like(a)
        for j1 in range(D + 1):
            for k1 in range(D + 1 - j1):
                c = a[j1, k1]
                if c == 0.0:
                    continue
                jmax = D - j1
                for j2 in range(jmax + 1):
                    kmax = D - j1 - k1 - j2
                    if kmax < 0:
                        break
                    out[j1 + j2, k1:k1 + kmax + 1] += c * b[j2, :kmax + 1]
        return Jet2(out, D)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * other.reciprocal()
        return Jet2(self.coeffs / other, self.degree)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    # -- analytic operations -------------------------------------------------

    def power(self, p: float) -> "Jet2":
        """A^p for real p via the binomial series; constant term must be positive."""
        c = self.coeffs[0, 0]
        if c <= 0.0:
            raise ValueError(f"jet power requires a positive constant term, got {c}")
        e = self * (1.0 / c) - 1.0
        out = Jet2.constant(1.0, self.degree)
        term = Jet2.constant(1.0, self.degree)
        binom = 1.0
        for m in range(1, self.degree + 1):
            binom *= (p - (m - 1)) / m
            term = term * e
            out = out + term * binom
        return out * (c ** p)

    def sqrt(self) -> "Jet2":
        return self.power(0.5)

    def reciprocal(self) -> "Jet2":
        c = self.coeffs[0, 0]
        if c == 0.0:
            raise ZeroDivisionError("jet reciprocal of zero constant term")
        if c > 0:
            return self.power(-1.0)
        return -((-self).power(-1.0))

    def deriv(self, index: int) -> "Jet2":
        """Formal partial derivative; the top total degree is no longer exact."""
        D = self.degree
        out = Jet2.zero(D)
        if index == 0:
            for j in range(1, D + 1):
                out.coeffs[j - 1, :D + 1 - j + 1] = j * self.coeffs[j, :D + 2 - j]
        else:
            for k in range(1, D + 1):
                out.coeffs[:, k - 1] += k * self.coeffs[:, k]
            out.coeffs[:, D] = 0.0
        return out

    def compose(self, gx: "Jet2", gy: "Jet2") -> "Jet2":
        """Substitute x -> gx, y -> gy; gx, gy must have zero constant term."""
        if gx.coeffs[0, 0] != 0.0 or gy.coeffs[0, 0] != 0.0:
            raise ValueError("compose requires substitution jets with zero constant term")
        D = self.degree
        # Horner in y inside Horner in x keeps the cost at O(D^2) multiplies.
        out = Jet2.zero(D)
        for j in range(D, -1, -1):
            row = Jet2.zero(D)
            for k in range(D - j, -1, -1):
                row = row * gy
                row.coeffs[0, 0] += self.coeffs[j, k]
            out = out * gx + row
        return out

    # -- queries ---------------------------------------------------------------

    def coeff(self, j: int, k: int) -> float:
        return float(self.coeffs[j, k])

    def truncated(self, degree: int) -> "Jet2":
        """Copy truncated to a lower degree."""
        out = Jet2.zero(degree)
        for j in range(degree + 1):
            out.coeffs[j, :degree + 1 - j] = self.coeffs[j, :degree + 1 - j]
        return out

    def max_abs(self, total_degree: int | None = None) -> float:
        """Largest |coefficient|, optionally restricted to one total degree."""
        m = 0.0
        for j in range(self.degree + 1):
            for k in range(self.degree + 1 - j):
                if total_degree is not None and j + k != total_degree:
                    continue
                m = max(m, abs(self.coeffs[j, k]))
        return m

    def __repr__(self):
        terms = []
        for j in range(self.degree + 1):
            for k in range(self.degree + 1 - j):
                c = self.coeffs[j, k]
                if c != 0.0:
                    terms.append(f"{c:+.6g} x^{j} y^{k}")
        return "Jet2(" + (" ".join(terms) if terms else "0") + ")"


def implicit_jet_solve(residual, dresidual, seed: float, degree: int,
                       tol: float = 1e-12) -> Jet2:
    """Solve residual(X) == 0 for an unknown jet X by Newton in jet space.

    ``residual`` and ``dresidual`` map a Jet2 to a Jet2 (the residual and its
    derivative in the unknown). Newton converges degree by degree, so
    degree + 2 sweeps suffice when the linearization at the seed is regular.
    """
    x = Jet2.constant(seed, degree)
    for _ in range(degree + 2):
        r = residual(x)
        dr = dresidual(x)
        if abs(dr.coeffs[0, 0]) < 1e-14:
            raise SingularImplicit("implicit jet solve: zero derivative at the base point")
        x = x - r * dr.reciprocal()
    r = residual(x)
    scale = 1.0 + x.max_abs()
    if r.max_abs() > tol * scale:
        raise SingularImplicit(f"implicit jet solve did not converge, residual {r.max_abs():.3e}")
    return x


def norm_on_jets(norm, v1: Jet2, v2: Jet2) -> Jet2:
    """Lift the mixed norm to jets: F(v1, v2) with v1, v2 jet-valued.

    Requires a MixedNorm-like object with fields a, b, k and a nonvanishing
    jet argument (constant term of v1^2 + v2^2 positive).
    """
    q2 = v1 * v1 + v2 * v2
    out = q2.sqrt() * norm.a
    if norm.b != 0.0:
        p = 2 * norm.k
        pa = Jet2.constant(1.0, v1.degree)
        pb = Jet2.constant(1.0, v2.degree)
        for _ in range(p):
            pa = pa * v1
            pb = pb * v2
        out = out + (pa + pb).power(1.0 / p) * norm.b
    return out


@dataclass
class MapJet:
    """Degree-D jet of one billiard step (s, u) -> (s1, u1) at a fixed point.

    ``jet_s1`` and ``jet_u1`` are jets in the local offsets (delta s, delta u);
    their constant terms vanish because the base point is on a periodic orbit
    and both vertex charts place s = 0, u = 0 there.
    """

    jet_s1: Jet2
    jet_u1: Jet2
    src_piece: int
    dst_piece: int

    @property
    def degree(self) -> int:
        return self.jet_s1.degree

    def linear_part(self) -> np.ndarray:
        return np.array([
            [self.jet_s1.coeff(1, 0), self.jet_s1.coeff(0, 1)],
            [self.jet_u1.coeff(1, 0), self.jet_u1.coeff(0, 1)],
        ])

    def coeff(self, comp: str, j: int, k: int) -> float:
        jet = self.jet_s1 if comp == "s1" else self.jet_u1
        return jet.coeff(j, k)


def map_jet(table, norm, vertex: int = 0, degree: int = 3,
            second_order_tol: float = 1e-7) -> MapJet:
    """Jet of the one-step billiard map at a vertex of the axis 2-orbit.

    Strategy: lift both vertex charts to jets gamma(s) (order degree+1),
    form the chord-length jet L(s, s1) = F(gamma_b(s1) - gamma_a(s)), read
    off u = dL/ds and u1 = -dL/ds1, solve u = U(s, s1) for s1(s, u) by an
    implicit jet Newton, and substitute into u1. With even arcs all
    quadratic coefficients must vanish; a violation indicates a geometry or
    sign bug and raises SecondOrderNonzero.
    """
    other = 1 - vertex
    D = degree + 1  # chord jet needs one extra order
    ax, ay = table.vertex_chart_jet(vertex, D, norm)
    bx, by = table.vertex_chart_jet(other, D, norm)

    # chord components as jets in (s, s1) = (x, y)
    v1 = Jet2.from_univariate(bx, 1, D) - Jet2.from_univariate(ax, 0, D)
    v2 = Jet2.from_univariate(by, 1, D) - Jet2.from_univariate(ay, 0, D)
    Ljet = norm_on_jets(norm, v1, v2)

    U = Ljet.deriv(0)    # u(s, s1), valid through degree D-1
    U1 = -Ljet.deriv(1)  # u1(s, s1)
    dU = U.deriv(1)      # dU/ds1, valid through degree D-2 (enough for Newton)

    s_var = Jet2.variable(0, degree)
    u_var = Jet2.variable(1, degree)
    Ud = U.truncated(degree)
    dUd = dU.truncated(degree)

    def residual(x):
        return Ud.compose(s_var, x) - u_var

    def dresidual(x):
        return dUd.compose(s_var, x)

    s1 = implicit_jet_solve(residual, dresidual, 0.0, degree)
    u1 = U1.truncated(degree).compose(s_var, s1)

    q = max(s1.max_abs(2), u1.max_abs(2))
    if q > second_order_tol:
        raise SecondOrderNonzero(
            f"quadratic jet coefficients {q:.3e} exceed {second_order_tol:.1e}")
    return MapJet(s1, u1, src_piece=table.vertex_piece(vertex),
                  dst_piece=table.vertex_piece(other))


def compose_map_jets(first: MapJet, second: MapJet) -> MapJet:
    """Truncated composition second(first(.)); degree of the result = min degree."""
    if first.dst_piece != second.src_piece:
        raise ValueError("compose_map_jets: second map does not start where the first lands")
    s1 = second.jet_s1.compose(first.jet_s1, first.jet_u1)
    u1 = second.jet_u1.compose(first.jet_s1, first.jet_u1)
    return MapJet(s1, u1, src_piece=first.src_piece, dst_piece=second.dst_piece)


def identity_map_jet(degree: int = 3, piece: int = 0) -> MapJet:
    return MapJet(Jet2.variable(0, degree), Jet2.variable(1, degree),
                  src_piece=piece, dst_piece=piece)
