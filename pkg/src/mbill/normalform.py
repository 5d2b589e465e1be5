"""Stability classification and twist-coefficient extraction.

Given the cubic jet of the billiard map at an elliptic fixed point, the
linear part is rescaled to a rigid rotation, the cubic terms are rewritten
in the complexified eigenbasis, and the coefficient of the resonant z^2 w
monomial delivers the first twist coefficient tau1 = Im(c21). Moser's
twist theorem then upgrades "elliptic, nonresonant, tau1 != 0" to
nonlinear stability; the consolidated verdict lives in StabilityReport.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import closedforms
from .errors import (NotElliptic, ResonantOrbit, ResonantOrParabolic,
                     ScaleDegenerate)
from .jets import MapJet, compose_map_jets, map_jet

PARABOLIC_TOL = 1e-9


@dataclass
class StabilityClass:
    kind: str            # "elliptic" | "parabolic" | "hyperbolic"
    trace: float
    eigenvalue: complex  # a representative eigenvalue


def classify(M: np.ndarray, det_tol: float = 1e-6) -> StabilityClass:
    """Elliptic/parabolic/hyperbolic by |trace| against 2 (det must be 1)."""
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    if abs(det - 1.0) > det_tol:
        raise ValueError(f"classify expects det = 1, got {det}")
    tr = float(M[0, 0] + M[1, 1])
    if abs(abs(tr) - 2.0) <= PARABOLIC_TOL:
        return StabilityClass("parabolic", tr, complex(math.copysign(1.0, tr)))
    half = 0.5 * tr
    if abs(tr) < 2.0:
        lam = complex(half, -math.sqrt(1.0 - half * half))
        return StabilityClass("elliptic", tr, lam)
    lam = half + math.copysign(math.sqrt(half * half - 1.0), half)
    return StabilityClass("hyperbolic", tr, complex(lam))


@dataclass
class NonresonanceReport:
    ok: bool
    which: str           # "A" | "B" | "generic"
    detail: str = ""


def check_nonresonance(M: np.ndarray, context: dict | None = None,
                       tol: float = 1e-9) -> NonresonanceReport:
    """Exclude fourth roots of unity for the eigenvalue of an elliptic M.

    For elliptic matrices lambda^4 = 1 can only happen via lambda = +-i,
    i.e. trace = 0. With the symmetric vertex context the failing locus is
    L = aR (condition A); with the asymmetric one, L in {aR0, aR1}
    (condition B); the trace test is what decides.
    """
    cls = classify(M)
    if cls.kind != "elliptic":
        raise NotElliptic(f"nonresonance check needs an elliptic matrix, got {cls.kind}")
    ok = abs(cls.trace) > tol
    which = "generic"
    detail = f"trace={cls.trace:.6g}"
    if context:
        kind = context.get("kind")
        a = context.get("a")
        L = context.get("L")
        if kind == "symmetric":
            which = "A"
            detail += f", L - aR = {L - a * context['R']:.6g}"
        elif kind == "asymmetric":
            which = "B"
            detail += (f", L - aR0 = {L - a * context['R0']:.6g}"
                       f", L - aR1 = {L - a * context['R1']:.6g}")
    return NonresonanceReport(ok, which, detail)


@dataclass
class TwistResult:
    tau1: float
    theta: float                 # rotation angle of the linearization, (0, 2 pi)
    eta: float                   # positive scaling of the rotation conjugacy
    c30: complex
    c21: complex
    c12: complex
    c03: complex
    residual_re_c21: float       # |Re c21|, zero for exact symplectic input
    residual_c12_c30: float      # |c12 + 3 conj(c30)|
    rotation_residual: float     # |cos^2 + sin^2 - 1| of the conjugated linear part


def twist_from_jet(mj: MapJet) -> TwistResult:
    """Normal-form reduction of a cubic map jet; tau1 = Im(c21).

    The linear part [[p, q], [r, p]] (equal diagonal) is conjugated by
    diag(eta, 1/eta) with eta = (-q/r)^(1/4) into the rotation by theta,
    cos(theta) = p, sin(theta) = eta^2 r; the quadratic terms must vanish
    (even tables) and the cubic ones give the c_jk.
    """
    M = mj.linear_part()
    a10, a01 = M[0, 0], M[0, 1]
    b10, b01 = M[1, 0], M[1, 1]
    scale = abs(a10) + abs(b01)
    if abs(a10 - b01) > 1e-7 * (1.0 + scale):
        raise ScaleDegenerate(
            f"diagonal entries differ ({a10} vs {b01}); rotation rescaling undefined")
    cls = classify(M)
    if cls.kind != "elliptic":
        raise NotElliptic(f"twist extraction needs an elliptic fixed point, got {cls.kind}")
    if not check_nonresonance(M).ok:
        raise ResonantOrbit("lambda^4 = 1: the cubic normal form does not define tau1")
    if a01 * b10 >= 0.0:
        raise ScaleDegenerate(f"off-diagonal product {a01 * b10} not negative")

    eta = (-a01 / b10) ** 0.25
    costh = 0.5 * (a10 + b01)
    sinth = eta * eta * b10
    rot_res = abs(costh * costh + sinth * sinth - 1.0)
    lam = complex(costh, sinth)
    lamb = lam.conjugate()

    def scaled(comp, j, k, expo):
        return eta ** expo * mj.coeff(comp, j, k)

    A = {(j, k): scaled("s1", j, k, j - k - 1) for j, k in
         ((3, 0), (2, 1), (1, 2), (0, 3))}
    B = {(j, k): scaled("u1", j, k, j - k + 1) for j, k in
         ((3, 0), (2, 1), (1, 2), (0, 3))}
    i = 1j
    a30, a21, a12, a03 = A[(3, 0)], A[(2, 1)], A[(1, 2)], A[(0, 3)]
    b30, b21, b12, b03 = B[(3, 0)], B[(2, 1)], B[(1, 2)], B[(0, 3)]
    c30 = lamb / 8 * (a30 + i * b30 - i * a21 + b21 - a12 - i * b12 + i * a03 - b03)
    c21 = lamb / 8 * (3 * a30 + 3 * i * b30 - i * a21 + b21 + a12 + i * b12
                      - 3 * i * a03 + 3 * b03)
    c12 = lamb / 8 * (3 * a30 + 3 * i * b30 + i * a21 - b21 + a12 + i * b12
                      + 3 * i * a03 - 3 * b03)
    c03 = lamb / 8 * (a30 + i * b30 + i * a21 - b21 - a12 - i * b12 - i * a03 + b03)
    theta = math.atan2(sinth, costh) % (2.0 * math.pi)
    return TwistResult(
        tau1=float(c21.imag), theta=float(theta), eta=float(eta),
        c30=complex(c30), c21=complex(c21), c12=complex(c12), c03=complex(c03),
        residual_re_c21=float(abs(c21.real)),
        residual_c12_c30=float(abs(c12 + 3.0 * c30.conjugate())),
        rotation_residual=float(rot_res),
    )


def twist_numeric(table, norm, two_step: bool = False, degree: int = 3) -> TwistResult:
    """tau1 of the vertex 2-orbit from the numeric jet pipeline."""
    mj0 = map_jet(table, norm, vertex=0, degree=degree)
    if two_step:
        mj1 = map_jet(table, norm, vertex=1, degree=degree)
        return twist_from_jet(compose_map_jets(mj0, mj1))
    return twist_from_jet(mj0)


# ---------------------------------------------------------------------------
# consolidated report
# ---------------------------------------------------------------------------

@dataclass
class StabilityReport:
    table_kind: str
    norm_a: float
    vertex: dict                     # L, R0, R0pp, R1, R1pp
    symmetric: bool
    stability: StabilityClass
    nonresonant: bool
    condition: str                   # "A" | "B"
    tau1_numeric: float | None = None
    tau1_closed: float | None = None
    tau1_closed_suspect: float | None = None
    moser_stable: str = "unknown"
    theta: float | None = None
    residuals: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_lines(self) -> list[str]:
        v = self.vertex
        lines = [
            f"table_kind={self.table_kind}",
            f"norm_a={self.norm_a!r}",
            f"L={v['L']!r}",
            f"R0={v['R0']!r}", f"R0pp={v['R0pp']!r}",
            f"R1={v['R1']!r}", f"R1pp={v['R1pp']!r}",
            f"symmetric={str(self.symmetric).lower()}",
            f"class={self.stability.kind}",
            f"trace={self.stability.trace!r}",
            f"nonresonant={str(self.nonresonant).lower()}",
            f"condition={self.condition}",
        ]
        if self.tau1_numeric is not None:
            lines.append(f"tau1_numeric={self.tau1_numeric!r}")
        if self.tau1_closed is not None:
            lines.append(f"tau1_closed={self.tau1_closed!r}")
        if self.tau1_closed_suspect is not None:
            lines.append(f"tau1_closed_suspect={self.tau1_closed_suspect!r}")
        if self.theta is not None:
            lines.append(f"theta={self.theta!r}")
        for k, val in self.residuals.items():
            lines.append(f"residual_{k}={val!r}")
        lines.append(f"moser_stable={self.moser_stable}")
        for n in self.notes:
            lines.append(f"note={n}")
        return lines


def report(table, norm) -> StabilityReport:
    """Classify the axis 2-orbit and assemble the Moser-stability verdict."""
    vd = table.vertex_data(norm)
    a = norm.a
    L, R0, R1 = vd["L"], vd["R0"], vd["R1"]
    symmetric = (math.isclose(R0, R1, rel_tol=1e-12, abs_tol=1e-12)
                 and math.isclose(vd["R0pp"], vd["R1pp"], rel_tol=1e-12, abs_tol=1e-12))
    if symmetric:
        M = closedforms.vertex_tangent_matrix(a, L, R0)
        context = {"kind": "symmetric", "a": a, "L": L, "R": R0}
        condition = "A"
    else:
        e = closedforms.two_step_tangent_entries(a, L, R0, R1)
        M = np.array([[e["a10"], e["a01"]], [e["b10"], e["b01"]]])
        context = {"kind": "asymmetric", "a": a, "L": L, "R0": R0, "R1": R1}
        condition = "B"
    cls = classify(M)
    rep = StabilityReport(table_kind=table.kind, norm_a=a, vertex=vd,
                          symmetric=symmetric, stability=cls,
                          nonresonant=False, condition=condition)
    if cls.kind == "hyperbolic":
        rep.moser_stable = "no-hyperbolic"
        return rep
    if cls.kind == "parabolic":
        rep.moser_stable = "no-parabolic"
        return rep
    nr = check_nonresonance(M, context)
    rep.nonresonant = nr.ok
    if not nr.ok:
        rep.moser_stable = "unknown-resonant"
        rep.notes.append(f"resonance: {nr.detail}")
        return rep

    tw = twist_numeric(table, norm, two_step=not symmetric)
    rep.tau1_numeric = tw.tau1
    rep.theta = tw.theta
    rep.residuals = {
        "re_c21": tw.residual_re_c21,
        "c12_3c30": tw.residual_c12_c30,
        "rotation": tw.rotation_residual,
    }
    try:
        if symmetric:
            rep.tau1_closed = closedforms.twist_symmetric_closed(a, L, R0, vd["R0pp"])
        else:
            rep.tau1_closed = closedforms.twist_asymmetric_exact(
                a, L, R0, R1, vd["R0pp"], vd["R1pp"])
            rep.tau1_closed_suspect = closedforms.twist_asymmetric_closed(
                a, L, R0, R1, vd["R0pp"], vd["R1pp"])[0]
    except ResonantOrParabolic:
        rep.notes.append("closed form undefined at this parameter point")

    zero_tol = 1e-7 * (1.0 + abs(tw.c30) + abs(tw.c21))
    if abs(tw.tau1) <= zero_tol:
        rep.moser_stable = "unknown-zero-twist"
    else:
        rep.moser_stable = "yes"
    return rep
