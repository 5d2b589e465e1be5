"""Closed-form vertex quantities for the mixed norm (a + b = 1, k = 2).

Everything here is a rational function of the vertex data (a, L, R, R'')
of the straight period-2 orbit: the one-step tangent matrix, its cubic
Taylor coefficients, and the first twist coefficient in several equivalent
algebraic forms. These are the oracles the numeric jet pipeline is tested
against.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ResonantOrParabolic


def vertex_tangent_matrix(a: float, L: float, R: float) -> np.ndarray:
    """One-step tangent map at the vertex in (s, u) coordinates."""
    return np.array([
        [L / (a * R) - 1.0, L / a],
        [(L - 2.0 * a * R) / (a * R * R), L / (a * R) - 1.0],
    ])


def two_step_tangent_entries(a: float, L: float, R0: float, R1: float) -> dict:
    """Linear part of the two-step map at the vertex with curvatures R0, R1."""
    a10 = (a * R0 * (a * R1 - 2 * L) + 2 * L * (L - a * R1)) / (a * a * R0 * R1)
    a01 = (2 * L / a) * (L / (a * R1) - 1.0)
    b10 = 2 * (L - a * R0) * (L - a * (R0 + R1)) / (a * a * R0 * R0 * R1)
    return {"a10": a10, "a01": a01, "b10": b10, "b01": a10}


def third_order_partials(a: float, L: float, R: float, Rpp: float) -> dict:
    """Third-order partials of the one-step map (s1, u1) at the symmetric vertex.

    Keys are like 's_ssu' for d^3 s1 / ds^2 du evaluated at the fixed point.
    The 'u_sss' entry carries a sign correction relative to a commonly
    quoted form; the value below is the one consistent with area
    preservation and with the closed-form twist coefficient (both checked
    in the test suite).
    """
    a2, a3, a4, a5 = a ** 2, a ** 3, a ** 4, a ** 5
    R2, R3, R4, R5, R6 = R ** 2, R ** 3, R ** 4, R ** 5, R ** 6
    s_sss = (2 * a4 * L * R2 - 3 * a3 * R * (L ** 2 - L * R + 2 * R2) - a3 * L * R3 * Rpp
             + a2 * (L ** 3 + 3 * L * R2) - 3 * a * L * R * (L - 3 * R) - 6 * L * R2) / (a4 * R5)
    s_ssu = (2 * a4 * L * R2 - 2 * a3 * R * (L ** 2 + R2) + a2 * (L ** 3 + 2 * L * R2)
             - 3 * a * L * R * (L - 3 * R) - 6 * L * R2) / (a4 * R4)
    s_suu = L * (-a3 * L * R + a2 * (L ** 2 + R2)
                 - 3 * a * R * (L - 3 * R) - 6 * R2) / (a4 * R3)
    s_uuu = L * (a2 * L ** 2 - 3 * a * R * (L - 3 * R) - 6 * R2) / (a4 * R2)
    u_sss = -(6 * L * R2 - 8 * a5 * R3 - 12 * a3 * L * R * (L + R)
              + 3 * a2 * L ** 2 * (L + 3 * R) + 2 * a4 * R2 * (8 * L + 3 * R)
              - 3 * a * L * (L ** 2 - L * R + 3 * R2)
              + a * R * (L ** 3 - 3 * a * L ** 2 * R + 4 * a2 * L * R2
                         - 2 * a3 * R3) * Rpp) / (a4 * R6)
    u_ssu = -(6 * a4 * L * R2 - a3 * R * (9 * L ** 2 + 3 * L * R + 2 * R2)
              + a2 * L * (3 * L ** 2 + 6 * L * R + R2)
              - 3 * a * L * (L ** 2 - L * R + 3 * R2)
              + a * L * R * Rpp * (L - a * R) ** 2 + 6 * L * R2) / (a4 * R5)
    u_suu = -(6 * L * R2 + 2 * a4 * L * R2 + a2 * L * (3 * L ** 2 + 3 * L * R + 2 * R2)
              - 3 * a * L * (L ** 2 - L * R + 3 * R2)
              - 2 * a3 * (3 * L ** 2 * R + R3) + a * L ** 2 * R * (L - a * R) * Rpp) / (a4 * R4)
    u_uuu = (3 * (a - 1) * L * (a2 * L * R - a * (L ** 2 - L * R + R2) + 2 * R2)
             - a * L ** 3 * R * Rpp) / (a4 * R3)
    return {"s_sss": s_sss, "s_ssu": s_ssu, "s_suu": s_suu, "s_uuu": s_uuu,
            "u_sss": u_sss, "u_ssu": u_ssu, "u_suu": u_suu, "u_uuu": u_uuu}


def third_order_coefficients(a: float, L: float, R: float, Rpp: float) -> dict:
    """Cubic Taylor coefficients (partials over j! k!) keyed ('s1'|'u1', j, k)."""
    p = third_order_partials(a, L, R, Rpp)
    return {
        ("s1", 3, 0): p["s_sss"] / 6, ("s1", 2, 1): p["s_ssu"] / 2,
        ("s1", 1, 2): p["s_suu"] / 2, ("s1", 0, 3): p["s_uuu"] / 6,
        ("u1", 3, 0): p["u_sss"] / 6, ("u1", 2, 1): p["u_ssu"] / 2,
        ("u1", 1, 2): p["u_suu"] / 2, ("u1", 0, 3): p["u_uuu"] / 6,
    }


# ---------------------------------------------------------------------------
# twist coefficients
# ---------------------------------------------------------------------------

def _guard_denominator(den: float, scale: float):
    if abs(den) < 1e-12 * (1.0 + abs(scale)):
        raise ResonantOrParabolic(f"closed-form denominator {den:.3e} too small")


def twist_symmetric_closed(a: float, L: float, R: float, Rpp: float,
                           form: str = "main") -> float:
    """First twist coefficient of the one-step map at the symmetric vertex orbit.

    ``form='main'`` and ``form='weights'`` are two algebraically equivalent
    rational expressions (the second written in the (a, b) weights with
    b = 1 - a); they agree to rounding and are cross-checked in the tests.
    """
    den = 8 * a * a * R * (L - 2 * a * R)
    _guard_denominator(L - 2 * a * R, L + 2 * a * R)
    if form == "main":
        num = (a * a * L * R * Rpp + (4 - 3 * a) * a * L
               + 2 * (2 * a - 9) * a * R + 12 * R)
        return num / den
    if form == "weights":
        b = 1.0 - a
        num = (a * (a + 4 * b) * L - 2 * (a * a - 3 * a * b - 6 * b * b) * R
               + a * a * (a + b) ** 2 * L * R * Rpp)
        return num / (8 * a * a * R * ((a + b) * L - 2 * a * R))
    raise ValueError(f"unknown form '{form}'")


def twist_lemon(a: float, L: float) -> float:
    """Symmetric lemon specialization (R = 1, R'' = 0)."""
    _guard_denominator(2 * a - L, 2 * a + L)
    return (a * a * (3 * L - 4) + a * (18 - 4 * L) - 12) / (8 * a * a * (2 * a - L))


def twist_ellipse(a: float, delta: float) -> float:
    """Ellipse specialization (L = 2 delta, R = 1/delta, R'' = 3(delta^2-1)/delta)."""
    _guard_denominator(a - delta * delta, a + delta * delta)
    return (delta * (-6 + a * (9 + a - 4 * delta * delta))
            / (8 * a * a * (a - delta * delta)))


def lemon_zero_locus(a: float) -> float:
    """Chord length L with vanishing lemon twist coefficient."""
    return 2 * (2 * a * a - 9 * a + 6) / (a * (3 * a - 4))


def ellipse_zero_locus(a: float) -> float:
    """Minor semi-axis delta with vanishing ellipse twist coefficient.

    Real and inside the elliptic range only for a > (sqrt(105) - 9) / 2.
    """
    return math.sqrt(a * a + 9 * a - 6) / (2 * math.sqrt(a))


def twist_asymmetric_exact(a: float, L: float, R0: float, R1: float,
                           R0pp: float, R1pp: float) -> float:
    """First twist coefficient of the two-step map at the asymmetric vertex orbit.

    Obtained by composing the two one-step cubic jets in closed form and
    running the normal-form reduction symbolically; it matches the numeric
    jet pipeline to rounding and degenerates to twice the symmetric value
    when R0 = R1, R0'' = R1''.
    """
    den = 8 * a * R0 * R1 * (L - a * R0) * (L - a * R1) * (L - a * (R0 + R1))
    for f in (L - a * R0, L - a * R1, L - a * (R0 + R1)):
        _guard_denominator(f, L)
    num = (a * L * R0 * R1 * ((L - a * R1) ** 2 * R0pp + (L - a * R0) ** 2 * R1pp)
           + (4 - 3 * a) * L * ((R0 + R1) * (L - a * R0) * (L - a * R1)
                                - a * (R0 - R1) ** 2 * (L - a * (R0 + R1)))
           + (2 * a * a - 9 * a + 6) * (R0 * R1 / a) * (2 * L - a * (R0 + R1)) ** 2)
    return num / den


def twist_asymmetric_closed(a: float, L: float, R0: float, R1: float,
                            R0pp: float, R1pp: float) -> tuple[float, bool]:
    """Alternative closed form of the two-step twist coefficient, kept for
    diagnostics. It disagrees with the jet pipeline and with
    twist_asymmetric_exact (a transcription defect is suspected in its
    source), so the returned flag is always True: do not use the value as
    an oracle. Evaluated verbatim, duplicated leading term included.
    """
    den = 8 * a * R0 * R1 * (L - a * R0) * (L - a * R1) * (L - a * (R0 + R1))
    for f in (L - a * R0, L - a * R1, L - a * (R0 + R1)):
        _guard_denominator(f, L)
    a2 = a * a
    line1 = 2 * a * R0 ** 2 * (-L * R1 * (a2 * L * R1pp + 4 * a2 - 18 * a + 12)
                               + a * (2 * a2 - 9 * a + 6) * R1 ** 2
                               + a * (3 * a - 4) * L ** 2)
    line3 = R0 * (L ** 2 * R1 * (a2 * L * R0pp + a2 * L * R1pp + 8 * a2 - 36 * a + 24)
                  - 2 * a * L * R1 ** 2 * (a2 * L * R0pp + 4 * a2 - 18 * a + 12)
                  + a2 * R1 ** 3 * (a2 * L * R0pp + 2 * a2 - 9 * a + 6)
                  + a * (4 - 3 * a) * L ** 3)
    line4 = a2 * R0 ** 3 * (R1 * (a2 * L * R1pp + 2 * a2 - 9 * a + 6)
                            + a * (4 - 3 * a) * L)
    line5 = -a * (3 * a - 4) * L * R1 * (L - a * R1) ** 2
    delta = line1 + line1 + line3 + line4 + line5
    return delta / den, True


def twist_euclidean_two_step(L: float, R0: float, R1: float,
                             R0pp: float, R1pp: float) -> float:
    """Euclidean (a = 1) two-step twist coefficient."""
    _guard_denominator(R0 + R1 - L, L)
    _guard_denominator(R0 - L, L)
    _guard_denominator(R1 - L, L)
    return ((R0 + R1) / (R0 * R1)
            - L / (R0 + R1 - L) * (((R1 - L) / (R0 - L)) * R0pp
                                   + ((R0 - L) / (R1 - L)) * R1pp)) / 8.0
