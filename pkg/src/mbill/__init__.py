"""Minkowski-plane billiards: dynamics, tangent maps, and twist coefficients.

The package simulates billiards whose reflection law comes from a Minkowski
norm (the mixed family a*|v|_2 + b*|v|_4), computes the billiard map in
generating-function coordinates (s, u), propagates truncated Taylor jets
through one bounce, and extracts the first Birkhoff twist coefficient of
straight period-2 orbits, cross-validated against closed forms.
"""

from . import closedforms, dynamics, geometry, jets, normalform, norms
from .geometry import (build_table, make_circle, make_ellipse, make_lemon,
                       make_polynomial_table)
from .norms import EUCLIDEAN, MixedNorm, mixed_norm

__all__ = [
    "norms", "geometry", "dynamics", "jets", "normalform", "closedforms",
    "MixedNorm", "mixed_norm", "EUCLIDEAN",
    "build_table", "make_lemon", "make_circle", "make_ellipse",
    "make_polynomial_table",
]

__version__ = "0.1.0"
