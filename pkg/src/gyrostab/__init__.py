"""Stability of rotating-saddle systems ``z'' + B z' + A z = 0`` and their relatives."""
from .spectral import (DEFAULT_TOL, Stability, StabilityVerdict, SystemMatrices, Tolerances,
                       characteristic_poly, classify, solve_quartic_closed_form,
                       solve_quartic_companion)

__version__ = "0.1.0"
