"""Closed-form stability criteria and degeneracy locations as signed margins.

Every criterion reports named margins that are positive when satisfied, so the
sweeps can contour their zero level sets directly. The ``*_margins`` functions
are vectorised and return dicts of arrays in a fixed key order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .models import BrouwerParams, ShiehMasurParams
from .spectral import SystemMatrices


class DomainError(ValueError):
    """A formula was called outside the parameter range where it holds."""


@dataclass(frozen=True)
class CriterionReport:
    name: str
    margins: dict[str, float]
    details: dict[str, float] | None = None

    @property
    def satisfied(self) -> bool:
        return min(self.margins.values()) > 0

    @property
    def min_margin(self) -> float:
        return min(self.margins.values())


def _report(name, margins, details=None):
    return CriterionReport(name, {k: float(v) for k, v in margins.items()},
                           None if details is None else {k: float(v) for k, v in details.items()})


# ---------------------------------------------------------------------------
# undamped rotating vessel


def brouwer_margins(k1, k2, omega) -> dict[str, np.ndarray]:
    """The three marginal-stability inequalities of the undamped rotating vessel."""
    k1, k2, omega = np.broadcast_arrays(*(np.asarray(x, float) for x in (k1, k2, omega)))
    w = omega**2
    return {
        "det": (k1 - w) * (k2 - w),
        "sum": k1 + k2 + 2 * w,
        "disc": (k1 - k2) ** 2 + 8 * w * (k1 + k2),
    }


def brouwer_marginal(p: BrouwerParams) -> CriterionReport:
    return _report("brouwer_marginal", brouwer_margins(p.k1, p.k2, p.omega))


def biquadratic_marginal_margins(coeffs) -> dict[str, np.ndarray]:
    """Pure-imaginary simple spectrum of ``l**4 + c2 l**2 + c0``: ``c0, c2, c2**2 - 4 c0 > 0``."""
    c = np.asarray(coeffs, dtype=float)
    c2, c0 = c[..., 1], c[..., 3]
    return {"c0": c0, "c2": c2, "disc": c2 * c2 - 4 * c0}


# ---------------------------------------------------------------------------
# damped rotor (Shieh-Masur form)


def lienard_chipart_margins(k1, k2, omega, delta1, delta2, nu) -> dict[str, np.ndarray]:
    """Lienard-Chipart conditions ``p1, p2, p4, H3 > 0`` written in the model parameters."""
    k1, k2, omega, delta1, delta2, nu = np.broadcast_arrays(
        *(np.asarray(x, float) for x in (k1, k2, omega, delta1, delta2, nu)))
    w = omega**2
    p1 = delta1 + delta2
    p2 = delta1 * delta2 + k1 + k2 + 2 * w
    p3 = k1 * delta2 + delta1 * k2 + 4 * omega * nu - (delta1 + delta2) * w
    p4 = (w - k1) * (w - k2) + nu**2
    h3 = p1 * p2 * p3 - p1 * p1 * p4 - p3 * p3
    return {"p1": p1, "p2": p2, "p4": p4, "h3": h3}


def lienard_chipart(p: ShiehMasurParams) -> CriterionReport:
    return _report("lienard_chipart",
                   lienard_chipart_margins(p.k1, p.k2, p.omega, p.delta1, p.delta2, p.nu))


def quartic_hurwitz_margins(coeffs) -> dict[str, np.ndarray]:
    """Lienard-Chipart margins ``a1, a2, a4, H3`` for a general monic quartic."""
    c = np.asarray(coeffs, dtype=float)
    a1, a2, a3, a4 = c[..., 0], c[..., 1], c[..., 2], c[..., 3]
    return {"a1": a1, "a2": a2, "a4": a4, "h3": a1 * a2 * a3 - a1 * a1 * a4 - a3 * a3}


def biquadratic_conditions(sys: SystemMatrices, rtol: float = 1e-12) -> CriterionReport:
    """Whether ``tr B = 0`` and ``tr AB = 0``, i.e. the quartic is even in the eigenvalue.

    Margins are ``rtol * (1 + |A| |B|) - |tr B|`` and likewise for ``tr AB``;
    the details carry the raw traces and the split into symmetric and skew parts.
    """
    a, b = sys.a, sys.b
    scale = 1.0 + np.linalg.norm(a) * np.linalg.norm(b)
    tr_b = np.trace(b)
    tr_ab = np.trace(a @ b)
    details = {
        "tr_b": tr_b,
        "tr_ab": tr_ab,
        "tr_b_sym": np.trace(sys.b_sym),
        "tr_sym_plus_skew": np.trace(sys.a_sym @ sys.b_sym) + np.trace(sys.a_skew @ sys.b_skew),
        "scale": scale,
    }
    margins = {"tr_b": rtol * scale - abs(tr_b), "tr_ab": rtol * scale - abs(tr_ab)}
    return _report("biquadratic_conditions", margins, details)


# ---------------------------------------------------------------------------
# special points of the damped rotor


@dataclass(frozen=True)
class ImaginaryWindow:
    """Where the spectrum on ``delta2 = -delta1, kappa = -4 omega nu / delta1`` is pure imaginary."""

    delta_d: float
    kappa_d: float
    intervals: tuple[tuple[float, float, bool, bool], ...]

    def contains(self, delta1) -> np.ndarray:
        d = np.asarray(delta1, dtype=float)
        inside = np.zeros(d.shape, dtype=bool)
        for lo, hi, lo_closed, hi_closed in self.intervals:
            left = d >= lo if lo_closed else d > lo
            right = d <= hi if hi_closed else d < hi
            inside |= left & right
        return inside


def _check_window_domain(k1, omega, nu):
    if not k1 > omega**2:
        raise DomainError(f"requires k1 > omega**2 (k1={k1}, omega**2={omega**2})")
    if not nu > 0:
        raise DomainError(f"requires nu > 0 (nu={nu})")


def double_zero_location(k1: float, omega: float, nu: float) -> tuple[float, float]:
    """``(delta_d, kappa_d)`` of the double zero eigenvalue on the biquadratic set."""
    w = k1 - omega**2
    delta_d = 4 * omega * nu * w / (nu**2 + w**2)
    kappa_d = -k1 + omega**2 - nu**2 / w
    return delta_d, kappa_d


def pure_imaginary_window(k1: float, omega: float, nu: float) -> ImaginaryWindow:
    """Intervals ``[-2 omega, 0)`` and ``(delta_d, 2 omega]`` of ``delta1``.

    Raises :class:`DomainError` unless ``k1 > omega**2`` and ``nu > 0``.
    """
    _check_window_domain(k1, omega, nu)
    delta_d, kappa_d = double_zero_location(k1, omega, nu)
    intervals = ((-2 * omega, 0.0, True, False),)
    if delta_d < 2 * omega:
        intervals += ((delta_d, 2 * omega, False, True),)
    return ImaginaryWindow(delta_d, kappa_d, intervals)


def biquadratic_kappa(omega, nu, delta1):
    """``kappa`` that makes the damped-rotor quartic even when ``delta2 = -delta1``."""
    return -4 * np.asarray(omega) * nu / np.asarray(delta1, dtype=float)


@dataclass(frozen=True)
class ExceptionalPoint:
    delta1: float
    delta2: float
    kappa: float
    eigenvalue: complex
    kind: str
    pure_imaginary: bool = True

    @property
    def location(self) -> tuple[float, float, float]:
        return (self.delta1, self.delta2, self.kappa)


def exceptional_points(k1: float, omega: float, nu: float) -> list[ExceptionalPoint]:
    """Double eigenvalues with a Jordan block on the biquadratic set.

    Returns the two EPs at ``delta1 = -+2 omega`` with eigenvalues
    ``i sqrt(k1 - omega**2 +- nu)`` (upper half-plane member), then the double
    zero point. An EP whose radicand is negative has a real eigenvalue pair and
    is returned with ``pure_imaginary=False``.
    """
    w = k1 - omega**2
    out = []
    for sign in (-1.0, 1.0):
        rad = w - sign * nu
        lam = complex(0.0, math.sqrt(rad)) if rad >= 0 else complex(math.sqrt(-rad), 0.0)
        out.append(ExceptionalPoint(sign * 2 * omega, -sign * 2 * omega, -sign * 2 * nu, lam,
                                    "EP_imaginary_pair", pure_imaginary=rad >= 0))
    if w != 0 and nu**2 + w**2 > 0:
        delta_d, kappa_d = double_zero_location(k1, omega, nu)
        out.append(ExceptionalPoint(delta_d, -delta_d, kappa_d, 0j, "DoubleZero"))
    return out


# ---------------------------------------------------------------------------
# constrained and detuned rotors


def rankine_threshold(k1: float, omega: float) -> CriterionReport:
    """Guide-rail constrained rotor ``x'' + (k1 - omega**2) x = 0``; details carry the growth rate."""
    margin = k1 - omega**2
    return _report("rankine_threshold", {"stiffness": margin},
                   {"growth_rate": math.sqrt(-margin) if margin < 0 else 0.0})


def bubble_interval(epsilon: float) -> tuple[float, float]:
    """Unstable speed range of the rotor with ``k1 = 1 + eps``, ``k2 = 1 - eps``."""
    if not 0 <= epsilon < 1:
        raise DomainError(f"requires 0 <= epsilon < 1 (epsilon={epsilon})")
    return math.sqrt(1 - epsilon), math.sqrt(1 + epsilon)


def band_mask(margins: dict[str, np.ndarray], width: float = 1e-6) -> np.ndarray:
    """Points where some margin is within ``width`` of zero."""
    return np.min(np.abs(np.stack(list(margins.values()), axis=-1)), axis=-1) < width


def stacked_min(margins: dict[str, np.ndarray]) -> np.ndarray:
    return np.min(np.stack(list(margins.values()), axis=-1), axis=-1)

