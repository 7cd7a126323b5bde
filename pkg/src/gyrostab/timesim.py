"""Time (or axial-distance) integration, growth-rate measurement and frame checks.

Autonomous systems are stepped with the exact propagator ``expm(C dt)``. The
lab-frame forms of the helical quadrupole and the cholesteric crystal are
z-periodic and are integrated with classical RK4 plus a step-halving check.
Default initial condition throughout: unit position, zero velocity.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .models import CholestericParams, HelicalQuadParams, rotation
from .spectral import SystemMatrices

DEFAULT_X0 = (1.0, 0.0, 0.0, 0.0)
# norms beyond this are treated as blow-up so later arithmetic stays finite
_OVERFLOW = 1e280


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    label: str
    frame: str
    overflow: bool = False
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.frame not in ("lab", "corotating"):
            raise ValueError(f"frame must be 'lab' or 'corotating', got {self.frame!r}")
        if len(self.times) < 2 or self.states.shape != (len(self.times), 4):
            raise ValueError("a trajectory needs >= 2 samples of 4-vectors")
        if not np.all(np.isfinite(self.states)):
            raise ValueError("trajectory states must be finite")

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)


@dataclass(frozen=True)
class GrowthEstimate:
    """Slope of ``log |x|`` over ``window``.

    ``no_dominant_growth`` flags fits whose trend over the window is below one
    e-fold or is swamped by oscillation. ``power_exponent`` and
    ``power_residual`` come from the same fit against ``log t``; polynomial
    growth shows up as ``power_residual`` far below ``fit_residual``.
    """

    rate: float
    fit_residual: float
    window: tuple[float, float]
    no_dominant_growth: bool
    power_exponent: float
    power_residual: float


def _steps(t_end: float, dt: float) -> int:
    if not dt > 0:
        raise ValueError("dt must be positive")
    if not t_end >= dt:
        raise ValueError("t_end must be at least dt")
    return int(round(t_end / dt))


def _propagate(steps: np.ndarray, x0: np.ndarray):
    """Apply step matrices ``steps[k]`` in turn; stops at overflow."""
    out = np.empty((len(steps) + 1, len(x0)))
    out[0] = x0
    x = x0
    for k, m in enumerate(steps, start=1):
        x = m @ x
        if not (np.all(np.isfinite(x)) and np.linalg.norm(x) < _OVERFLOW):
            return out[:k], True
        out[k] = x
    return out, False


def _as_x0(x0, size=4) -> np.ndarray:
    x0 = np.asarray(DEFAULT_X0[:size] if x0 is None else x0, dtype=float)
    if x0.shape != (size,) or not np.all(np.isfinite(x0)):
        raise ValueError(f"x0 must be {size} finite numbers")
    return x0


def propagator(sys: SystemMatrices, dt: float) -> np.ndarray:
    return expm(sys.first_order() * dt)


def integrate_autonomous(sys: SystemMatrices, x0=None, t_end: float = 20.0,
                         dt: float = 0.01) -> Trajectory:
    """Exact stepping of the first-order form; truncates at blow-up with ``overflow=True``."""
    n = _steps(t_end, dt)
    states, overflow = _propagate(np.broadcast_to(propagator(sys, dt), (n, 4, 4)), _as_x0(x0))
    times = dt * np.arange(len(states))
    if len(states) < 2:
        raise FloatingPointError("trajectory overflowed on the first step")
    return Trajectory(times, states, sys.label, "corotating", overflow, {"dt": dt})


def integrate_rankine(k1: float, omega: float, x0=None, t_end: float = 20.0,
                      dt: float = 0.01) -> Trajectory:
    """Guide-rail constrained mode ``x'' + (k1 - omega**2) x = 0``.

    ``x0`` is ``(x, x')``; states are stored as ``(x, 0, x', 0)``.
    """
    x0 = np.asarray((1.0, 0.0) if x0 is None else x0, dtype=float)
    if x0.shape != (2,):
        raise ValueError("x0 must be (x, x') for the constrained mode")
    n = _steps(t_end, dt)
    c = np.array([[0.0, 1.0], [omega**2 - k1, 0.0]])
    states, overflow = _propagate(np.broadcast_to(expm(c * dt), (n, 2, 2)), x0)
    full = np.zeros((len(states), 4))
    full[:, 0], full[:, 2] = states[:, 0], states[:, 1]
    return Trajectory(dt * np.arange(len(states)), full, "rankine (1-DOF, tau=t)", "corotating",
                      overflow, {"dt": dt})


# ---------------------------------------------------------------------------
# lab-frame z-periodic systems


def _rk4(force, x0: np.ndarray, n: int, h: float, stride: int):
    """RK4 for ``x'' = force(z) x``; keeps every ``stride``-th sample.

    The system is linear, so each RK4 step is a 4x4 matrix. Step matrices are
    built in one batch, multiplied together within each output interval and
    then applied to the state.
    """
    z = h * np.arange(n)
    eye = np.eye(4)

    def block(zz):
        a = np.zeros(zz.shape + (4, 4))
        a[..., 0, 2] = a[..., 1, 3] = 1.0
        a[..., 2:, :2] = force(zz)
        return a

    a0, ah, a1 = block(z), block(z + h / 2), block(z + h)
    k1 = a0
    k2 = ah @ (eye + h / 2 * k1)
    k3 = ah @ (eye + h / 2 * k2)
    k4 = a1 @ (eye + h * k3)
    steps = (eye + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)).reshape(n // stride, stride, 4, 4)
    while steps.shape[1] > 1:
        steps = steps[:, 1::2] @ steps[:, 0::2]
    return _propagate(steps[:, 0], x0)


def _converged_rk4(force, x0, z_end, dz, rtol=1e-10, max_halvings=8):
    """Refine the internal step until halving it moves the samples by < rtol relative (sup-norm).

    Samples are returned on the requested ``dz`` grid.
    """
    n = _steps(z_end, dz)
    prev = None
    for m in range(max_halvings + 1):
        sub = 2**m
        states, overflow = _rk4(force, x0, n * sub, dz / sub, sub)
        if overflow:
            return states, True, dz / sub, np.nan
        if prev is not None:
            change = np.abs(states - prev).max() / max(np.abs(states).max(), 1e-300)
            if change < rtol:
                return states, False, dz / sub, change
        prev = states
    return states, False, dz / sub, change


def helical_quad_force(a: float):
    """Lab-frame focusing matrix of the helical quadrupole at distance ``z``."""
    def force(z):
        c, s = np.cos(z), np.sin(z)
        return a * np.stack([np.stack([c, s], -1), np.stack([s, -c], -1)], -2)
    return force


def integrate_nonautonomous_quad(p: HelicalQuadParams, x0=None, z_end: float = 20.0,
                                 dz: float = 0.01) -> Trajectory:
    states, overflow, h, change = _converged_rk4(helical_quad_force(p.a), _as_x0(x0), z_end, dz)
    return Trajectory(dz * np.arange(len(states)), states, "helical-quad lab frame (tau=z)", "lab",
                      overflow, {"internal_step": h, "halving_change": change})


def cholesteric_force(p: CholestericParams):
    """``-k**2 eps(z)`` with ``eps(z) = R(alpha z) K R(-alpha z)``."""
    kmat = np.diag([p.eps11, p.eps22])

    def force(z):
        r = rotation(p.alpha * np.asarray(z, dtype=float))
        return -p.kSq * (r @ kmat @ np.swapaxes(r, -1, -2))
    return force


def integrate_cholesteric_lab(p: CholestericParams, x0=None, z_end: float = 20.0,
                              dz: float = 0.01) -> Trajectory:
    states, overflow, h, change = _converged_rk4(cholesteric_force(p), _as_x0(x0), z_end, dz)
    label = "cholesteric lab frame (tau=z, time-harmonic reduction F'' = -k^2 eps(z) F)"
    return Trajectory(dz * np.arange(len(states)), states, label, "lab", overflow,
                      {"internal_step": h, "halving_change": change})


# ---------------------------------------------------------------------------
# growth rates


def measure_growth_rate(traj: Trajectory, fraction: float = 0.5) -> GrowthEstimate:
    """Least-squares slope of ``log |x(t)|`` over the trailing ``fraction`` of the samples."""
    if len(traj.times) < 100:
        raise ValueError("growth-rate fits need at least 100 samples")
    start = int(len(traj.times) * (1 - fraction))
    t = traj.times[start:]
    y = np.log(traj.norms[start:])
    if not np.all(np.isfinite(y)):
        raise FloatingPointError("zero state norm in the fit window")
    coef, res = _line_fit(t, y)
    trend = abs(coef[0]) * (t[-1] - t[0])
    if t[0] > 0:
        pcoef, pres = _line_fit(np.log(t), y)
    else:
        pcoef, pres = (np.nan, np.nan), np.nan
    flagged = trend < 1.0 or res > 0.1 * trend
    return GrowthEstimate(float(coef[0]), res, (float(t[0]), float(t[-1])), bool(flagged),
                          float(pcoef[0]), pres)


def _line_fit(x, y):
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    return coef, float(np.sqrt(np.mean(resid**2)))
