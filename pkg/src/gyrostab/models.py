"""System matrices for the rotating-saddle family of models.

Every model reduces to ``z'' + B z' + A z = 0`` with 2x2 real ``A`` and ``B``.
The ``*_matrices`` functions are vectorised (any broadcastable parameter
shapes, result ``(..., 2, 2)``) and are what the sweeps call; the ``build_*``
functions take a parameter record and return a :class:`SystemMatrices`.

For the helical quadrupole and the cholesteric crystal the evolution variable
is the axial distance ``z`` rather than time; the label records this.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spectral import J, SystemMatrices

_I = np.eye(2)


def _broadcast(*args):
    return np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in args))


def _mat(x):
    return np.asarray(x)[..., None, None]


@dataclass(frozen=True)
class BrouwerParams:
    """Curvature stiffnesses ``k = g / r`` (either sign) and rotation speed.

    The stability picture is symmetric in ``omega``; a negative speed is stored
    as ``|omega|`` and the substitution is recorded in ``notes``.
    """

    k1: float
    k2: float
    omega: float
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.k1, self.k2, self.omega)):
            raise ValueError("Brouwer parameters must be finite")
        if self.omega < 0:
            object.__setattr__(self, "omega", -self.omega)
            object.__setattr__(self, "notes", self.notes + ("omega mapped to |omega|",))

    @classmethod
    def from_radii(cls, g: float, r1: float, r2: float, omega: float) -> "BrouwerParams":
        return cls(g / r1, g / r2, omega)


@dataclass(frozen=True)
class ShiehMasurParams:
    k1: float
    k2: float
    omega: float
    delta1: float
    delta2: float
    nu: float

    @property
    def kappa(self) -> float:
        return self.k2 - self.k1


@dataclass(frozen=True)
class BottemaParams:
    """``delta`` is rotating (internal) damping, ``nu_ext`` stationary damping.

    ``nu_ext`` also scales the circulatory term ``nu * Omega * J``.
    """

    k1: float
    k2: float
    omega: float
    delta: float
    nu_ext: float

    def as_shieh_masur(self) -> ShiehMasurParams:
        d = self.delta + self.nu_ext
        return ShiehMasurParams(self.k1, self.k2, self.omega, d, d, self.nu_ext * self.omega)


@dataclass(frozen=True)
class HelicalQuadParams:
    """Focusing strength ``a``; or pass ``lambda_pitch`` and ``kSq`` to derive it."""

    a: float | None = None
    lambda_pitch: float | None = None
    kSq: float | None = None

    def __post_init__(self):
        if self.a is None:
            if self.lambda_pitch is None or self.kSq is None:
                raise ValueError("helical quadrupole needs a, or both lambda_pitch and kSq")
            object.__setattr__(self, "a", -self.lambda_pitch**2 * self.kSq / (16 * math.pi**2))


@dataclass(frozen=True)
class CholestericParams:
    alpha: float
    kSq: float
    eps11: float
    eps22: float


@dataclass(frozen=True)
class BenjaminFeirParams:
    alpha_nls: float
    gamma_nls: float
    k: float
    sigma: float
    u0: tuple[float, float]

    def __post_init__(self):
        if not (self.alpha_nls > 0 and self.gamma_nls > 0):
            raise ValueError("alpha_nls and gamma_nls must be positive")
        object.__setattr__(self, "u0", (float(self.u0[0]), float(self.u0[1])))

    @property
    def q(self) -> float:
        return self.sigma**2 * self.alpha_nls - self.gamma_nls * (self.u0[0]**2 + self.u0[1]**2)


# ---------------------------------------------------------------------------
# vectorised assembly


def brouwer_matrices(k1, k2, omega):
    k1, k2, omega = _broadcast(k1, k2, omega)
    a = np.zeros(k1.shape + (2, 2))
    a[..., 0, 0] = k1 - omega**2
    a[..., 1, 1] = k2 - omega**2
    b = 2 * _mat(omega) * J
    return a, b


def shieh_masur_matrices(k1, k2, omega, delta1, delta2, nu):
    k1, k2, omega, delta1, delta2, nu = _broadcast(k1, k2, omega, delta1, delta2, nu)
    a, b = brouwer_matrices(k1, k2, omega)
    a = a + _mat(nu) * J
    b = b.copy()
    b[..., 0, 0] += delta1
    b[..., 1, 1] += delta2
    return a, b


def bottema_matrices(k1, k2, omega, delta, nu):
    k1, k2, omega, delta, nu = _broadcast(k1, k2, omega, delta, nu)
    a, b = brouwer_matrices(k1, k2, omega)
    a = a + _mat(nu * omega) * J
    b = b + _mat(delta + nu) * _I
    return a, b


def helical_quad_matrices(a):
    a = np.asarray(a, dtype=float)
    return brouwer_matrices(-a, a, 0.5)


def cholesteric_matrices(alpha, kSq, eps11, eps22):
    alpha, kSq, eps11, eps22 = _broadcast(alpha, kSq, eps11, eps22)
    return brouwer_matrices(kSq * eps11, kSq * eps22, alpha)


def benjamin_feir_matrices(alpha, gamma, k, sigma, u1, u2):
    """Gyroscopic form ``v'' + (2qJ + 2 gamma D) v' + (P + (qJ)^2) v = 0``.

    ``D = u0 u0^T J - J u0 u0^T`` is symmetric, traceless, with eigenvalues
    ``+-|u0|^2``; ``P + (qJ)^2`` is a multiple of the identity.
    """
    alpha, gamma, k, sigma, u1, u2 = _broadcast(alpha, gamma, k, sigma, u1, u2)
    m = u1 * u1 + u2 * u2
    q = sigma**2 * alpha - gamma * m
    d = np.zeros(u1.shape + (2, 2))
    d[..., 0, 0] = 2 * u1 * u2
    d[..., 1, 1] = -2 * u1 * u2
    d[..., 0, 1] = u2 * u2 - u1 * u1
    d[..., 1, 0] = u2 * u2 - u1 * u1
    b = 2 * _mat(q) * J + 2 * _mat(gamma) * d
    stiff = 4 * alpha**2 * k**2 * sigma**2 + gamma**2 * m**2 - q**2
    a = _mat(stiff) * _I
    return a, b


def benjamin_feir_damping(u0) -> np.ndarray:
    """The indefinite damping matrix ``D`` for amplitude ``u0``."""
    u = np.asarray(u0, dtype=float).reshape(2, 1)
    uu = u @ u.T
    return uu @ J - J @ uu


# ---------------------------------------------------------------------------
# builders


def build_brouwer(p: BrouwerParams) -> SystemMatrices:
    return SystemMatrices(*brouwer_matrices(p.k1, p.k2, p.omega), label="brouwer (tau=t)")


def build_shieh_masur(p: ShiehMasurParams) -> SystemMatrices:
    a, b = shieh_masur_matrices(p.k1, p.k2, p.omega, p.delta1, p.delta2, p.nu)
    return SystemMatrices(a, b, label="shieh-masur (tau=t)")


def build_bottema(p: BottemaParams) -> SystemMatrices:
    a, b = bottema_matrices(p.k1, p.k2, p.omega, p.delta, p.nu_ext)
    return SystemMatrices(a, b, label="bottema (tau=t)")


def build_helical_quad(p: HelicalQuadParams) -> SystemMatrices:
    """Rotating-frame equations of the helical quadrupole: Brouwer with
    ``omega = 1/2``, ``k1 = -a``, ``k2 = a``."""
    a, b = helical_quad_matrices(p.a)
    return SystemMatrices(a, b, label="helical-quad (tau=z, frame rotating with the helix)")


def build_cholesteric(p: CholestericParams) -> SystemMatrices:
    """Polarisation in the frame co-rotating with the molecular planes.

    The sign of ``alpha`` (handedness) is kept, so for ``alpha < 0`` the result
    differs from ``build_brouwer``, which folds the speed onto ``|omega|``.
    """
    a, b = cholesteric_matrices(p.alpha, p.kSq, p.eps11, p.eps22)
    return SystemMatrices(a, b, label="cholesteric (tau=z, rotating frame, time-harmonic field)")


def build_benjamin_feir(p: BenjaminFeirParams) -> SystemMatrices:
    a, b = benjamin_feir_matrices(p.alpha_nls, p.gamma_nls, p.k, p.sigma, *p.u0)
    return SystemMatrices(a, b, label="benjamin-feir (tau=t, first harmonic)")


# ---------------------------------------------------------------------------
# frame transformations


def rotation(angle) -> np.ndarray:
    """``R(angle) = [[cos, -sin], [sin, cos]]``; stacks for array ``angle``."""
    angle = np.asarray(angle, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def corotating_transform(z_lab, angle) -> np.ndarray:
    """Laboratory coordinates to the frame turned by ``angle``: ``R(-angle) z``."""
    return np.einsum("...ij,...j->...i", rotation(-np.asarray(angle)), np.asarray(z_lab, float))


def corotating_inverse(z_rot, angle) -> np.ndarray:
    return np.einsum("...ij,...j->...i", rotation(angle), np.asarray(z_rot, float))


def lab_to_corotating_state(state, angle, rate) -> np.ndarray:
    """Map ``(x, y, x', y')`` to the rotating frame whose angle grows at ``rate``.

    ``v = R(-angle) x`` and ``v' = R(-angle) (x' - rate J x)``.
    """
    state = np.asarray(state, dtype=float)
    x, xd = state[..., :2], state[..., 2:]
    rate = np.asarray(rate, dtype=float)[..., None]
    v = corotating_transform(x, angle)
    vd = corotating_transform(xd - rate * (x @ J.T), angle)
    return np.concatenate([v, vd], axis=-1)


def corotating_to_lab_state(state, angle, rate) -> np.ndarray:
    state = np.asarray(state, dtype=float)
    v, vd = state[..., :2], state[..., 2:]
    rate = np.asarray(rate, dtype=float)[..., None]
    x = corotating_inverse(v, angle)
    xd = corotating_inverse(vd + rate * (v @ J.T), angle)
    return np.concatenate([x, xd], axis=-1)
