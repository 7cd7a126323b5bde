"""Characteristic quartics of ``z'' + B z' + A z = 0`` and classification of their spectra.

Two independent root paths are provided. :func:`quartic_roots_closed_form` is a
vectorised Ferrari/resolvent-cubic solver with a biquadratic fast path and is
what the sweeps use. :func:`quartic_roots_companion` takes eigenvalues of the
companion matrix and serves as the oracle.

Semisimplicity of axis eigenvalues is decided on the 4x4 first-order matrix
``[[0, I], [-A, -B]]``; the scalar quartic cannot tell a semisimple double root
from a Jordan block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from itertools import permutations

import numpy as np

EPS = np.finfo(float).eps

#: Skew-symmetric unit matrix used for gyroscopic and circulatory terms.
J = np.array([[0.0, -1.0], [1.0, 0.0]])

_PERMS = np.array(list(permutations(range(4))))
# involutions of {0,1,2,3}: identity, 6 transpositions, 3 double transpositions
_INVOLUTIONS = np.array([p for p in _PERMS if all(p[p[i]] == i for i in range(4))])


class Stability(IntEnum):
    """Verdict classes; the integer value is the code written to sweep files."""

    AsymptoticallyStable = 0
    MarginallyStable = 1
    DivergenceUnstable = 2
    FlutterUnstable = 3
    NonSemisimpleAxisUnstable = 4


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances, each multiplied by ``1 + spectral radius`` (rank: by ``||C||``)."""

    axis: float = 1e-8
    cluster: float = 1e-6
    rank: float = 1e-9
    borderline_factor: float = 10.0


DEFAULT_TOL = Tolerances()


@dataclass(frozen=True, eq=False)
class SystemMatrices:
    """Positional matrix ``a`` and velocity matrix ``b`` of a 2-DOF linear system."""

    a: np.ndarray
    b: np.ndarray
    label: str = ""

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.shape != (2, 2) or b.shape != (2, 2):
            raise ValueError(f"expected 2x2 matrices, got {a.shape} and {b.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("system matrices must be finite")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def a_sym(self) -> np.ndarray:
        return (self.a + self.a.T) / 2

    @property
    def a_skew(self) -> np.ndarray:
        return (self.a - self.a.T) / 2

    @property
    def b_sym(self) -> np.ndarray:
        return (self.b + self.b.T) / 2

    @property
    def b_skew(self) -> np.ndarray:
        return (self.b - self.b.T) / 2

    def first_order(self) -> np.ndarray:
        return first_order_matrix(self.a, self.b)


@dataclass(frozen=True)
class QuarticPoly:
    """Monic quartic ``l**4 + c3 l**3 + c2 l**2 + c1 l + c0``."""

    c3: float
    c2: float
    c1: float
    c0: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.coefficients)):
            raise ValueError("quartic coefficients must be finite")

    @property
    def coefficients(self) -> np.ndarray:
        """``(c3, c2, c1, c0)`` as an array."""
        return np.array([self.c3, self.c2, self.c1, self.c0], dtype=float)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        return (((lam + self.c3) * lam + self.c2) * lam + self.c1) * lam + self.c0


@dataclass(frozen=True)
class Cluster:
    center: complex
    indices: tuple[int, ...]
    algebraic: int
    geometric: int

    @property
    def semisimple(self) -> bool:
        return self.geometric == self.algebraic


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Four roots; ``clusters`` is empty for the bare polynomial solvers."""

    roots: np.ndarray
    clusters: tuple[Cluster, ...] = ()

    @property
    def max_real_part(self) -> float:
        return float(np.max(self.roots.real))


@dataclass(frozen=True, eq=False)
class StabilityVerdict:
    klass: Stability
    max_real_part: float
    diagnostics: dict[str, float] = field(default_factory=dict)
    spectrum: Spectrum | None = None

    @property
    def borderline(self) -> bool:
        return bool(self.diagnostics.get("borderline", 0.0))


# ---------------------------------------------------------------------------
# characteristic polynomial


def characteristic_coefficients(a, b) -> np.ndarray:
    """Leverrier-Barnett coefficients ``(tr B, tr A + det B, tr A tr B - tr AB, det A)``.

    ``a`` and ``b`` may be stacks of shape ``(..., 2, 2)``; the result has shape ``(..., 4)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    tr_a = a[..., 0, 0] + a[..., 1, 1]
    tr_b = b[..., 0, 0] + b[..., 1, 1]
    det_a = a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]
    det_b = b[..., 0, 0] * b[..., 1, 1] - b[..., 0, 1] * b[..., 1, 0]
    tr_ab = (a[..., 0, 0] * b[..., 0, 0] + a[..., 0, 1] * b[..., 1, 0]
             + a[..., 1, 0] * b[..., 0, 1] + a[..., 1, 1] * b[..., 1, 1])
    return np.stack([tr_b, tr_a + det_b, tr_a * tr_b - tr_ab, det_a], axis=-1)


def characteristic_poly(sys: SystemMatrices) -> QuarticPoly:
    c = characteristic_coefficients(sys.a, sys.b)
    return QuarticPoly(*(float(x) for x in c))


def first_order_matrix(a, b) -> np.ndarray:
    """State matrix ``[[0, I], [-A, -B]]`` for state ``(z, z')``; stacks allowed."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    shape = np.broadcast_shapes(a.shape, b.shape)[:-2]
    c = np.zeros(shape + (4, 4))
    c[..., 0, 2] = 1.0
    c[..., 1, 3] = 1.0
    c[..., 2:, :2] = -a
    c[..., 2:, 2:] = -b
    return c


def poly_eval(coeffs, lam) -> np.ndarray:
    """Evaluate monic quartics ``(..., 4)`` at roots ``(..., k)``."""
    c = np.asarray(coeffs, dtype=float)[..., None, :]
    lam = np.asarray(lam, dtype=complex)
    return (((lam + c[..., 0]) * lam + c[..., 1]) * lam + c[..., 2]) * lam + c[..., 3]


def _poly_deriv(coeffs, lam):
    c = np.asarray(coeffs, dtype=float)[..., None, :]
    return ((4 * lam + 3 * c[..., 0]) * lam + 2 * c[..., 1]) * lam + c[..., 2]


def residual_scale(coeffs, roots) -> np.ndarray:
    """``max(1, max|c_i|) * max(1, |r|)**4`` per root."""
    c = np.abs(np.asarray(coeffs, dtype=float)).max(axis=-1, keepdims=True)
    return np.maximum(1.0, c) * np.maximum(1.0, np.abs(roots)) ** 4


def root_set_scale(coeffs, roots) -> np.ndarray:
    """Scale of a whole root set: :func:`residual_scale` at the largest root."""
    return residual_scale(coeffs, roots).max(axis=-1)


def quartic_discriminant(coeffs) -> tuple[np.ndarray, np.ndarray]:
    """Discriminant of monic quartics and the sum of magnitudes of its terms.

    The ratio of the two is a scale-free measure of closeness to a multiple root.
    """
    c = np.asarray(coeffs, dtype=float)
    b, cc, d, e = c[..., 0], c[..., 1], c[..., 2], c[..., 3]
    terms = np.stack([
        256 * e**3, -192 * b * d * e**2, -128 * cc**2 * e**2, 144 * cc * d**2 * e,
        -27 * d**4, 144 * b**2 * cc * e**2, -6 * b**2 * d**2 * e, -80 * b * cc**2 * d * e,
        18 * b * cc * d**3, 16 * cc**4 * e, -4 * cc**3 * d**2, -27 * b**4 * e**2,
        18 * b**3 * cc * d * e, -4 * b**3 * d**3, -4 * b**2 * cc**3 * e, b**2 * cc**2 * d**2,
    ], axis=-1)
    return terms.sum(axis=-1), np.abs(terms).sum(axis=-1)


# ---------------------------------------------------------------------------
# root solvers


def _stable_quadratic(beta, gamma):
    """Roots of ``y**2 + beta y + gamma`` (complex arrays) without cancellation."""
    sd = np.sqrt(beta * beta - 4 * gamma)
    flip = (beta.real * sd.real + beta.imag * sd.imag) < 0
    sd = np.where(flip, -sd, sd)
    y1 = -(beta + sd) / 2
    safe = y1 != 0
    y2 = np.where(safe, gamma / np.where(safe, y1, 1.0), -(beta - sd) / 2)
    return y1, y2


def _cubic_roots(b, c, d):
    """All three roots of ``m**3 + b m**2 + c m + d`` (complex, Newton-polished)."""
    b = b.astype(complex)
    P = c - b * b / 3
    Q = 2 * b**3 / 27 - b * c / 3 + d
    sd = np.sqrt(Q * Q / 4 + P**3 / 27)
    u3p = -Q / 2 + sd
    u3m = -Q / 2 - sd
    u3 = np.where(np.abs(u3p) >= np.abs(u3m), u3p, u3m)
    u = u3 ** (1.0 / 3.0)
    w = np.exp(2j * np.pi / 3)
    zero = u == 0
    us = np.stack([u, u * w, u * w * w], axis=-1)
    safe_us = np.where(zero[..., None], 1.0, us)
    t = np.where(zero[..., None], 0.0, us - P[..., None] / (3 * safe_us))
    m = t - b[..., None] / 3
    bb, cc, dd = b[..., None], c[..., None], d[..., None]
    # a rejected step may overflow; the residual comparison discards it
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(2):
            f = ((m + bb) * m + cc) * m + dd
            df = (3 * m + 2 * bb) * m + cc
            step = np.where(df != 0, f / np.where(df != 0, df, 1.0), 0.0)
            cand = m - step
            fc = ((cand + bb) * cand + cc) * cand + dd
            m = np.where(np.abs(fc) < np.abs(f), cand, m)
    return m


def _newton_refine(coeffs, roots, steps):
    scale = residual_scale(coeffs, roots)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(steps):
            f = poly_eval(coeffs, roots)
            df = _poly_deriv(coeffs, roots)
            active = (np.abs(f) > 4 * EPS * scale) & (df != 0)
            cand = roots - np.where(active, f / np.where(df != 0, df, 1.0), 0.0)
            fc = poly_eval(coeffs, cand)
            roots = np.where(active & (np.abs(fc) < np.abs(f)), cand, roots)
    return roots


def _snap_multiple(coeffs, roots):
    # a cluster whose centroid is a root to working precision is a multiple root;
    # the centroid is far better conditioned than the individual members
    # candidate radius covers the eps**(1/4) spread of a quadruple root
    rho = np.abs(roots).max(axis=-1)
    labels, count, centers = _cluster(roots, 1e-3 * (1 + rho))
    res_c = np.abs(poly_eval(coeffs, centers))
    ok = (count >= 2) & (res_c <= 16 * EPS * residual_scale(coeffs, centers))
    return np.where(ok, centers, roots)


def polish_roots(coeffs, roots, newton_steps: int = 3) -> np.ndarray:
    """Guarded Newton steps, multiple-root snapping, then exact conjugate closure."""
    c = np.asarray(coeffs, dtype=float).reshape(-1, 4)
    r = np.asarray(roots, dtype=complex).reshape(-1, 4)
    r = _newton_refine(c, r, newton_steps)
    r = _snap_multiple(c, r)
    return conjugate_symmetrize(r).reshape(np.shape(roots))


def conjugate_symmetrize(roots) -> np.ndarray:
    """Snap a nearly conjugate-closed root set ``(..., 4)`` onto an exactly closed one.

    The best involutive pairing ``r_i <-> conj(r_j)`` is chosen per row; fixed
    points become real.
    """
    r = np.asarray(roots, dtype=complex)
    cost = np.abs(r[..., None, :] - np.conj(r[..., _INVOLUTIONS])).max(axis=-1)
    best = _INVOLUTIONS[np.argmin(cost, axis=-1)]
    partner = np.take_along_axis(r, best, axis=-1)
    return (r + np.conj(partner)) / 2


def _binary_scaling(c):
    """Exponents ``e`` with ``l = 2**e mu`` making the largest ``|c_k|**(1/k)`` of order one.

    Power-of-two scaling is exact, and it keeps the resolvent and the
    polishing thresholds away from overflow and underflow.
    """
    k = np.arange(1, 5)
    with np.errstate(divide="ignore"):
        size = np.max(np.abs(c) ** (1.0 / k), axis=-1)
    _, e = np.frexp(np.where(size > 0, size, 1.0))
    e = np.where(size > 0, e, 0)
    return np.ldexp(c, -e[:, None] * k), e


def _unscale(roots, e):
    return np.ldexp(roots.real, e[:, None]) + 1j * np.ldexp(roots.imag, e[:, None])


def quartic_roots_closed_form(coeffs, newton_steps: int = 3) -> np.ndarray:
    """Roots of monic quartics by depression and the resolvent cubic.

    ``coeffs`` has shape ``(..., 4)`` holding ``(c3, c2, c1, c0)``; returns ``(..., 4)``
    complex roots. When the depressed quartic has no linear term (at rounding
    level) the biquadratic formula is used instead of the resolvent. Roots are
    finished by :func:`polish_roots`.
    """
    c = np.asarray(coeffs, dtype=float)
    shape = c.shape[:-1]
    c, e = _binary_scaling(c.reshape(-1, 4))
    c3, c2, c1, c0 = c.T
    s = c3 / 4
    p = c2 - 6 * s * s
    q = c1 - 2 * c2 * s + 8 * s**3
    r = c0 - c1 * s + c2 * s * s - 3 * s**4
    q_noise = 16 * EPS * (np.abs(c1) + 2 * np.abs(c2 * s) + 8 * np.abs(s) ** 3)
    biq = np.abs(q) <= q_noise

    y = np.empty((c.shape[0], 4), dtype=complex)

    if np.any(biq):
        pb, rb = p[biq], r[biq]
        disc = pb * pb - 4 * rb
        # a negative discriminant within rounding of zero is a double root in y**2
        disc = np.where((disc < 0) & (-disc <= 8 * EPS * (pb * pb + 4 * np.abs(rb))), 0.0, disc)
        sq = np.sqrt(disc.astype(complex))
        real_disc = disc >= 0
        big = -(pb + np.copysign(1.0, pb) * np.sqrt(np.maximum(disc, 0.0))) / 2
        small = np.where(big != 0, rb / np.where(big != 0, big, 1.0), 0.0)
        w1 = np.where(real_disc, big + 0j, (-pb + sq) / 2)
        w2 = np.where(real_disc, small + 0j, (-pb - sq) / 2)
        y1, y2 = np.sqrt(w1), np.sqrt(w2)
        y[biq] = np.stack([y1, -y1, y2, -y2], axis=-1)

    fer = ~biq
    if np.any(fer):
        pf, qf, rf = p[fer], q[fer], r[fer]
        m = _cubic_roots(-pf / 2, -rf, pf * rf / 2 - qf * qf / 8)
        pick = np.argmax(np.abs(2 * m - pf[:, None]), axis=-1)
        m = np.take_along_axis(m, pick[:, None], axis=-1)[:, 0]
        S = np.sqrt(2 * m - pf)
        t = qf / (2 * S)
        ya, yb = _stable_quadratic(-S, m + t)
        yc, yd = _stable_quadratic(S, m - t)
        y[fer] = np.stack([ya, yb, yc, yd], axis=-1)

    roots = _unscale(polish_roots(c, y - s[:, None], newton_steps), e)
    return roots.reshape(shape + (4,))


def companion_matrix(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    m = np.zeros(c.shape[:-1] + (4, 4))
    m[..., 0, :] = -c
    m[..., 1, 0] = 1.0
    m[..., 2, 1] = 1.0
    m[..., 3, 2] = 1.0
    return m


def quartic_roots_companion(coeffs, newton_steps: int = 3) -> np.ndarray:
    """Roots as eigenvalues of the companion matrices (LAPACK QR with balancing),
    finished with the same polishing as the closed-form path."""
    c = np.asarray(coeffs, dtype=float)
    shape = c.shape[:-1]
    c, e = _binary_scaling(c.reshape(-1, 4))
    roots = _unscale(polish_roots(c, np.linalg.eigvals(companion_matrix(c)), newton_steps), e)
    return roots.reshape(shape + (4,))


def solve_quartic_closed_form(p: QuarticPoly) -> Spectrum:
    return Spectrum(roots=quartic_roots_closed_form(p.coefficients))


def solve_quartic_companion(p: QuarticPoly) -> Spectrum:
    return Spectrum(roots=quartic_roots_companion(p.coefficients))


def matching_distance(r, s) -> np.ndarray:
    """Bottleneck distance between root sets ``(..., 4)`` under optimal pairing."""
    r = np.asarray(r, dtype=complex)
    s = np.asarray(s, dtype=complex)
    d = np.abs(r[..., None, :] - s[..., _PERMS]).max(axis=-1)
    return d.min(axis=-1)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True, eq=False)
class BatchClassification:
    """Per-point results of :func:`classify_batch`; per-root arrays have shape ``(N, 4)``."""

    codes: np.ndarray
    max_real_part: np.ndarray
    eigenvalues: np.ndarray
    labels: np.ndarray
    centers: np.ndarray
    algebraic: np.ndarray
    geometric: np.ndarray
    tol_re: np.ndarray
    spectral_radius: np.ndarray
    borderline: np.ndarray


def _cluster(lam, radius):
    close = np.abs(lam[..., :, None] - lam[..., None, :]) <= radius[..., None, None]
    reach = close.astype(np.int64)
    for _ in range(2):
        reach = (reach @ reach > 0).astype(np.int64)
    reach = reach.astype(bool)
    labels = np.argmax(reach, axis=-1)
    count = reach.sum(axis=-1)
    centers = (reach * lam[..., None, :]).sum(axis=-1) / count
    return labels, count, centers


def classify_batch(a, b, tol: Tolerances = DEFAULT_TOL) -> BatchClassification:
    """Vectorised :func:`classify` over stacks ``a, b`` of shape ``(N, 2, 2)``."""
    c = first_order_matrix(a, b).reshape(-1, 4, 4)
    lam = np.linalg.eigvals(c)
    rho = np.abs(lam).max(axis=-1)
    tol_re = tol.axis * (1 + rho)
    radius = tol.cluster * (1 + rho)
    labels, alg, centers = _cluster(lam, radius)
    geom = np.minimum(alg, 1)
    borderline = np.zeros(len(lam), dtype=bool)

    idx = np.arange(4)
    rep = (labels == idx) & (alg >= 2)
    pts, roots = np.nonzero(rep)
    if len(pts):
        shift = c[pts] - centers[pts, roots][:, None, None] * np.eye(4)
        sv = np.linalg.svd(shift, compute_uv=False)
        norm_c = np.linalg.norm(c[pts], ord=2, axis=(1, 2))
        thresh = tol.rank * norm_c
        g = 4 - (sv > thresh[:, None]).sum(axis=-1)
        g = np.clip(g, 1, alg[pts, roots])
        on_axis = np.abs(centers[pts, roots].real) <= tol_re[pts]
        f = tol.borderline_factor
        near = ((sv > thresh[:, None] / f) & (sv < thresh[:, None] * f)).any(axis=-1)
        np.logical_or.at(borderline, pts, near & on_axis)
        gfull = np.zeros_like(alg)
        gfull[pts, roots] = g
        geom = np.where(alg >= 2, np.take_along_axis(gfull, labels, axis=-1), geom)

    max_re = lam.real.max(axis=-1)
    dom = np.argmax(lam.real, axis=-1)
    dom_im = np.abs(np.take_along_axis(lam, dom[:, None], axis=-1)[:, 0].imag)
    axis_root = np.abs(centers.real) <= tol_re[:, None]
    defective = (axis_root & (geom < alg)).any(axis=-1)

    codes = np.full(len(lam), int(Stability.MarginallyStable))
    codes[defective] = Stability.NonSemisimpleAxisUnstable
    codes[max_re < -tol_re] = Stability.AsymptoticallyStable
    unstable = max_re > tol_re
    codes[unstable & (dom_im <= radius)] = Stability.DivergenceUnstable
    codes[unstable & (dom_im > radius)] = Stability.FlutterUnstable
    borderline &= np.abs(max_re) <= tol_re
    return BatchClassification(codes, max_re, lam, labels, centers, alg, geom,
                               tol_re, rho, borderline)


def classify(sys: SystemMatrices, tol: Tolerances = DEFAULT_TOL) -> StabilityVerdict:
    """Spectral verdict for one system, with clusters and geometric multiplicities.

    Eigenvalues of the first-order matrix within ``tol.cluster * (1 + rho)`` of
    each other form a cluster; for clusters of algebraic multiplicity >= 2 the
    geometric multiplicity is ``4 - rank(C - center I)`` with a singular-value
    rank threshold ``tol.rank * ||C||``.
    """
    res = classify_batch(sys.a[None], sys.b[None], tol)
    lam = res.eigenvalues[0]
    clusters = []
    for lead in sorted(set(res.labels[0].tolist())):
        members = tuple(int(i) for i in np.nonzero(res.labels[0] == lead)[0])
        clusters.append(Cluster(center=complex(res.centers[0, lead]), indices=members,
                                algebraic=len(members), geometric=int(res.geometric[0, lead])))
    tol_re = float(res.tol_re[0])
    max_re = float(res.max_real_part[0])
    diagnostics = {
        "max_real_part": max_re,
        "tol_re": tol_re,
        "spectral_radius": float(res.spectral_radius[0]),
        "axis_band": tol_re - abs(max_re),
        "borderline": float(res.borderline[0]),
    }
    return StabilityVerdict(Stability(int(res.codes[0])), max_re, diagnostics,
                            Spectrum(roots=lam, clusters=tuple(clusters)))
