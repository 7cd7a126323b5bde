"""Parameter sweeps, boundary contours and the eigenvalue surfaces of the models.

Sweeps evaluate the spectral verdict and every applicable criterion margin on
a rectilinear grid. Results are stored row-major in the declared axis order.
Boundaries are contoured from the closed-form margins, which stay smooth
through a stability boundary where spectral real parts have square-root
branches; 3-D surfaces are handled as stacks of 2-D slices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import criteria, models
from .contours import marching_squares
from .spectral import (DEFAULT_TOL, Tolerances, characteristic_coefficients, classify_batch,
                       quartic_roots_closed_form)


class ConfigError(ValueError):
    """Unknown model, unknown or missing parameter, or an invalid grid."""


# ---------------------------------------------------------------------------
# model registry


def _brouwer_eval(p):
    omega = np.abs(p["omega"])
    a, b = models.brouwer_matrices(p["k1"], p["k2"], omega)
    return a, b, criteria.brouwer_margins(p["k1"], p["k2"], omega)


def _shieh_masur_eval(p):
    k2 = p["k2"] if "k2" in p else p["k1"] + p["kappa"]
    args = (p["k1"], k2, p["omega"], p["delta1"], p["delta2"], p["nu"])
    a, b = models.shieh_masur_matrices(*args)
    return a, b, criteria.lienard_chipart_margins(*args)


def _bottema_eval(p):
    a, b = models.bottema_matrices(p["k1"], p["k2"], p["omega"], p["delta"], p["nu"])
    d = p["delta"] + p["nu"]
    m = criteria.lienard_chipart_margins(p["k1"], p["k2"], p["omega"], d, d, p["nu"] * p["omega"])
    return a, b, m


def _helical_eval(p):
    a = p["a"] if "a" in p else -p["lambda_pitch"] ** 2 * p["kSq"] / (16 * np.pi**2)
    am, bm = models.helical_quad_matrices(a)
    return am, bm, criteria.brouwer_margins(-np.asarray(a), a, 0.5)


def _cholesteric_eval(p):
    a, b = models.cholesteric_matrices(p["alpha"], p["kSq"], p["eps11"], p["eps22"])
    m = criteria.brouwer_margins(p["kSq"] * p["eps11"], p["kSq"] * p["eps22"], p["alpha"])
    return a, b, m


def _bf_eval(p):
    a, b = models.benjamin_feir_matrices(p["alpha"], p["gamma"], p["k"], p["sigma"],
                                         p["u1"], p["u2"])
    return a, b, criteria.biquadratic_marginal_margins(characteristic_coefficients(a, b))


@dataclass(frozen=True)
class ModelSpec:
    name: str
    required: tuple[tuple[str, ...], ...]
    evaluate: Callable
    margin_names: tuple[str, ...]
    # "marginal" models cannot be asymptotically stable; "damped" use Lienard-Chipart
    kind: str

    @property
    def parameter_names(self) -> tuple[str, ...]:
        return tuple(n for group in self.required for n in group)

    def resolve(self, params: dict) -> dict:
        """Check names and fill nothing in; every required group needs exactly one member."""
        known = set(self.parameter_names)
        unknown = sorted(set(params) - known)
        if unknown:
            raise ConfigError(f"unknown parameter(s) {unknown} for model {self.name!r}; "
                              f"valid names: {sorted(known)}")
        for group in self.required:
            given = [n for n in group if n in params]
            if len(given) != 1:
                what = group[0] if len(group) == 1 else " or ".join(group)
                raise ConfigError(f"model {self.name!r} needs {what}")
        return params


MODELS: dict[str, ModelSpec] = {
    "brouwer": ModelSpec("brouwer", (("k1",), ("k2",), ("omega",)), _brouwer_eval,
                         ("det", "sum", "disc"), "marginal"),
    "bottema": ModelSpec("bottema", (("k1",), ("k2",), ("omega",), ("delta",), ("nu",)),
                         _bottema_eval, ("p1", "p2", "p4", "h3"), "damped"),
    "shieh-masur": ModelSpec("shieh-masur", (("k1",), ("k2", "kappa"), ("omega",), ("delta1",),
                                             ("delta2",), ("nu",)),
                             _shieh_masur_eval, ("p1", "p2", "p4", "h3"), "damped"),
    "helical-quad": ModelSpec("helical-quad", (("a", "lambda_pitch"),), _helical_eval,
                              ("det", "sum", "disc"), "marginal"),
    "cholesteric": ModelSpec("cholesteric", (("alpha",), ("kSq",), ("eps11",), ("eps22",)),
                             _cholesteric_eval, ("det", "sum", "disc"), "marginal"),
    "benjamin-feir": ModelSpec("benjamin-feir", (("alpha",), ("gamma",), ("k",), ("sigma",),
                                                 ("u1",), ("u2",)),
                               _bf_eval, ("c0", "c2", "disc"), "marginal"),
}

# lambda_pitch comes with kSq for the helical quadrupole
_EXTRA = {"helical-quad": ("kSq",)}


def get_model(name: str) -> ModelSpec:
    try:
        return MODELS[name]
    except KeyError:
        raise ConfigError(f"unknown model {name!r}; valid models: {sorted(MODELS)}") from None


def model_system(name: str, params: dict):
    """``(a, b, margins)`` for one model at (broadcastable) parameter values."""
    spec = get_model(name)
    params = dict(params)
    extra = {k: params.pop(k) for k in _EXTRA.get(name, ()) if k in params}
    spec.resolve(params)
    if name == "helical-quad" and "lambda_pitch" in params and "kSq" not in extra:
        raise ConfigError("model 'helical-quad' needs kSq together with lambda_pitch")
    params.update(extra)
    arrays = {k: np.asarray(v, dtype=float) for k, v in params.items()}
    return spec.evaluate(arrays)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class GridAxis:
    name: str
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ConfigError(f"axis {self.name!r}: count must be >= 2")
        if not self.min < self.max:
            raise ConfigError(f"axis {self.name!r}: min must be < max")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)


@dataclass(frozen=True)
class GridSpec:
    model: str
    axes: tuple[GridAxis, ...]
    fixed: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if not 1 <= len(self.axes) <= 3:
            raise ConfigError("a sweep needs between 1 and 3 axes")
        names = [ax.name for ax in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate sweep axis")
        clash = set(names) & set(self.fixed)
        if clash:
            raise ConfigError(f"parameter(s) {sorted(clash)} both swept and fixed")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(ax.count for ax in self.axes)


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Flat row-major channels over the grid; ``codes`` holds :class:`Stability` values."""

    spec: GridSpec
    codes: np.ndarray
    channels: dict[str, np.ndarray]

    @property
    def shape(self):
        return self.spec.shape

    def grid(self, channel: str) -> np.ndarray:
        if channel == "verdict":
            return self.codes.reshape(self.shape)
        return self.channels[channel].reshape(self.shape)

    def coordinates(self) -> np.ndarray:
        """``(N, n_axes)`` coordinates of every point in storage order."""
        mesh = np.meshgrid(*(ax.values for ax in self.spec.axes), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def _grid_params(spec: GridSpec, coords: np.ndarray) -> dict:
    params = {k: np.full(len(coords), float(v)) for k, v in spec.fixed.items()}
    for n, ax in enumerate(spec.axes):
        params[ax.name] = coords[:, n]
    return params


def evaluate_points(model: str, params: dict, tol: Tolerances = DEFAULT_TOL,
                    chunk: int = 200_000):
    """Verdict codes and channels at flat parameter arrays, in input order."""
    a, b, margins = model_system(model, params)
    a = a.reshape(-1, 2, 2)
    b = b.reshape(-1, 2, 2)
    n = len(a)
    codes = np.empty(n, dtype=np.int64)
    max_re = np.empty(n)
    for s in range(0, n, chunk):
        res = classify_batch(a[s:s + chunk], b[s:s + chunk], tol)
        codes[s:s + chunk] = res.codes
        max_re[s:s + chunk] = res.max_real_part
    channels = {"max_real_part": max_re}
    for k, v in margins.items():
        channels[k] = np.broadcast_to(v, (n,)).astype(float)
    channels["stability"] = criteria.stacked_min({k: channels[k] for k in margins})
    return codes, channels


def sweep(spec: GridSpec, tol: Tolerances = DEFAULT_TOL) -> SweepResult:
    """Evaluate verdicts and criterion margins at every grid point.

    Channels are ``max_real_part``, the model's margins and ``stability`` (their
    minimum, whose zero set is the stability boundary).
    """
    get_model(spec.model)
    mesh = np.meshgrid(*(ax.values for ax in spec.axes), indexing="ij")
    coords = np.stack([m.ravel() for m in mesh], axis=-1)
    codes, channels = evaluate_points(spec.model, _grid_params(spec, coords), tol)
    return SweepResult(spec, codes, channels)


# ---------------------------------------------------------------------------
# contours


@dataclass(frozen=True, eq=False)
class Polyline:
    channel: str
    points: np.ndarray

    @property
    def closed(self) -> bool:
        return len(self.points) > 2 and np.array_equal(self.points[0], self.points[-1])


@dataclass(frozen=True, eq=False)
class ContourSet:
    axes: tuple[str, str]
    polylines: list[Polyline]

    def for_channel(self, channel: str) -> list[Polyline]:
        return [p for p in self.polylines if p.channel == channel]

    def vertices(self, channel: str | None = None) -> np.ndarray:
        pts = [p.points for p in self.polylines if channel is None or p.channel == channel]
        return np.concatenate(pts) if pts else np.empty((0, 2))

    def distance_to(self, point, channel: str | None = None) -> float:
        """Distance from ``point`` to the nearest contour segment."""
        best = np.inf
        q = np.asarray(point, dtype=float)
        for p in self.polylines:
            if channel is not None and p.channel != channel:
                continue
            a, b = p.points[:-1], p.points[1:]
            if len(a) == 0:
                best = min(best, float(np.linalg.norm(p.points[0] - q)))
                continue
            d = b - a
            t = np.clip(((q - a) * d).sum(1) / np.maximum((d * d).sum(1), 1e-300), 0, 1)
            best = min(best, float(np.min(np.linalg.norm(a + t[:, None] * d - q, axis=1))))
        return best


def extract_contours(result: SweepResult, channel: str) -> ContourSet:
    """Zero level set of a channel of a 2-D sweep.

    Saddle cells are resolved by evaluating the model's margin at the cell
    centre; for ``max_real_part`` the spectral value at the centre is used.
    """
    spec = result.spec
    if len(spec.axes) != 2:
        raise ConfigError("contours need a 2-D sweep")
    if channel not in result.channels:
        raise ConfigError(f"unknown channel {channel!r}; available: {sorted(result.channels)}")
    f = result.grid(channel)
    x, y = spec.axes[0].values, spec.axes[1].values
    above = f > 0
    mixed = above[:-1, :-1] ^ above[1:, 1:]
    mixed &= above[1:, :-1] ^ above[:-1, 1:]
    mixed &= above[:-1, :-1] ^ above[1:, :-1]
    centers = None
    if np.any(mixed):
        ii, jj = np.nonzero(mixed)
        cx = (x[ii] + x[ii + 1]) / 2
        cy = (y[jj] + y[jj + 1]) / 2
        pts = _grid_params(spec, np.stack([cx, cy], axis=-1))
        _, ch = evaluate_points(spec.model, pts)
        centers = np.zeros((len(x) - 1, len(y) - 1))
        centers[ii, jj] = ch[channel]
        plain = ~mixed
        corner_mean = (f[:-1, :-1] + f[1:, :-1] + f[1:, 1:] + f[:-1, 1:]) / 4
        centers[plain] = corner_mean[plain]
    lines = marching_squares(x, y, f, 0.0, centers)
    return ContourSet((spec.axes[0].name, spec.axes[1].name),
                      [Polyline(channel, pts) for pts in lines])


def stability_boundary(result: SweepResult, rtol: float = 1e-9) -> ContourSet:
    """Pieces of every margin's zero set along which all other margins are non-negative.

    Unlike the contour of the ``stability`` channel this follows the boundary
    into cusps narrower than a grid cell. Each vertex is re-evaluated through
    the model's margin functions.
    """
    spec = result.spec
    if len(spec.axes) != 2:
        raise ConfigError("contours need a 2-D sweep")
    names = get_model(spec.model).margin_names
    tol = {n: rtol * (1 + float(np.max(np.abs(result.channels[n])))) for n in names}
    pieces = []
    for name in names:
        for line in extract_contours(result, name).polylines:
            _, _, m = model_system(spec.model, _grid_params(spec, line.points))
            keep = np.ones(len(line.points), dtype=bool)
            for other in names:
                if other != name:
                    keep &= np.broadcast_to(m[other], keep.shape) >= -tol[other]
            # split into runs of kept vertices
            idx = np.flatnonzero(keep)
            if len(idx) == 0:
                continue
            breaks = np.flatnonzero(np.diff(idx) > 1) + 1
            for run in np.split(idx, breaks):
                pieces.append(Polyline(name, line.points[run]))
    return ContourSet((spec.axes[0].name, spec.axes[1].name), pieces)


# ---------------------------------------------------------------------------
# undamped vessel geometry


def brouwer_cusps(omega: float) -> list[tuple[float, float]]:
    """Corners ``A``, ``B`` (cusps) and ``C`` (transversal crossing) in the ``(k1, k2)`` plane."""
    w = omega * omega
    return [(w, -3 * w), (-3 * w, w), (w, w)]


def triangle_area(omega: float, count: int = 801) -> float:
    """Area of the high-speed stability region ``{k1, k2 < omega**2}`` by cell-centre counting.

    The box scales with ``omega**2``; the region closes up at the origin.
    """
    w = omega * omega
    if w == 0:
        return 0.0
    lo, hi = -3.25 * w, 1.0 * w
    edges = np.linspace(lo, hi, count + 1)
    c = (edges[:-1] + edges[1:]) / 2
    k1, k2 = np.meshgrid(c, c, indexing="ij")
    m = criteria.brouwer_margins(k1, k2, omega)
    inside = (criteria.stacked_min(m) > 0) & (k1 < w) & (k2 < w)
    return float(inside.sum() * (edges[1] - edges[0]) ** 2)


# ---------------------------------------------------------------------------
# detuned rotor (k1 = 1 + eps, k2 = 1 - eps)


def whirl_frequency_residual(im_lambda, omega, epsilon, form: str = "printed"):
    """Residual of the whirl-frequency surface.

    ``form="printed"``: ``((Im l)**2 - 1 - O**2)**2 - 4 O**2 - eps**2``;
    ``form="scaled"``: the same with ``4 O**2 (Im l)**2``.
    """
    w2 = np.asarray(im_lambda, dtype=float) ** 2
    o2 = np.asarray(omega, dtype=float) ** 2
    cross = 4 * o2 if form == "printed" else 4 * o2 * w2
    return (w2 - 1 - o2) ** 2 - cross - np.asarray(epsilon, dtype=float) ** 2


def growth_rate_residual(re_lambda, omega, epsilon, form: str = "printed"):
    """Residual of the growth-rate surface; forms as for :func:`whirl_frequency_residual`."""
    s2 = np.asarray(re_lambda, dtype=float) ** 2
    o2 = np.asarray(omega, dtype=float) ** 2
    cross = 4 * o2 if form == "printed" else 4 * o2 * s2
    return (s2 + 1 + o2) ** 2 - cross - np.asarray(epsilon, dtype=float) ** 2


def detuned_rotor_roots(omega, epsilon) -> np.ndarray:
    omega, epsilon = np.broadcast_arrays(np.asarray(omega, float), np.asarray(epsilon, float))
    a, b = models.brouwer_matrices(1 + epsilon, 1 - epsilon, omega)
    return quartic_roots_closed_form(characteristic_coefficients(a, b))


def certify_surface_forms(omega, epsilon, atol: float = 1e-9) -> dict[str, float]:
    """Worst residual of each surface form at computed eigenvalues.

    Pure-imaginary roots are tested against the whirl surface, real roots
    against the growth-rate surface. A form is certified when its worst
    residual is at most ``atol``.
    """
    roots = detuned_rotor_roots(omega, epsilon)
    o = np.broadcast_to(np.asarray(omega, float), roots.shape[:-1])[..., None]
    e = np.broadcast_to(np.asarray(epsilon, float), roots.shape[:-1])[..., None]
    o, e = np.broadcast_to(o, roots.shape), np.broadcast_to(e, roots.shape)
    tiny = 1e-12 * (1 + np.abs(roots))
    imag = np.abs(roots.real) <= tiny
    real = (np.abs(roots.imag) <= tiny) & ~imag
    out = {}
    for form in ("printed", "scaled"):
        wr = whirl_frequency_residual(roots.imag[imag], o[imag], e[imag], form)
        gr = growth_rate_residual(roots.real[real], o[real], e[real], form)
        out[f"whirl_{form}"] = float(np.max(np.abs(wr), initial=0.0))
        out[f"growth_{form}"] = float(np.max(np.abs(gr), initial=0.0))
    out["unclassified_roots"] = float((~imag & ~real).sum())
    out["certified_whirl"] = "printed" if out["whirl_printed"] <= atol else (
        "scaled" if out["whirl_scaled"] <= atol else "none")
    out["certified_growth"] = "printed" if out["growth_printed"] <= atol else (
        "scaled" if out["growth_scaled"] <= atol else "none")
    return out


# ---------------------------------------------------------------------------
# damped rotor: viaduct slices and the pure-imaginary handles


def viaduct_slice(kappa: float, k1: float, omega: float, nu: float,
                  box=((-0.1, 0.1), (-0.1, 0.1)), counts=(201, 201)):
    """Slice of the damped-rotor stability domain at fixed ``kappa`` in the ``(delta1, delta2)`` plane.

    Returns the sweep and the contours of ``h3``, ``p4`` and ``stability``.
    """
    spec = GridSpec("shieh-masur",
                    (GridAxis("delta1", box[0][0], box[0][1], counts[0]),
                     GridAxis("delta2", box[1][0], box[1][1], counts[1])),
                    {"k1": k1, "kappa": kappa, "omega": omega, "nu": nu})
    result = sweep(spec)
    polylines = []
    for ch in ("h3", "p4", "stability"):
        polylines += extract_contours(result, ch).polylines
    return result, ContourSet(("delta1", "delta2"), polylines)


def self_intersection_curve(k1: float, omega: float, nu: float, delta1_samples) -> np.ndarray:
    """Points ``(delta1, -delta1, -4 omega nu / delta1)`` for the samples inside the pure-imaginary window."""
    window = criteria.pure_imaginary_window(k1, omega, nu)
    d = np.asarray(delta1_samples, dtype=float)
    d = d[window.contains(d)]
    return np.stack([d, -d, criteria.biquadratic_kappa(omega, nu, d)], axis=-1)


def self_intersection_branches(k1: float, omega: float, nu: float, n: int = 200,
                               tail: float = 1e-2) -> tuple[np.ndarray, np.ndarray]:
    """The two handles as closed polylines in ``(delta1, delta2, kappa)``.

    The upper branch runs from the EP at ``delta1 = -2 omega`` towards
    ``delta1 -> 0-`` (where ``kappa`` diverges), stopped at ``-tail * 2 omega``.
    The lower branch joins the double-zero point to the EP at ``delta1 = 2 omega``.
    """
    window = criteria.pure_imaginary_window(k1, omega, nu)
    upper = np.linspace(-2 * omega, -tail * 2 * omega, n)
    lower = np.linspace(window.delta_d, 2 * omega, n)
    mk = lambda d: np.stack([d, -d, criteria.biquadratic_kappa(omega, nu, d)], axis=-1)
    return mk(upper), mk(lower)
