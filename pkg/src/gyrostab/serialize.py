"""Plain-data documents for verdicts, sweeps, contours and trajectories.

Floats are written with ``repr`` (shortest round-trip decimal), so CSV and
JSON outputs are bit-stable and re-parse to equal values. Non-finite numbers
become ``null`` in JSON. Files are written atomically: temp file plus rename.
"""
from __future__ import annotations

import io
import json
import math
import os
import tempfile

import numpy as np

from .criteria import ExceptionalPoint, ImaginaryWindow
from .spectral import Spectrum, Stability, StabilityVerdict
from .surfaces import ContourSet, SweepResult
from .timesim import GrowthEstimate, Trajectory

TRAJECTORY_COLUMNS = ("t", "x1", "x2", "v1", "v2")


def num(x) -> float | None:
    x = float(x)
    return x if math.isfinite(x) else None


def cnum(z) -> list:
    z = complex(z)
    return [num(z.real), num(z.imag)]


def spectrum_doc(s: Spectrum) -> dict:
    return {
        "eigenvalues": [cnum(r) for r in s.roots],
        "clusters": [{"center": cnum(c.center), "indices": list(map(int, c.indices)),
                      "algebraic": int(c.algebraic), "geometric": int(c.geometric),
                      "semisimple": bool(c.semisimple)} for c in s.clusters],
    }


def verdict_doc(model: str, params: dict, coeffs, roots, verdict: StabilityVerdict,
                margins: dict) -> dict:
    """``roots`` are the polished polynomial roots; cluster indices refer to ``eigenvalues``."""
    doc = {
        "model": model,
        "parameters": {k: num(v) for k, v in params.items()},
        "coefficients": [num(c) for c in coeffs],
        "roots": [cnum(r) for r in roots],
        "verdict": verdict.klass.name,
        "code": int(verdict.klass),
        "max_real_part": num(verdict.max_real_part),
        "borderline": bool(verdict.borderline),
        "diagnostics": {k: (bool(v) if isinstance(v, (bool, np.bool_)) else num(v))
                        for k, v in verdict.diagnostics.items()},
        "margins": {k: num(v) for k, v in margins.items()},
    }
    doc.update(spectrum_doc(verdict.spectrum))
    jordan = [c for c in doc["clusters"] if not c["semisimple"]]
    doc["jordan_blocks"] = jordan
    return doc


def sweep_columns(result: SweepResult) -> list[str]:
    names = [ax.name for ax in result.spec.axes]
    return names + ["verdict"] + list(result.channels)


def sweep_csv(result: SweepResult) -> str:
    coords = result.coordinates()
    cols = [coords[:, n] for n in range(coords.shape[1])]
    chans = [result.channels[k] for k in result.channels]
    buf = io.StringIO()
    buf.write(",".join(sweep_columns(result)) + "\n")
    for i in range(len(result.codes)):
        row = [repr(float(c[i])) for c in cols] + [str(int(result.codes[i]))]
        row += [repr(float(c[i])) for c in chans]
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def sweep_doc(result: SweepResult) -> dict:
    spec = result.spec
    return {
        "model": spec.model,
        "axes": [{"name": a.name, "min": a.min, "max": a.max, "count": a.count} for a in spec.axes],
        "fixed": {k: float(v) for k, v in spec.fixed.items()},
        "ordering": "row-major, first axis slowest",
        "verdict_codes": {s.name: int(s) for s in Stability},
        "verdict": [int(c) for c in result.codes],
        "channels": {k: [num(x) for x in v] for k, v in result.channels.items()},
    }


def contour_doc(contours: ContourSet, boundary: ContourSet | None = None) -> dict:
    def lines(cs):
        return [{"channel": p.channel, "closed": bool(p.closed),
                 "points": [[num(x), num(y)] for x, y in p.points]} for p in cs.polylines]
    doc = {"axes": list(contours.axes), "polylines": lines(contours)}
    if boundary is not None:
        doc["boundary"] = lines(boundary)
    return doc


def growth_doc(g: GrowthEstimate) -> dict:
    return {"rate": num(g.rate), "fit_residual": num(g.fit_residual),
            "window": [num(g.window[0]), num(g.window[1])],
            "no_dominant_growth": bool(g.no_dominant_growth),
            "power_exponent": num(g.power_exponent), "power_residual": num(g.power_residual)}


def trajectory_doc(traj: Trajectory, growth: GrowthEstimate | None = None) -> dict:
    doc = {"label": traj.label, "frame": traj.frame, "overflow": bool(traj.overflow),
           "dt": num(traj.dt), "columns": list(TRAJECTORY_COLUMNS),
           "samples": [[num(t)] + [num(x) for x in s] for t, s in zip(traj.times, traj.states)]}
    if growth is not None:
        doc["growth"] = growth_doc(growth)
    return doc


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    buf.write(",".join(TRAJECTORY_COLUMNS) + "\n")
    for t, s in zip(traj.times, traj.states):
        buf.write(",".join(repr(float(v)) for v in (t, *s)) + "\n")
    return buf.getvalue()


def exceptional_point_doc(ep: ExceptionalPoint) -> dict:
    return {"kind": ep.kind, "delta1": num(ep.delta1), "delta2": num(ep.delta2),
            "kappa": num(ep.kappa), "eigenvalue": cnum(ep.eigenvalue),
            "pure_imaginary": bool(ep.pure_imaginary)}


def window_doc(w: ImaginaryWindow) -> dict:
    return {"delta_d": num(w.delta_d), "kappa_d": num(w.kappa_d),
            "intervals": [{"lo": num(lo), "hi": num(hi), "lo_closed": lc, "hi_closed": hc}
                          for lo, hi, lc, hc in w.intervals]}


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
