"""Command-line entry point: ``classify``, ``sweep``, ``simulate``, ``special-points``.

Exit codes: 0 success, 2 usage or configuration error, 3 non-finite result.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import criteria, serialize, surfaces, timesim
from .spectral import SystemMatrices, Tolerances, characteristic_coefficients, classify, \
    quartic_roots_closed_form

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3


class UsageError(Exception):
    pass


class NumericError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_value(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{what}: cannot parse {text!r} as a number") from None


def _parse_assignments(items, flag) -> dict[str, float]:
    out = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"{flag} expects name=value, got {item!r}")
        out[name.strip()] = _parse_value(value, f"{flag} {name}")
    return out


def _parse_grid(items) -> list[surfaces.GridAxis]:
    axes = []
    for item in items or ():
        name, sep, rng = item.partition("=")
        parts = rng.split(":")
        if not sep or len(parts) != 3:
            raise UsageError(f"--grid expects name=min:max:count, got {item!r}")
        lo, hi = (_parse_value(p, f"--grid {name}") for p in parts[:2])
        count = _parse_value(parts[2], f"--grid {name} count")
        if count != int(count):
            raise UsageError(f"--grid {name}: count must be an integer")
        axes.append(surfaces.GridAxis(name.strip(), lo, hi, int(count)))
    return axes


def _tolerances(args) -> Tolerances:
    return Tolerances() if args.tol_re is None else Tolerances(axis=args.tol_re)


def _emit(doc, args, csv_text=None):
    """Write ``doc`` (or ``csv_text`` for ``--format csv``) to ``--out`` or stdout."""
    text = csv_text if args.format == "csv" and csv_text is not None else serialize.dumps(doc)
    if args.out:
        serialize.write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _scalar_system(model, params):
    with np.errstate(over="ignore", invalid="ignore"):
        a, b, margins = surfaces.model_system(model, params)
    a, b = np.asarray(a, float), np.asarray(b, float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise NumericError("system matrices are not finite")
    return SystemMatrices(a, b, label=model), {k: float(v) for k, v in margins.items()}


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> dict:
    params = _parse_assignments(args.set, "--set")
    sys_, margins = _scalar_system(args.model, params)
    coeffs = characteristic_coefficients(sys_.a, sys_.b)
    roots = quartic_roots_closed_form(coeffs)
    verdict = classify(sys_, _tolerances(args))
    bq = criteria.biquadratic_conditions(sys_)
    for k, v in bq.margins.items():
        margins[f"biquadratic_{k}"] = v
    doc = serialize.verdict_doc(args.model, params, coeffs, roots, verdict, margins)
    if doc["max_real_part"] is None or any(None in r for r in doc["roots"]):
        raise NumericError("non-finite spectrum")
    _emit(doc, args)
    return doc


def _stem(path: str) -> str:
    root, _ = os.path.splitext(path)
    return root


def cmd_sweep(args) -> dict:
    axes = _parse_grid(args.grid)
    fixed = _parse_assignments(args.fixed, "--fixed")
    fixed.update(_parse_assignments(args.set, "--set"))
    spec = surfaces.GridSpec(args.model, tuple(axes), fixed)
    # validate names before the (possibly large) evaluation
    probe = dict(fixed, **{ax.name: ax.min for ax in axes})
    surfaces.model_system(args.model, probe)
    result = surfaces.sweep(spec, _tolerances(args))
    doc = serialize.sweep_doc(result)
    _emit(doc, args, serialize.sweep_csv(result))
    if len(axes) == 2:
        contours = surfaces.ContourSet(
            tuple(ax.name for ax in axes),
            [p for ch in (*surfaces.get_model(args.model).margin_names, "stability")
             for p in surfaces.extract_contours(result, ch).polylines])
        cdoc = serialize.contour_doc(contours, surfaces.stability_boundary(result))
        if args.out:
            serialize.write_atomic(_stem(args.out) + ".contours.json", serialize.dumps(cdoc))
        doc["contours"] = cdoc
    return doc


def _x0(args, size):
    if args.x0 is not None:
        vals = [_parse_value(v, "--x0") for v in args.x0.split(",")]
        if len(vals) != size:
            raise UsageError(f"--x0 needs {size} comma-separated numbers")
        return np.array(vals)
    if args.seed is not None:
        return np.random.default_rng(args.seed).standard_normal(size)
    return None


def cmd_simulate(args) -> dict:
    params = _parse_assignments(args.set, "--set")
    if args.model == "rankine":
        unknown = sorted(set(params) - {"k1", "omega"})
        if unknown or {"k1", "omega"} - set(params):
            raise surfaces.ConfigError("model 'rankine' takes exactly k1 and omega; "
                                       f"valid names: ['k1', 'omega'] (got {sorted(params)})")
        traj = timesim.integrate_rankine(params["k1"], params["omega"], _x0(args, 2),
                                         args.t_end, args.dt)
        lam = math.sqrt(max(params["omega"] ** 2 - params["k1"], 0.0))
        summary = {"verdict": "DivergenceUnstable" if lam > 0 else "MarginallyStable",
                   "max_real_part": lam}
    else:
        sys_, _ = _scalar_system(args.model, params)
        traj = timesim.integrate_autonomous(sys_, _x0(args, 4), args.t_end, args.dt)
        verdict = classify(sys_, _tolerances(args))
        summary = {"verdict": verdict.klass.name,
                   "max_real_part": serialize.num(verdict.max_real_part)}
    growth = timesim.measure_growth_rate(traj) if len(traj.times) >= 100 else None
    doc = {"model": args.model, "parameters": params, **summary,
           "overflow": bool(traj.overflow), "samples": len(traj.times)}
    if growth is not None:
        doc["growth"] = serialize.growth_doc(growth)
        doc["pure_imaginary"] = bool(growth.no_dominant_growth
                                     and summary["verdict"] == "MarginallyStable")
    if args.out:
        text = (serialize.trajectory_csv(traj) if args.format == "csv"
                else serialize.dumps(serialize.trajectory_doc(traj, growth)))
        serialize.write_atomic(args.out, text)
    sys.stdout.write(serialize.dumps(doc))
    return doc


def cmd_special_points(args) -> dict:
    params = _parse_assignments(args.set, "--set")
    doc: dict = {"model": args.model, "parameters": params}
    if args.model == "brouwer":
        if "omega" not in params:
            raise surfaces.ConfigError("special-points for 'brouwer' needs omega")
        doc["cusps"] = dict(zip(("A", "B", "C"),
                                ([float(x), float(y)] for x, y in surfaces.brouwer_cusps(params["omega"]))))
    elif args.model == "shieh-masur":
        missing = [n for n in ("k1", "omega", "nu") if n not in params]
        if missing:
            raise surfaces.ConfigError(f"special-points for 'shieh-masur' needs {missing}; "
                                       "valid names: ['k1', 'nu', 'omega']")
        k1, omega, nu = params["k1"], params["omega"], params["nu"]
        eps = criteria.exceptional_points(k1, omega, nu)
        doc["exceptional_points"] = [serialize.exceptional_point_doc(e) for e in eps]
        try:
            doc["window"] = serialize.window_doc(criteria.pure_imaginary_window(k1, omega, nu))
        except criteria.DomainError as exc:
            doc["window"] = {"error": str(exc)}
        doc["cusps"] = dict(zip(("A", "B", "C"),
                                ([float(x), float(y)] for x, y in surfaces.brouwer_cusps(omega))))
    else:
        raise surfaces.ConfigError("special-points supports models ['brouwer', 'shieh-masur']")
    _emit(doc, args)
    return doc


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gyrostab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, sim=False):
        p.add_argument("--model", required=True)
        p.add_argument("--set", action="append", metavar="NAME=VALUE")
        p.add_argument("--out")
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--tol-re", type=float)
        p.add_argument("--seed", type=int)

    p = sub.add_parser("classify", help="spectral verdict and criterion margins at one point")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="verdict and margin grids, plus contours for 2-D sweeps")
    common(p)
    p.add_argument("--grid", action="append", metavar="NAME=MIN:MAX:COUNT")
    p.add_argument("--fixed", action="append", metavar="NAME=VALUE")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="integrate a trajectory and measure its growth rate")
    common(p)
    p.add_argument("--t-end", type=float, default=100.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--x0", metavar="A,B,C,D")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("special-points", help="exceptional points, double zero, window, cusps")
    common(p)
    p.set_defaults(func=cmd_special_points)
    return parser


def run(argv=None) -> tuple[int, dict | None]:
    try:
        args = build_parser().parse_args(argv)
        if not (args.command == "simulate" and args.model == "rankine"):
            surfaces.get_model(args.model)
        if args.command == "sweep" and not 1 <= len(args.grid or ()) <= 3:
            raise UsageError("sweep needs between 1 and 3 --grid axes")
        return EXIT_OK, args.func(args)
    except (UsageError, surfaces.ConfigError, criteria.DomainError, ValueError) as exc:
        print(f"gyrostab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    except (NumericError, FloatingPointError) as exc:
        print(f"gyrostab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC, None


def main(argv=None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
