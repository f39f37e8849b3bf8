"""Command-line front end.

Every subcommand writes a table (CSV or JSON) to ``--out`` or stdout.
When ``--out`` is a file, a ``<out>.manifest.json`` next to it records the
parameters, seeds, version and wall time of the run.

Exit codes: 0 success, 2 usage error, 3 numerical or degeneracy error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .core import (
    Configuration, DegeneracyError, InfiniteEnergyError, InvalidArgument, ParseError,
    load_configuration, load_weights, perturb, platonic, sample_uniform, save_configuration,
)
from .experiments import ENSEMBLE_COLUMNS, ensemble_table
from .frames import (
    afp2_spectral, afp_uniform, afp_upper_bound_report, antisymmetric_fp, fp_bound_report,
)
from .lattices import Lattice, lattice_window, window_delta, window_fp, window_scan
from .optimize import MinimizeOptions, ensemble, local_minimize
from .riesz import (
    asymptotic_bound, calibrated_bound, delta_star, energy_series, regularized_energy,
    riesz_energy, series_terms, sum_distance_bound,
)
from .specfun import gamma_lk, kappa_table, power_expansion, sphere_area, uniform_fp_coeff
from .voronoi import bound_diagnostics, diagram_to_json, spherical_voronoi

DEFAULT_SEED = 20240601
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return "" if x is None else str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def render(rows, columns, fmt):
    if fmt == "json":
        return json.dumps(_jsonable(rows), indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _read_config(args) -> Configuration:
    if args.input:
        text = Path(args.input).read_text(encoding="utf-8")
        return load_configuration(text)
    if getattr(args, "solid", None):
        return platonic(args.solid)
    if getattr(args, "n", None):
        return sample_uniform(args.n, args.dim, args.seed)
    raise UsageError("an input configuration is required (--input, --solid or --n)")


def _add_config_args(p, random_ok=True):
    p.add_argument("--input", help="point file (one unit vector per line)")
    p.add_argument("--solid", help="built-in shape: tetrahedron, octahedron, cube, icosahedron")
    if random_ok:
        p.add_argument("--n", type=int, help="draw N uniform random points instead of reading a file")
        p.add_argument("--dim", type=int, default=3)


def cmd_fp(args):
    config = _read_config(args)
    weights = None
    if args.weights:
        weights = load_weights(Path(args.weights).read_text(encoding="utf-8"), config.n)
    rows = []
    for l in args.ell or [2]:
        rep = fp_bound_report(config, l, weights)
        rows.append({
            "ell": l, "dim": config.dim, "n": config.n,
            "weights": "none" if weights is None else weights.kind,
            "value": rep.value, "bound": rep.bound, "residual": rep.residual,
            "saturated": rep.saturated,
        })
    return rows, ["ell", "dim", "n", "weights", "value", "bound", "residual", "saturated"]


def cmd_afp(args):
    config = _read_config(args)
    rows = []
    for l in args.ell or [2]:
        row = {"ell": l, "n": config.n, "value": antisymmetric_fp(config, l),
               "uniform": afp_uniform(l, config.n)}
        if l == 2:
            rep = afp_upper_bound_report(config)
            row.update(bound=rep.bound, residual=rep.residual, saturated=rep.saturated,
                       spectral=afp2_spectral(config))
        rows.append(row)
    return rows, ["ell", "n", "value", "uniform", "bound", "residual", "saturated", "spectral"]


def cmd_coeffs(args):
    rows = []
    dims = args.dim or [3]
    for d in dims:
        for l in args.ell or range(0, 9):
            pe = power_expansion(l, d)
            for k, b in enumerate(pe.B):
                rows.append({"quantity": "B", "l": l, "k": k, "d": d, "value": b})
            rows.append({"quantity": "uniform_fp_coeff", "l": l, "d": d,
                         "value": uniform_fp_coeff(l, d)})
            rows.append({"quantity": "B_over_area", "l": l, "k": l // 2, "d": d,
                         "value": pe.B[-1] / sphere_area(d)})
            if d == 3:
                for k in range(l + 1):
                    rows.append({"quantity": "gamma", "l": l, "k": k, "d": 3, "value": gamma_lk(l, k)})
    for key, value in sorted(kappa_table().items()):
        rows.append({"quantity": "kappa", "index": " ".join(map(str, key)), "value": value})
    return rows, ["quantity", "l", "k", "d", "index", "value"]


def cmd_riesz(args):
    config = _read_config(args)
    n = config.n
    rows = [
        {"quantity": "energy", "s": args.s, "value": riesz_energy(config, args.s)},
    ]
    if config.dim == 3:
        rep = sum_distance_bound(config)
        rows.append({"quantity": "energy", "s": -1, "value": rep.value, "bound": rep.bound,
                     "residual": rep.residual})
        for delta in args.delta or [1e-3, 1e-2, 1e-1, 1.0]:
            terms = series_terms(config, delta, args.lmax)
            rows.append({"quantity": "regularized", "delta": delta,
                         "value": regularized_energy(config, delta)})
            rows.append({"quantity": "series", "delta": delta, "lmax": args.lmax,
                         "value": energy_series(config, delta, args.lmax),
                         "last_term": float(terms[-1])})
            rows.append({"quantity": "calibrated", "delta": delta,
                         "value": calibrated_bound(n, delta)})
    if n >= 2:
        ds = delta_star(n)
        rows.append({"quantity": "delta_star", "value": ds})
        rows.append({"quantity": "calibrated", "delta": ds, "value": calibrated_bound(n, ds)})
        rows.append({"quantity": "asymptotic", "value": asymptotic_bound(n)})
    cols = ["quantity", "s", "delta", "lmax", "value", "bound", "residual", "last_term"]
    return rows, cols


def _options(args):
    return MinimizeOptions(s=args.s, max_iters=args.max_iters, grad_tol=args.grad_tol)


def cmd_minimize(args):
    config = _read_config(args)
    res = local_minimize(config, _options(args))
    if args.save:
        Path(args.save).write_text(
            save_configuration(res.config, f"N={config.n} E={res.energy!r}"), encoding="utf-8")
    rows = [{"n": config.n, "energy": res.energy, "iterations": res.iterations,
             "final_grad_norm": res.final_grad_norm, "converged": res.converged,
             "message": res.message}]
    return rows, ["n", "energy", "iterations", "final_grad_norm", "converged", "message"]


def cmd_ensemble(args):
    config = _read_config(args)
    results = ensemble(config, args.count, args.sigma, args.seed, _options(args), args.threads)
    if args.save_dir:
        out = Path(args.save_dir)
        out.mkdir(parents=True, exist_ok=True)
        for rank, res in enumerate(results):
            (out / f"config_{rank:04d}.txt").write_text(
                save_configuration(res.config, f"rank={rank} seed={res.seed} E={res.energy!r}"),
                encoding="utf-8")
    return ensemble_table(results), ENSEMBLE_COLUMNS + ["error"]


def cmd_voronoi(args):
    config = _read_config(args)
    diagram = spherical_voronoi(config, project_centroid=not args.unprojected)
    if args.report:
        rows = []
        for name, rep in bound_diagnostics(diagram, 2).items():
            rows.append({"weights": name, "ell": 2, "value": rep.value, "bound": rep.bound,
                         "residual": rep.residual, "saturated": rep.saturated})
        return rows, ["weights", "ell", "value", "bound", "residual", "saturated"]
    if args.format == "json":
        return diagram_to_json(diagram), None
    rows = []
    for i in range(config.n):
        rows.append({
            "index": i, "sides": int(diagram.sides[i]), "charge": int(6 - diagram.sides[i]),
            "area": diagram.areas[i], "strain": diagram.strain[i],
            "strain_x": diagram.strain_vectors[i, 0], "strain_y": diagram.strain_vectors[i, 1],
            "strain_z": diagram.strain_vectors[i, 2], "energy": diagram.energies[i],
            "defect": int(diagram.sides[i] != 6),
        })
    return rows, ["index", "sides", "charge", "area", "strain", "strain_x", "strain_y",
                  "strain_z", "energy", "defect"]


def cmd_window(args):
    lattice = Lattice(args.lattice, args.spacing)
    gammas = args.gamma or [0.0, 0.5, 1.0, 2.0]
    ells = args.ell or [1, 2, 3, 4, 5, 6]
    if args.count:
        rng = np.random.default_rng(args.seed)
        centers = rng.uniform(0, 1, (args.count, lattice.dim)) @ lattice.basis()
        rows = []
        for g in gammas:
            for l in ells:
                scan = window_scan(lattice, args.radius, g, l, centers)
                for c, v in zip(scan.centers, scan.values):
                    rows.append({"gamma": g, "ell": l, **{f"c{k}": x for k, x in enumerate(c)},
                                 "delta": v})
        cols = ["gamma", "ell"] + [f"c{k}" for k in range(lattice.dim)] + ["delta"]
        return rows, cols
    ws = lattice_window(lattice, args.radius)
    rows = []
    for g in gammas:
        for l in ells:
            rows.append({"lattice": args.lattice, "radius": args.radius, "n": ws.n,
                         "gamma": g, "ell": l, "fp": window_fp(ws, g, l),
                         "delta": window_delta(ws, g, l)})
    return rows, ["lattice", "radius", "n", "gamma", "ell", "fp", "delta"]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = argparse.ArgumentParser(prog="spherebounds", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fp", parents=[common], help="frame potentials and lower bounds")
    _add_config_args(p)
    p.add_argument("--weights", help="weights file: one scalar or m fields per line")
    p.add_argument("--ell", type=int, action="append")
    p.set_defaults(func=cmd_fp)

    p = sub.add_parser("afp", parents=[common], help="antisymmetric frame potentials")
    _add_config_args(p)
    p.add_argument("--ell", type=int, action="append")
    p.set_defaults(func=cmd_afp)

    p = sub.add_parser("coeffs", parents=[common], help="expansion coefficients and kappa table")
    p.add_argument("--ell", type=int, action="append")
    p.add_argument("--dim", type=int, action="append")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("riesz", parents=[common], help="Riesz energies and analytic bounds")
    _add_config_args(p)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--delta", type=float, action="append")
    p.add_argument("--lmax", type=int, default=200)
    p.set_defaults(func=cmd_riesz)

    for name, func, helptext in (("minimize", cmd_minimize, "local Thomson minimization"),
                                 ("ensemble", cmd_ensemble, "perturb-and-reminimize ensemble")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        _add_config_args(p)
        p.add_argument("--s", type=float, default=1.0)
        p.add_argument("--max-iters", type=int, default=20000)
        p.add_argument("--grad-tol", type=float, default=None)
        if name == "minimize":
            p.add_argument("--save", help="write the minimized configuration here")
        else:
            p.add_argument("--count", type=int, default=50)
            p.add_argument("--sigma", type=float, default=0.15)
            p.add_argument("--save-dir", help="directory for the minimized configurations")
        p.set_defaults(func=func)

    p = sub.add_parser("voronoi", parents=[common], help="spherical Voronoi diagram export")
    _add_config_args(p)
    p.add_argument("--unprojected", action="store_true",
                   help="strain against the raw vertex mean instead of its projection")
    p.add_argument("--report", action="store_true",
                   help="emit weighted frame-potential bounds for energy/strain/defect weights")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("window", parents=[common], help="lattice observation windows")
    p.add_argument("--lattice", choices=["hexagonal", "cubic"], default="hexagonal")
    p.add_argument("--radius", type=float, default=4.0)
    p.add_argument("--spacing", type=float, default=1.0)
    p.add_argument("--gamma", type=float, action="append")
    p.add_argument("--ell", type=int, action="append")
    p.add_argument("--count", type=int, default=0, help="scan this many random centers in one cell")
    p.set_defaults(func=cmd_window)
    return parser


def _manifest(args, argv, elapsed):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    return {
        "subcommand": args.command,
        "argv": list(argv),
        "parameters": params,
        "seed": args.seed,
        "version": __version__,
        "wall_time_s": elapsed,
    }


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        rows, columns = args.func(args)
    except (UsageError, InvalidArgument, ParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegeneracyError, InfiniteEnergyError, FloatingPointError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    fmt = "json" if columns is None else args.format
    text = render(rows, columns, fmt)
    elapsed = time.perf_counter() - t0
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        Path(args.out + ".manifest.json").write_text(
            json.dumps(_jsonable(_manifest(args, argv, elapsed)), indent=2) + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
