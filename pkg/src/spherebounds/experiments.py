"""Ensemble-level tables: per-configuration bound diagnostics for Thomson minima."""
from __future__ import annotations

import math

from .core import Configuration, DegeneracyError, sample_uniform
from .frames import afp_upper_bound_report
from .optimize import MinimizationResult, MinimizeOptions, ensemble, local_minimize
from .riesz import calibrated_bound, delta_star
from .voronoi import bound_diagnostics, spherical_voronoi

__all__ = [
    "ENSEMBLE_COLUMNS", "configuration_row", "ensemble_table", "best_of_starts", "run_thomson_ensemble",
]

ENSEMBLE_COLUMNS = [
    "rank", "seed", "n", "energy", "iterations", "final_grad_norm", "converged",
    "total_charge", "n_defect",
    "total_strain", "fp2_strain", "bound_strain", "residual_strain",
    "total_cell_energy", "fp2_energy", "bound_energy", "residual_energy",
    "fp2_strain_vector", "bound_strain_vector", "residual_strain_vector",
    "fp2_defect", "bound_defect", "residual_defect",
    "afp2", "residual_afp2", "residual_calibrated",
]


def configuration_row(config: Configuration, energy: float | None = None) -> dict:
    """Voronoi and frame-potential diagnostics for one configuration on S^2."""
    row = {"n": config.n}
    try:
        diagram = spherical_voronoi(config)
    except DegeneracyError as exc:
        row["error"] = str(exc)
        return row
    reps = bound_diagnostics(diagram, 2)
    row.update(
        total_charge=int(diagram.charges.sum()),
        n_defect=diagram.n_defect,
        total_strain=float(diagram.strain.sum()),
        total_cell_energy=float(diagram.energies.sum()),
    )
    for key, col in (("strain", "strain"), ("energy", "energy"),
                     ("strain_vector", "strain_vector"), ("defect", "defect")):
        rep = reps[key]
        row[f"fp2_{col}"] = rep.value
        row[f"bound_{col}"] = rep.bound
        row[f"residual_{col}"] = rep.residual
    afp = afp_upper_bound_report(config)
    row["afp2"] = afp.value
    row["residual_afp2"] = afp.residual
    if energy is not None and config.n >= 2:
        row["residual_calibrated"] = energy - calibrated_bound(config.n, delta_star(config.n))
    return row


def ensemble_table(results: list[MinimizationResult]) -> list[dict]:
    rows = []
    for rank, res in enumerate(results):
        row = {
            "rank": rank, "seed": res.seed, "energy": res.energy,
            "iterations": res.iterations, "final_grad_norm": res.final_grad_norm,
            "converged": res.converged,
        }
        if not math.isnan(res.energy):
            row.update(configuration_row(res.config, res.energy))
        rows.append(row)
    return rows


def best_of_starts(n: int, starts: int, seed: int, opts: MinimizeOptions | None = None) -> MinimizationResult:
    """Lowest local minimum over ``starts`` random initial configurations."""
    best = None
    for k in range(starts):
        res = local_minimize(sample_uniform(n, 3, seed + k), opts)
        if best is None or res.energy < best.energy:
            best = res
    return best


def run_thomson_ensemble(n=100, count=50, sigma=0.15, seed=0, starts=5,
                         opts: MinimizeOptions | None = None, workers=1):
    """Seed minimum from several random starts, then a perturbation ensemble around it."""
    base = best_of_starts(n, starts, seed, opts)
    results = ensemble(base.config, count, sigma, seed, opts, workers)
    return base, results
