"""Local minimization of Riesz energies on the sphere and perturbation ensembles."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import Configuration, InfiniteEnergyError, InvalidArgument, perturb
from .riesz import riesz_energy

__all__ = [
    "MinimizeOptions",
    "MinimizationResult",
    "energy_gradient",
    "local_minimize",
    "ensemble",
]


NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class MinimizeOptions:
    s: float = 1.0
    max_iters: int = 20000
    grad_tol: float | None = None  # None -> 1e-10 * N
    initial_step: float = 0.05  # largest point displacement of the first trial step
    backtrack: float = 0.5
    armijo: float = 1e-4
    max_backtracks: int = 60
    barzilai_borwein: bool = True

    def __post_init__(self):
        if self.max_iters < 1:
            raise InvalidArgument("max_iters must be >= 1")
        if self.grad_tol is not None and not self.grad_tol > 0:
            raise InvalidArgument("grad_tol must be > 0")
        if not 0 < self.backtrack < 1:
            raise InvalidArgument("backtrack factor must lie in (0, 1)")

    def tolerance(self, n: int) -> float:
        return self.grad_tol if self.grad_tol is not None else 1e-10 * n


@dataclass(frozen=True)
class MinimizationResult:
    config: Configuration
    energy: float
    iterations: int
    final_grad_norm: float
    converged: bool
    message: str = ""
    energy_trace: tuple = field(default=(), repr=False)
    seed: int | None = None


def _sqdist(P, Q=None):
    """Squared distances ``|P_i - P_j|^2`` from Gram matrices, diagonal set to inf."""
    G = P @ P.T
    d = np.diag(G)
    r2 = d[:, None] + d[None, :] - 2.0 * G
    np.fill_diagonal(r2, np.inf)
    return r2


def _grad(P, s):
    r2 = _sqdist(P)
    if np.any(r2 <= 0.0):
        raise InfiniteEnergyError("coincident points give an infinite gradient")
    # d/dP_i of sign(s) r^-s = -|s| r^(-s-2) (P_i - P_j)
    c = -abs(s) * r2 ** (-(s + 2) / 2)
    g = c.sum(axis=1)[:, None] * P - c @ P
    return g - np.sum(g * P, axis=1)[:, None] * P


def energy_gradient(config: Configuration, s: float = 1.0) -> np.ndarray:
    """Gradient of the pair-sum energy, projected onto each tangent plane."""
    if s == 0 or s < -1:
        raise InvalidArgument(f"exponent must satisfy s >= -1, s != 0; got {s}")
    return _grad(config.points, s)


def _energy_change(P, Q, s):
    """``E(Q) - E(P)`` summed pair by pair, without cancelling two large totals.

    Uses ``r'^2 = r^2 + 2 D.E + |E|^2`` with ``D = P_i - P_j`` and ``E`` the
    difference of the displacements, so the result is accurate relative to
    the displacement rather than to the total energy.
    """
    dP = Q - P
    r2 = _sqdist(P)
    A = P @ dP.T
    a = np.diag(A)
    DE = a[:, None] + a[None, :] - A - A.T
    M = dP @ dP.T
    m = np.diag(M)
    EE = m[:, None] + m[None, :] - 2.0 * M
    rel = (2.0 * DE + EE) / r2
    if np.any(rel <= -1.0):
        return math.inf
    term = r2 ** (-s / 2) * np.expm1(-0.5 * s * np.log1p(rel))
    # each unordered pair appears twice; the diagonal is zero (r2 = inf)
    return float(0.5 * math.copysign(1.0, s) * term.sum())


def _retract(X):
    return X / np.linalg.norm(X, axis=1)[:, None]


def local_minimize(config: Configuration, opts: MinimizeOptions | None = None) -> MinimizationResult:
    """Projected gradient descent with backtracking and renormalization retraction.

    Trial steps use the Barzilai-Borwein length when enabled.  A step is
    accepted on the Armijo condition, or, once energy changes sink below
    rounding noise (``NOISE_FLOOR * |E|``), on an approximate Wolfe test of
    the new gradient.  The energy trace accumulates the accepted pairwise
    differences and is non-increasing up to that floor; ``energy`` in the
    result is recomputed from the final points.
    """
    opts = opts or MinimizeOptions()
    s = opts.s
    tol = opts.tolerance(config.n)
    P = np.array(config.points)
    energy = riesz_energy(config, s)
    trace = [energy]
    if config.n == 1:
        return MinimizationResult(config, energy, 0, 0.0, True, "single point", tuple(trace))

    g = _grad(P, s)
    gnorm = float(np.max(np.linalg.norm(g, axis=1)))
    step = opts.initial_step / max(gnorm, 1e-300)
    message = "max_iters reached"
    it = 0
    while it < opts.max_iters:
        if gnorm <= tol:
            message = "converged"
            break
        gg = float(np.sum(g * g))
        # Energy differences below this are rounding noise, not signal.
        floor = NOISE_FLOOR * abs(energy)
        alpha = step
        g_new = None
        for _ in range(opts.max_backtracks):
            Q = _retract(P - alpha * g)
            dE = _energy_change(P, Q, s)
            if dE <= -opts.armijo * alpha * gg:
                g_new = _grad(Q, s)
                break
            if dE <= floor:
                # approximate Wolfe: accept if the slope at Q has not turned
                # strongly uphill along the search direction
                gq = _grad(Q, s)
                if -float(np.sum(gq * g)) <= (1 - 2 * opts.armijo) * gg:
                    g_new = gq
                    break
            alpha *= opts.backtrack
        if g_new is None:
            message = "line search failed"
            break
        it += 1
        if opts.barzilai_borwein:
            sk = (Q - P).ravel()
            yk = (g_new - g).ravel()
            sy = float(sk @ yk)
            step = float(sk @ sk) / sy if sy > 0 else alpha * 2.0
        else:
            step = alpha * 2.0
        P, g = Q, g_new
        energy += dE
        trace.append(energy)
        gnorm = float(np.max(np.linalg.norm(g, axis=1)))

    final = Configuration(P)
    energy = riesz_energy(final, s)
    converged = gnorm <= tol
    if converged:
        message = "converged"
    return MinimizationResult(final, energy, it, gnorm, converged, message, tuple(trace))


def _member(args):
    seed_config, sigma, member_seed, opts = args
    start = perturb(seed_config, sigma, member_seed)
    try:
        res = local_minimize(start, opts)
    except (InfiniteEnergyError, FloatingPointError) as exc:
        return MinimizationResult(start, math.nan, 0, math.nan, False, f"failed: {exc}", (), member_seed)
    return MinimizationResult(res.config, res.energy, res.iterations, res.final_grad_norm,
                              res.converged, res.message, res.energy_trace, member_seed)


def member_seeds(seed: int, count: int) -> list[int]:
    """Independent per-member seeds derived from one batch seed."""
    return [int(x) for x in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)]


def ensemble(seed_config: Configuration, count: int, sigma: float, seed: int,
             opts: MinimizeOptions | None = None, workers: int = 1) -> list[MinimizationResult]:
    """Perturb-and-reminimize ``count`` times; results sorted by energy.

    Each member draws from its own derived seed, so the batch does not
    depend on ``workers`` or on scheduling.  Failed members are kept with
    ``converged=False`` and sort last.
    """
    if count < 1:
        raise InvalidArgument("count must be >= 1")
    if not sigma > 0:
        raise InvalidArgument("sigma must be > 0")
    opts = opts or MinimizeOptions()
    jobs = [(seed_config, sigma, ms, opts) for ms in member_seeds(seed, count)]
    if workers > 1 and count > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_member, jobs))
    else:
        results = [_member(j) for j in jobs]
    return sorted(results, key=lambda r: (math.isnan(r.energy), r.energy))
