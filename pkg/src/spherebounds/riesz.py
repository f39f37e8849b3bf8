"""Riesz energies on S^2 and the analytic lower bounds for the Coulomb case.

``riesz_energy`` is the pair sum over i < j, i.e. half the ordered double
sum with the (divergent, for s > 0) diagonal left out.  The regularized
energy and its series follow the diagonal-inclusive convention, with the
diagonal contribution ``N / sqrt(2 delta)`` subtracted explicitly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Configuration, InfiniteEnergyError, InvalidArgument
from .frames import BoundReport

__all__ = [
    "RieszParams",
    "pair_distances",
    "riesz_energy",
    "sum_distance_bound",
    "regularized_energy",
    "series_terms",
    "energy_series",
    "calibrated_bound",
    "delta_star",
    "asymptotic_bound",
]


@dataclass(frozen=True)
class RieszParams:
    s: float = 1.0
    delta: float = 0.0

    def __post_init__(self):
        _check_s(self.s)
        if self.delta < 0:
            raise InvalidArgument(f"delta must be >= 0, got {self.delta}")


def _check_s(s):
    if s == 0 or s < -1:
        raise InvalidArgument(f"exponent must satisfy s >= -1, s != 0; got {s}")


def pair_distances(config: Configuration) -> np.ndarray:
    """Chord lengths ``|P_i - P_j|`` for i < j (condensed order)."""
    P = config.points
    i, j = np.triu_indices(config.n, 1)
    return np.linalg.norm(P[i] - P[j], axis=1)


def riesz_energy(config: Configuration, s: float) -> float:
    """``sum_{i<j} sign(s) / r_ij**s`` with chord distance r_ij."""
    _check_s(s)
    r = pair_distances(config)
    if s > 0 and np.any(r == 0.0):
        raise InfiniteEnergyError("coincident points give infinite energy for s > 0")
    return float(math.copysign(1.0, s) * np.sum(r ** (-s)))


def sum_distance_bound(config: Configuration) -> BoundReport:
    """``E(-1) = -sum_{i<j} r_ij >= -2 N^2 / 3`` on S^2."""
    config.require_dim(3)
    return BoundReport.lower(riesz_energy(config, -1), -2.0 * config.n**2 / 3.0)


def _check_delta(delta):
    if not delta > 0:
        raise InvalidArgument(f"delta must be > 0, got {delta}")


def regularized_energy(config: Configuration, delta: float) -> float:
    """``(1/2) [sum_ij 1/r_ij(delta) - N/sqrt(2 delta)]``, ``r_ij(delta)^2 = 2(1+delta-P_i.P_j)``."""
    config.require_dim(3)
    _check_delta(delta)
    G = config.gram()
    total = np.sum(1.0 / np.sqrt(2.0 * (1.0 + delta - G)))
    return 0.5 * (float(total) - config.n / math.sqrt(2.0 * delta))


def _series_weights(l_max):
    # (-1)^l binom(-1/2, l) = (2l)! / (4^l (l!)^2), via the ratio (2l-1)/(2l).
    c = np.empty(l_max + 1)
    c[0] = 1.0
    for l in range(1, l_max + 1):
        c[l] = c[l - 1] * (2 * l - 1) / (2 * l)
    return c


def series_terms(config: Configuration, delta: float, l_max: int) -> np.ndarray:
    """Individual terms ``l = 0..l_max`` of the frame-potential series for the energy.

    The last term's magnitude is a practical proxy for the truncation error.
    """
    _check_delta(delta)
    if l_max < 0:
        raise InvalidArgument(f"l_max must be >= 0, got {l_max}")
    G = config.gram()
    c = _series_weights(l_max)
    fp = np.empty(l_max + 1)
    Gl = np.ones_like(G)
    for l in range(l_max + 1):
        fp[l] = Gl.sum()
        Gl *= G
    ls = np.arange(l_max + 1)
    return c * fp / (1.0 + delta) ** (ls + 0.5) / (2.0 * math.sqrt(2.0))


def energy_series(config: Configuration, delta: float, l_max: int) -> float:
    """Partial sum of the frame-potential series for ``regularized_energy``."""
    terms = series_terms(config, delta, l_max)
    return float(terms.sum()) - config.n / (2.0 * math.sqrt(2.0 * delta))


def calibrated_bound(n: float, delta: float) -> float:
    """Regularized energy with every frame potential at its lower bound (s = 1)."""
    _check_delta(delta)
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    root = math.sqrt(delta + math.sqrt(delta * (delta + 2.0)) + 1.0)
    return n / 4.0 * (2.0 * n / root - math.sqrt(2.0 / delta))


def delta_star(n: float) -> float:
    """Regularizer maximizing ``calibrated_bound(n, .)``."""
    if n < 2:
        raise InvalidArgument(f"n must be >= 2, got {n}")
    return 4.0 / (4.0 * n - math.sqrt(8.0 * n + 1.0) - 1.0)


def asymptotic_bound(n: float) -> float:
    """Large-N expansion of ``calibrated_bound(n, delta_star(n))``.

    The N^{3/2} coefficient here is 1/sqrt(2); numerically observed minima
    have a smaller coefficient (about 0.553), so the bound is not tight at
    that order.
    """
    if n < 1:
        raise InvalidArgument(f"n must be >= 1, got {n}")
    r = math.sqrt(n)
    return n * n / 2 - n * r / math.sqrt(2) + n / 8 + r / (16 * math.sqrt(2)) + 1 / 64
