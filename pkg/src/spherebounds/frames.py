"""Frame potentials, their lower bounds, and the antisymmetric frame potential.

All sums run over every ordered pair (or triple) of indices, diagonal
terms included.  Many frame-potential codes drop ``i == j``; here the
diagonal is part of the definition and the bounds depend on it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import Configuration, InvalidArgument, Weights, as_weights
from .specfun import double_factorial, gamma_lk, sph_harm_table, uniform_fp_coeff

__all__ = [
    "BoundReport",
    "HarmonicCoefficients",
    "frame_potential",
    "weighted_frame_potential",
    "fp_lower_bound",
    "fp_bound_report",
    "harmonic_coefficients",
    "frame_potential_spectral",
    "antisymmetric_fp",
    "afp_uniform",
    "afp2_spectral",
    "afp_upper_bound_report",
]


@dataclass(frozen=True)
class BoundReport:
    """A functional value next to its bound.

    ``residual`` is ``value - bound`` for lower bounds and ``bound - value``
    for upper bounds, so it is nonnegative whenever the bound holds.
    """

    value: float
    bound: float
    residual: float
    saturated: bool
    tolerance: float

    @staticmethod
    def _tol(bound, rtol):
        return rtol * max(1.0, abs(bound))

    @classmethod
    def lower(cls, value, bound, rtol=1e-9):
        tol = cls._tol(bound, rtol)
        r = float(value) - float(bound)
        return cls(float(value), float(bound), r, abs(r) <= tol, tol)

    @classmethod
    def upper(cls, value, bound, rtol=1e-9):
        tol = cls._tol(bound, rtol)
        r = float(bound) - float(value)
        return cls(float(value), float(bound), r, abs(r) <= tol, tol)

    @property
    def holds(self) -> bool:
        return self.residual >= -self.tolerance


def _power(g, l):
    # np.power gives 0**0 == 1, which is what the l = 0 potential needs.
    return np.power(g, l)


def frame_potential(config: Configuration, l: int) -> float:
    """``sum_ij (P_i . P_j)**l`` by direct O(N^2) evaluation."""
    if l < 0:
        raise InvalidArgument(f"l must be >= 0, got {l}")
    return float(_power(config.gram(), l).sum())


def weighted_frame_potential(config: Configuration, w, l: int) -> float:
    """Scalar ``sum f_i f_j (P_i.P_j)^l`` or vector ``sum (f_i.f_j)(P_i.P_j)^l``."""
    if l < 0:
        raise InvalidArgument(f"l must be >= 0, got {l}")
    w = as_weights(w, config.n)
    w.check_for(config)
    G = _power(config.gram(), l)
    if w.kind == "scalar":
        f = w.values
        return float(f @ G @ f)
    F = w.values
    return float(np.sum(G * (F @ F.T)))


def fp_lower_bound(l: int, d: int, weight_total: float) -> float:
    """Lower bound ``uniform_fp_coeff(l, d) * weight_total``.

    ``weight_total`` is N^2 for the plain potential, (sum f_i)^2 for scalar
    weights and ``sum_ij f_i . f_j`` for vector weights.
    """
    c = uniform_fp_coeff(l, d)
    return c * float(weight_total) if c else 0.0


def fp_bound_report(config: Configuration, l: int, w=None, rtol=1e-9) -> BoundReport:
    w = as_weights(w, config.n)
    # The bound is stated for positive weights; zero weights just drop points.
    if w.kind == "scalar" and np.any(w.values < 0):
        raise InvalidArgument("scalar weights must be nonnegative for the lower bound")
    value = weighted_frame_potential(config, w, l)
    return BoundReport.lower(value, fp_lower_bound(l, config.dim, w.total()), rtol)


def _angles(config: Configuration):
    p = config.points
    theta = np.arccos(np.clip(p[:, 2], -1.0, 1.0))
    phi = np.arctan2(p[:, 1], p[:, 0])
    return theta, phi


@dataclass(frozen=True)
class HarmonicCoefficients:
    """``C[l, m] = sum_i f_i conj(Y_lm(P_i))`` for 0 <= l <= l_max.

    ``data`` has shape ``(l_max+1, 2*l_max+1)`` for scalar weights, or an
    extra trailing axis for vector weights; index with ``coeffs[l, m]``.
    """

    l_max: int
    data: np.ndarray

    def __getitem__(self, key):
        l, m = key
        if not (0 <= l <= self.l_max and abs(m) <= l):
            raise InvalidArgument(f"no coefficient for l={l}, m={m}")
        return self.data[l, self.l_max + m]

    def power(self, l: int) -> float:
        """``sum_m |C_lm|^2`` (dot products for vector weights)."""
        row = self.data[l, self.l_max - l : self.l_max + l + 1]
        return float(np.sum(np.abs(row) ** 2))


def harmonic_coefficients(config: Configuration, w=None, l_max: int = 2) -> HarmonicCoefficients:
    config.require_dim(3)
    if l_max < 0:
        raise InvalidArgument(f"l_max must be >= 0, got {l_max}")
    w = as_weights(w, config.n)
    w.check_for(config)
    Y = np.conj(sph_harm_table(l_max, *_angles(config)))
    data = Y @ w.values
    return HarmonicCoefficients(l_max, data)


def frame_potential_spectral(config: Configuration, l: int, w=None) -> float:
    """``sum_k gamma_lk sum_j |C_kj|^2``; equals the direct double sum on S^2."""
    config.require_dim(3)
    if l < 0:
        raise InvalidArgument(f"l must be >= 0, got {l}")
    C = harmonic_coefficients(config, w, l)
    return float(sum(gamma_lk(l, k) * C.power(k) for k in range(l % 2, l + 1, 2)))


def antisymmetric_fp(config: Configuration, l: int) -> float:
    """``sum_ijk [(P_i x P_j) . P_k]**l`` over all ordered triples.

    Triples with a repeated index vanish and the even power is symmetric
    under permutations, so the sum is six times the sum over i < j < k.
    Loop order is fixed, which keeps the result bitwise reproducible.
    """
    config.require_dim(3)
    if l % 2 or l < 2:
        raise InvalidArgument(f"l must be even and >= 2, got {l}")
    P = config.points
    n = config.n
    total = 0.0
    for i in range(n - 2):
        rest = P[i + 1 :]
        T = np.cross(P[i], rest) @ rest.T
        total += float(np.triu(T**l, 1).sum())
    return 6.0 * total


def afp_uniform(l: int, n: float) -> float:
    """Antisymmetric frame potential of the uniform density with total mass ``n``."""
    if l % 2 or l < 2:
        raise InvalidArgument(f"l must be even and >= 2, got {l}")
    # sqrt(pi) Gamma(k+1) / Gamma(k-1/2) = k! 2^(k-1) / (2k-3)!! for l = 2k
    k = l // 2
    coeff = Fraction(2 * math.factorial(k) * 2 ** (k - 1),
                     (l - 1) * (l + 1) ** 2 * double_factorial(2 * k - 3))
    return float(coeff) * n**3


def afp2_spectral(config: Configuration) -> float:
    """l = 2 antisymmetric frame potential from N and the l = 2 coefficients only."""
    config.require_dim(3)
    n = config.n
    C = harmonic_coefficients(config, None, 2)
    c0 = C[2, 0].real
    c1, c2 = C[2, 1], C[2, 2]
    a1, a2 = abs(c1) ** 2, abs(c2) ** 2
    pi = math.pi
    cubic = (
        6 * (a1 - 2 * a2) * c0
        + 3 * math.sqrt(6) * 2 * (np.conj(c2) * c1**2).real
        + 2 * c0**3
    )
    return float(
        2 * n**3 / 9
        - 8 / 15 * pi * n * (c0**2 + 2 * a1 + 2 * a2)
        + 16 * pi**1.5 / (45 * math.sqrt(5)) * cubic
    )


def afp_upper_bound_report(config: Configuration, rtol=1e-9) -> BoundReport:
    """``AFP_2 <= 2 N^3 / 9``."""
    value = antisymmetric_fp(config, 2)
    return BoundReport.upper(value, 2.0 * config.n**3 / 9.0, rtol)
