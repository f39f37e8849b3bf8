"""Coefficient machinery for harmonic expansions on spheres.

Gegenbauer polynomials, the reproducing-kernel polynomials ``F_l`` of
degree-l harmonics on S^{d-1}, the expansion of ``t**l`` in that basis,
the closed-form uniform frame-potential coefficient, the d=3 coefficients
``gamma_lk``, complex spherical harmonics and the kappa table for the
squared triple product.
"""
from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import chebyshev

from .core import InvalidArgument

__all__ = [
    "eta",
    "double_factorial",
    "sphere_area",
    "harmonic_dimension",
    "gegenbauer",
    "addition_poly",
    "PowerExpansion",
    "power_expansion",
    "uniform_fp_coeff",
    "gamma_lk",
    "sph_harm",
    "sph_harm_table",
    "KappaTable",
    "kappa_table",
]

# Above this l + d the closed form switches from exact integers to log-gamma.
_EXACT_LIMIT = 30


def eta(l: int) -> int:
    """1 for even ``l``, 0 for odd."""
    return 1 if l % 2 == 0 else 0


def double_factorial(m: int) -> int:
    """m!! with the conventions 0!! = (-1)!! = 1."""
    if m < -1:
        raise InvalidArgument(f"double factorial undefined for {m}")
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


def sphere_area(d: int) -> float:
    """Surface area of the unit (d-1)-sphere in R^d."""
    if d < 1:
        raise InvalidArgument(f"d must be >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)


def harmonic_dimension(l: int, d: int) -> int:
    """Dimension of the space of degree-l spherical harmonics on S^{d-1}."""
    if l < 0 or d < 2:
        raise InvalidArgument(f"need l >= 0, d >= 2, got l={l}, d={d}")
    if d == 2:
        return 1 if l == 0 else 2
    return (2 * l + d - 2) * math.factorial(l + d - 3) // (math.factorial(l) * math.factorial(d - 2))


def gegenbauer(l: int, nu: float) -> Polynomial:
    """Gegenbauer polynomial ``C_l^nu`` from its explicit finite sum."""
    if l < 0 or nu <= 0:
        raise InvalidArgument(f"need l >= 0 and nu > 0, got l={l}, nu={nu}")
    coef = np.zeros(l + 1)
    for k in range(l // 2 + 1):
        # Gamma(nu + l - k) / Gamma(nu) as a rising product
        rising = 1.0
        for j in range(l - k):
            rising *= nu + j
        coef[l - 2 * k] = (-1) ** k * 2.0 ** (l - 2 * k) * rising / (
            math.factorial(k) * math.factorial(l - 2 * k)
        )
    return Polynomial(coef)


def addition_poly(l: int, d: int) -> Polynomial:
    """Polynomial ``F_l`` with ``sum_m conj(Y_lm(x)) Y_lm(y) = F_l(x . y)`` on S^{d-1}.

    For d = 2 the orthonormal Fourier basis gives ``F_0 = 1/(2 pi)`` and
    ``F_l = T_l / pi`` (Chebyshev), which is also the nu -> 0 limit of the
    Gegenbauer form.
    """
    if l < 0 or d < 2:
        raise InvalidArgument(f"need l >= 0, d >= 2, got l={l}, d={d}")
    area = sphere_area(d)
    if d == 2:
        if l == 0:
            return Polynomial([1.0 / area])
        return Polynomial(chebyshev.cheb2poly([0] * l + [1])) / math.pi
    scale = (2 * l + d - 2) / ((d - 2) * area)
    return gegenbauer(l, (d - 2) / 2) * scale


@dataclass(frozen=True)
class PowerExpansion:
    """``t**l = sum_k B[k] * F_{l-2k}(t)`` on S^{d-1}."""

    l: int
    d: int
    B: tuple

    def polynomial(self) -> Polynomial:
        out = Polynomial([0.0])
        for k, b in enumerate(self.B):
            out = out + b * addition_poly(self.l - 2 * k, self.d)
        return out


def power_expansion(l: int, d: int) -> PowerExpansion:
    """Expand ``t**l`` in the kernels ``F_l, F_{l-2}, ...`` by degree matching.

    Each ``F_j`` has exact degree ``j`` and parity ``j``, so the system is
    triangular: peel off the leading coefficient at degrees l, l-2, ...
    """
    if l < 0 or d < 2:
        raise InvalidArgument(f"need l >= 0, d >= 2, got l={l}, d={d}")
    residual = np.zeros(l + 1)
    residual[l] = 1.0
    B = []
    for k in range(l // 2 + 1):
        deg = l - 2 * k
        f = addition_poly(deg, d).coef
        lead = f[deg]
        if lead == 0:
            raise ArithmeticError(f"F_{deg} has vanishing leading coefficient")
        b = residual[deg] / lead
        residual[: deg + 1] -= b * f[: deg + 1]
        residual[deg] = 0.0
        B.append(float(b))
    return PowerExpansion(l, d, tuple(B))


def uniform_fp_coeff(l: int, d: int) -> float:
    """Uniform-density frame potential per N^2: (l-1)!!(d-2)!!/(l+d-2)!!, zero for odd l."""
    if l < 0 or d < 2:
        raise InvalidArgument(f"need l >= 0, d >= 2, got l={l}, d={d}")
    if l % 2:
        return 0.0
    if l + d <= _EXACT_LIMIT:
        return float(Fraction(double_factorial(l - 1) * double_factorial(d - 2),
                              double_factorial(l + d - 2)))
    return math.exp(
        math.lgamma(d / 2) + math.lgamma((l + 1) / 2)
        - 0.5 * math.log(math.pi) - math.lgamma((d + l) / 2)
    )


def gamma_lk(l: int, k: int) -> float:
    """Coefficient of ``F_k`` in ``cos^l`` on S^2 (zero when l - k is odd)."""
    if l < 0 or k < 0 or k > l:
        raise InvalidArgument(f"need 0 <= k <= l, got l={l}, k={k}")
    if (l - k) % 2:
        return 0.0
    h = (l - k) // 2
    den = 2**h * math.factorial(h) * double_factorial(l + k + 1)
    return 4.0 * math.pi * float(Fraction(math.factorial(l), den))


def _legendre_normalized(l_max: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal associated Legendre values, Condon-Shortley phase included.

    Returns ``P[l, m, ...]`` for 0 <= m <= l <= l_max such that
    ``Y_lm(theta, phi) = P[l, m] * exp(i m phi)`` with ``x = cos(theta)``.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    P = np.zeros((l_max + 1, l_max + 1) + x.shape)
    P[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, l_max + 1):
        P[m, m] = -math.sqrt((2 * m + 1) / (2 * m)) * s * P[m - 1, m - 1]
    for m in range(0, l_max):
        P[m + 1, m] = math.sqrt(2 * m + 3) * x * P[m, m]
    for m in range(0, l_max + 1):
        for l in range(m + 2, l_max + 1):
            a = math.sqrt((4 * l * l - 1) / (l * l - m * m))
            b = math.sqrt(((l - 1) ** 2 - m * m) / (4 * (l - 1) ** 2 - 1))
            P[l, m] = a * (x * P[l - 1, m] - b * P[l - 2, m])
    return P


def sph_harm_table(l_max: int, theta, phi) -> np.ndarray:
    """All complex harmonics up to ``l_max``.

    Returns an array ``Y[l, m + l_max, ...]``; entries with |m| > l are zero.
    ``theta`` is the polar angle, ``phi`` the azimuth.
    """
    if l_max < 0:
        raise InvalidArgument(f"l_max must be >= 0, got {l_max}")
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    P = _legendre_normalized(l_max, np.cos(theta))
    Y = np.zeros((l_max + 1, 2 * l_max + 1) + np.broadcast(theta, phi).shape, dtype=complex)
    for m in range(l_max + 1):
        e = np.exp(1j * m * phi)
        sign = -1.0 if m % 2 else 1.0
        for l in range(m, l_max + 1):
            Y[l, l_max + m] = P[l, m] * e
            if m:
                Y[l, l_max - m] = sign * np.conj(Y[l, l_max + m])
    return Y


def sph_harm(l: int, m: int, theta, phi):
    """Orthonormal complex spherical harmonic ``Y_l^m(theta, phi)``."""
    if l < 0 or abs(m) > l:
        raise InvalidArgument(f"need |m| <= l, got l={l}, m={m}")
    Y = sph_harm_table(l, theta, phi)[l, l + m]
    return complex(Y) if np.ndim(Y) == 0 else Y


class KappaTable(Mapping):
    """Sparse coefficients of ``[(P1 x P2) . P3]**2`` in products of harmonics.

    Keys are sextuples ``(l1, m1, l2, m2, l3, m3)``; missing keys read as 0.
    """

    def __init__(self, entries):
        self._entries = dict(entries)

    def __getitem__(self, key):
        return self._entries.get(tuple(key), 0.0)

    def __contains__(self, key):
        return tuple(key) in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def evaluate(self, omega1, omega2, omega3) -> complex:
        """Sum of kappa * Y * Y * Y at three ``(theta, phi)`` directions."""
        Ys = [sph_harm_table(2, *om) for om in (omega1, omega2, omega3)]
        total = 0.0
        for (l1, m1, l2, m2, l3, m3), k in self._entries.items():
            total = total + k * Ys[0][l1, 2 + m1] * Ys[1][l2, 2 + m2] * Ys[2][l3, 2 + m3]
        return total


def _build_kappa():
    c = math.pi**1.5
    groups = [
        (16 * c / 9, [(0, 0, 0, 0, 0, 0)]),
        (16 / 15 * math.sqrt(2 / 15) * c, [
            (2, -1, 2, -1, 2, 2), (2, -2, 2, 1, 2, 1), (2, 1, 2, -2, 2, 1),
            (2, -1, 2, 2, 2, -1), (2, 2, 2, -1, 2, -1), (2, 1, 2, 1, 2, -2),
        ]),
        (16 * c / 45, [
            (0, 0, 2, -1, 2, 1), (2, -1, 0, 0, 2, 1), (0, 0, 2, 1, 2, -1),
            (2, 1, 0, 0, 2, -1), (2, -1, 2, 1, 0, 0), (2, 1, 2, -1, 0, 0),
        ]),
        (32 * c / (45 * math.sqrt(5)), [(2, 0, 2, 0, 2, 0)]),
        (-16 * c / (45 * math.sqrt(5)), [
            (2, -1, 2, 0, 2, 1), (2, 0, 2, -1, 2, 1), (2, -1, 2, 1, 2, 0),
            (2, 1, 2, -1, 2, 0), (2, 0, 2, 1, 2, -1), (2, 1, 2, 0, 2, -1),
        ]),
        (-32 * c / (45 * math.sqrt(5)), [
            (2, -2, 2, 0, 2, 2), (2, 0, 2, -2, 2, 2), (2, -2, 2, 2, 2, 0),
            (2, 2, 2, -2, 2, 0), (2, 0, 2, 2, 2, -2), (2, 2, 2, 0, 2, -2),
        ]),
        (-16 * c / 45, [
            (0, 0, 2, -2, 2, 2), (2, -2, 0, 0, 2, 2), (0, 0, 2, 0, 2, 0),
            (2, 0, 0, 0, 2, 0), (0, 0, 2, 2, 2, -2), (2, 2, 0, 0, 2, -2),
            (2, -2, 2, 2, 0, 0), (2, 0, 2, 0, 0, 0), (2, 2, 2, -2, 0, 0),
        ]),
    ]
    return KappaTable({key: value for value, keys in groups for key in keys})


_KAPPA = _build_kappa()


def kappa_table() -> KappaTable:
    return _KAPPA
