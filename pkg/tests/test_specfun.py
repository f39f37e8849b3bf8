import math

import numpy as np
import pytest
from numpy.polynomial import legendre
from scipy import integrate, special

from spherebounds.core import InvalidArgument
from spherebounds.specfun import (
    addition_poly, double_factorial, gamma_lk, gegenbauer, harmonic_dimension, kappa_table,
    power_expansion, sph_harm, sph_harm_table, sphere_area, uniform_fp_coeff,
)


def test_gegenbauer_examples():
    assert np.allclose(gegenbauer(0, 0.5).coef, [1.0])
    assert np.allclose(gegenbauer(2, 0.5).coef, [-0.5, 0, 1.5])
    assert np.allclose(gegenbauer(3, 1.0).coef, [0, -4, 0, 8])


@pytest.mark.parametrize("l", range(0, 13))
@pytest.mark.parametrize("nu", [0.5, 1.0, 1.5, 2.0, 2.7])
def test_gegenbauer_against_scipy(l, nu):
    t = np.linspace(-1, 1, 41)
    p = gegenbauer(l, nu)
    assert p.degree() == l
    assert np.allclose(p(t), special.eval_gegenbauer(l, nu, t), rtol=1e-12, atol=1e-12)


def test_gegenbauer_preconditions():
    with pytest.raises(InvalidArgument):
        gegenbauer(2, 0.0)


def test_addition_poly_examples():
    assert np.allclose(addition_poly(0, 3).coef, [1 / (4 * np.pi)])
    assert np.allclose(addition_poly(2, 3).coef, 5 / (4 * np.pi) * np.array([-0.5, 0, 1.5]))


@pytest.mark.parametrize("l,d", [(l, d) for l in range(7) for d in (2, 3, 4, 5, 6)])
def test_addition_poly_trace(l, d):
    # sum_m |Y_lm(x)|^2 = dim(H_l) / area on the diagonal
    assert math.isclose(addition_poly(l, d)(1.0), harmonic_dimension(l, d) / sphere_area(d),
                        rel_tol=1e-12)


def test_addition_poly_matches_harmonics():
    rng = np.random.default_rng(0)
    for l in range(9):
        F = addition_poly(l, 3)
        th = np.arccos(rng.uniform(-1, 1, (50, 2)))
        ph = rng.uniform(0, 2 * np.pi, (50, 2))
        Yx = sph_harm_table(l, th[:, 0], ph[:, 0])[l]
        Yy = sph_harm_table(l, th[:, 1], ph[:, 1])[l]
        lhs = np.sum(np.conj(Yx) * Yy, axis=0)
        x = np.stack([np.sin(th[:, 0]) * np.cos(ph[:, 0]), np.sin(th[:, 0]) * np.sin(ph[:, 0]), np.cos(th[:, 0])], 1)
        y = np.stack([np.sin(th[:, 1]) * np.cos(ph[:, 1]), np.sin(th[:, 1]) * np.sin(ph[:, 1]), np.cos(th[:, 1])], 1)
        t = np.sum(x * y, axis=1)
        assert np.allclose(lhs, F(t), atol=1e-12)


def test_harmonic_dimension_values():
    assert [harmonic_dimension(l, 3) for l in range(5)] == [1, 3, 5, 7, 9]
    assert [harmonic_dimension(l, 2) for l in range(4)] == [1, 2, 2, 2]
    assert [harmonic_dimension(l, 4) for l in range(4)] == [1, 4, 9, 16]


def test_power_expansion_examples():
    assert math.isclose(power_expansion(1, 3).B[0], 4 * math.pi / 3, rel_tol=1e-14)
    assert math.isclose(power_expansion(0, 3).B[0], 4 * math.pi, rel_tol=1e-14)
    assert math.isclose(power_expansion(2, 3).B[1], 4 * math.pi / 3, rel_tol=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("l", range(13))
def test_power_expansion_identity(l, d):
    pe = power_expansion(l, d)
    t = np.linspace(-1, 1, 101)
    assert np.max(np.abs(t**l - pe.polynomial()(t))) <= 1e-10
    assert all(b >= 0 for b in pe.B)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("l", range(0, 13, 2))
def test_power_expansion_matches_closed_form(l, d):
    b = power_expansion(l, d).B[l // 2] / sphere_area(d)
    assert math.isclose(b, uniform_fp_coeff(l, d), rel_tol=1e-12)


def _mean_power(l, d):
    """E[(x.y)^l] for independent uniform x, y on S^{d-1}, by quadrature."""
    if d == 2:
        val, _ = integrate.quad(lambda th: math.cos(th) ** l, 0, math.pi)
        return val / math.pi
    w = lambda t: (1 - t * t) ** ((d - 3) / 2)
    num, _ = integrate.quad(lambda t: t**l * w(t), -1, 1, epsabs=1e-14, epsrel=1e-13)
    den, _ = integrate.quad(w, -1, 1, epsabs=1e-14, epsrel=1e-13)
    return num / den


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 9])
@pytest.mark.parametrize("l", range(0, 11))
def test_uniform_coeff_against_quadrature(l, d):
    assert math.isclose(uniform_fp_coeff(l, d), _mean_power(l, d), rel_tol=1e-9, abs_tol=1e-12)


def test_uniform_coeff_examples():
    assert uniform_fp_coeff(2, 3) == pytest.approx(1 / 3, rel=1e-15)
    assert uniform_fp_coeff(2, 2) == pytest.approx(1 / 2, rel=1e-15)
    assert uniform_fp_coeff(3, 5) == 0.0
    assert uniform_fp_coeff(4, 3) == pytest.approx(1 / 5, rel=1e-15)


@pytest.mark.parametrize("l", range(0, 13, 2))
def test_uniform_coeff_circle_binomial(l):
    assert math.isclose(uniform_fp_coeff(l, 2), math.comb(l, l // 2) / 2**l, rel_tol=1e-14)


def test_uniform_coeff_large_arguments_switch_smoothly():
    # exact and log-gamma branches agree across the switch
    for l, d in [(28, 2), (28, 3), (40, 5)]:
        exact = float(double_factorial(l - 1) * double_factorial(d - 2)) / double_factorial(l + d - 2)
        assert math.isclose(uniform_fp_coeff(l, d), exact, rel_tol=1e-12)


def test_gamma_examples():
    assert gamma_lk(0, 0) == pytest.approx(4 * math.pi, rel=1e-15)
    assert gamma_lk(2, 0) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert gamma_lk(2, 1) == 0.0
    with pytest.raises(InvalidArgument):
        gamma_lk(2, 3)


@pytest.mark.parametrize("l", range(13))
def test_gamma_matches_power_expansion(l):
    B = power_expansion(l, 3).B
    for k in range(l // 2 + 1):
        assert math.isclose(gamma_lk(l, l - 2 * k), B[k], rel_tol=1e-12)


@pytest.mark.parametrize("l", range(13))
def test_gamma_gives_legendre_coefficients(l):
    leg = legendre.poly2leg([0] * l + [1])
    for j in range(l + 1):
        assert math.isclose(gamma_lk(l, j) * (2 * j + 1) / (4 * math.pi), leg[j], abs_tol=1e-12)


def test_sph_harm_examples():
    assert sph_harm(0, 0, 0.3, 1.0) == pytest.approx(1 / math.sqrt(4 * math.pi))
    th = 0.7
    assert sph_harm(1, 0, th, 2.0) == pytest.approx(math.sqrt(3 / (4 * math.pi)) * math.cos(th))
    with pytest.raises(InvalidArgument):
        sph_harm(1, 2, 0.1, 0.1)


def test_sph_harm_against_scipy():
    rng = np.random.default_rng(1)
    th = np.arccos(rng.uniform(-1, 1, 30))
    ph = rng.uniform(0, 2 * np.pi, 30)
    Y = sph_harm_table(10, th, ph)
    for l in range(11):
        for m in range(-l, l + 1):
            ref = special.sph_harm_y(l, m, th, ph)
            assert np.allclose(Y[l, 10 + m], ref, atol=1e-12)


def test_addition_theorem_legendre():
    rng = np.random.default_rng(2)
    x = rng.standard_normal((50, 3)); x /= np.linalg.norm(x, axis=1)[:, None]
    y = rng.standard_normal((50, 3)); y /= np.linalg.norm(y, axis=1)[:, None]
    ang = lambda p: (np.arccos(p[:, 2]), np.arctan2(p[:, 1], p[:, 0]))
    Yx, Yy = sph_harm_table(8, *ang(x)), sph_harm_table(8, *ang(y))
    t = np.sum(x * y, axis=1)
    for l in range(9):
        lhs = np.sum(np.conj(Yx[l]) * Yy[l], axis=0)
        assert np.allclose(lhs, (2 * l + 1) / (4 * np.pi) * special.eval_legendre(l, t), atol=1e-12)


def test_kappa_entries():
    k = kappa_table()
    c = math.pi**1.5
    assert k[0, 0, 0, 0, 0, 0] == pytest.approx(16 * c / 9)
    assert k[2, 0, 2, 0, 2, 0] == pytest.approx(32 * c / (45 * math.sqrt(5)))
    assert k[1, 0, 0, 0, 0, 0] == 0
    assert len(k) == 35
    # every entry conserves total m
    assert all(m1 + m2 + m3 == 0 for (_, m1, _, m2, _, m3) in k)


def test_kappa_pointwise_identity():
    rng = np.random.default_rng(3)
    k = kappa_table()
    for _ in range(100):
        om = [(math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi)) for _ in range(3)]
        P = [np.array([math.sin(t) * math.cos(p), math.sin(t) * math.sin(p), math.cos(t)]) for t, p in om]
        lhs = np.dot(np.cross(P[0], P[1]), P[2]) ** 2
        rhs = k.evaluate(*om)
        assert abs(rhs - lhs) <= 1e-10
