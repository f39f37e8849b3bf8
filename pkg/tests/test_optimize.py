import math

import numpy as np
import pytest

from spherebounds.core import Configuration, InfiniteEnergyError, InvalidArgument, platonic, sample_uniform
from spherebounds.optimize import (
    MinimizeOptions, energy_gradient, ensemble, local_minimize, member_seeds,
)
from spherebounds.riesz import calibrated_bound, delta_star, riesz_energy

ICOSAHEDRON_ENERGY = 49.165253058


def tangent_basis(p):
    a = np.array([1.0, 0, 0]) if abs(p[0]) < 0.9 else np.array([0, 1.0, 0])
    u = np.cross(p, a)
    u /= np.linalg.norm(u)
    return u, np.cross(p, u)


def fd_gradient(config, s, h=1e-6):
    P = config.points
    g = np.zeros_like(P)
    for i in range(len(P)):
        for e in tangent_basis(P[i]):
            plus, minus = P.copy(), P.copy()
            plus[i] = P[i] + h * e
            minus[i] = P[i] - h * e
            dE = riesz_energy(Configuration(plus), s) - riesz_energy(Configuration(minus), s)
            g[i] += dE / (2 * h) * e
    return g


def test_antipodal_gradient_vanishes():
    g = energy_gradient(Configuration([[0, 0, 1.0], [0, 0, -1.0]]), 1)
    assert np.max(np.abs(g)) <= 1e-15


@pytest.mark.parametrize("s", [1.0, 2.0, -1.0, 0.5])
def test_gradient_matches_finite_differences(s):
    c = sample_uniform(20, 3, 3)
    g = energy_gradient(c, s)
    fd = fd_gradient(c, s)
    assert np.linalg.norm(g - fd) / np.linalg.norm(g) < 1e-6


def test_gradient_is_tangent():
    c = sample_uniform(30, 3, 4)
    g = energy_gradient(c, 1)
    assert np.max(np.abs(np.sum(g * c.points, axis=1))) <= 1e-14


def test_gradient_coincident_points():
    with pytest.raises(InfiniteEnergyError):
        energy_gradient(Configuration([[1, 0, 0], [1, 0, 0], [0, 0, 1]]), 1)


def test_two_points_go_antipodal():
    r = local_minimize(sample_uniform(2, 3, 0))
    assert r.converged
    assert np.dot(*r.config.points) == pytest.approx(-1, abs=1e-8)
    assert r.energy == pytest.approx(0.5, abs=1e-8)


def test_three_points_equilateral():
    r = local_minimize(sample_uniform(3, 3, 1))
    assert r.energy == pytest.approx(math.sqrt(3), abs=1e-8)
    # coplanar with the center: triple product vanishes
    assert abs(np.linalg.det(r.config.points)) < 1e-7


def test_four_points_tetrahedron():
    r = local_minimize(sample_uniform(4, 3, 2))
    assert r.energy == pytest.approx(6 / math.sqrt(8 / 3), abs=1e-8)


def test_twelve_points_multistart():
    energies = [local_minimize(sample_uniform(12, 3, 100 + k)).energy for k in range(20)]
    assert max(energies) - min(energies) <= 1e-9
    assert energies[0] == pytest.approx(ICOSAHEDRON_ENERGY, abs=1e-8)


def test_result_invariants():
    opts = MinimizeOptions()
    r = local_minimize(sample_uniform(30, 3, 8), opts)
    assert r.energy == pytest.approx(riesz_energy(r.config, 1), rel=1e-12)
    assert r.converged and r.final_grad_norm <= opts.tolerance(30)
    assert np.all(np.abs(np.linalg.norm(r.config.points, axis=1) - 1) <= 1e-12)
    trace = np.array(r.energy_trace)
    assert np.all(np.diff(trace) <= 1e-13 * abs(trace[0]))
    assert r.energy > calibrated_bound(30, delta_star(30))


def test_other_exponents():
    r = local_minimize(sample_uniform(4, 3, 5), MinimizeOptions(s=2.0))
    assert r.converged
    assert r.energy == pytest.approx(6 / (8 / 3), abs=1e-8)


def test_max_iters_reports_not_converged():
    r = local_minimize(sample_uniform(40, 3, 1), MinimizeOptions(max_iters=3))
    assert not r.converged and r.iterations == 3 and r.message == "max_iters reached"


def test_options_validation():
    with pytest.raises(InvalidArgument):
        MinimizeOptions(max_iters=0)
    with pytest.raises(InvalidArgument):
        MinimizeOptions(grad_tol=0.0)


def test_ensemble_single_basin():
    base = local_minimize(platonic("icosahedron"))
    res = ensemble(base.config, 10, 1e-3, 7)
    assert len(res) == 10
    es = [r.energy for r in res]
    assert max(es) - min(es) <= 1e-8
    assert es == sorted(es)


def test_ensemble_deterministic_and_worker_independent():
    base = local_minimize(sample_uniform(20, 3, 0)).config
    a = ensemble(base, 4, 0.1, 3)
    b = ensemble(base, 4, 0.1, 3, workers=2)
    assert [r.seed for r in a] == [r.seed for r in b]
    for x, y in zip(a, b):
        assert np.array_equal(x.config.points, y.config.points)


def test_member_seeds_distinct():
    s = member_seeds(5, 100)
    assert len(set(s)) == 100 and s == member_seeds(5, 100)


def test_ensemble_validation():
    c = sample_uniform(5, 3, 0)
    with pytest.raises(InvalidArgument):
        ensemble(c, 0, 0.1, 0)
    with pytest.raises(InvalidArgument):
        ensemble(c, 2, 0.0, 0)
