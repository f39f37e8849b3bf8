import numpy as np
import pytest
from hypothesis import given, strategies as st

from spherebounds.core import (
    Configuration, InvalidArgument, ParseError, Weights, load_configuration, load_weights,
    perturb, platonic, sample_uniform, save_configuration, save_weights,
)


def test_single_sample_is_unit():
    c = sample_uniform(1, 3, 7)
    assert c.n == 1 and c.dim == 3
    assert abs(np.linalg.norm(c.points[0]) - 1) <= 1e-12


def test_sampling_is_deterministic():
    a = sample_uniform(5, 3, 7)
    b = sample_uniform(5, 3, 7)
    assert np.array_equal(a.points, b.points)


def test_sample_mean_is_small():
    # 3 sigma of the mean-vector norm for n = 10000 on S^2 is well below 0.05
    c = sample_uniform(10000, 3, 1)
    assert np.linalg.norm(c.points.mean(axis=0)) < 0.05


@pytest.mark.parametrize("n,d", [(0, 3), (3, 1), (-2, 3)])
def test_sample_rejects_bad_arguments(n, d):
    with pytest.raises(InvalidArgument):
        sample_uniform(n, d, 0)


@given(st.integers(1, 40), st.integers(2, 6), st.integers(0, 2**31))
def test_construction_normalizes(n, d, seed):
    c = sample_uniform(n, d, seed)
    assert np.all(np.abs(np.linalg.norm(c.points, axis=1) - 1) <= 1e-12)


def test_configuration_is_immutable(octahedron):
    with pytest.raises(ValueError):
        octahedron.points[0, 0] = 2.0


def test_zero_row_rejected():
    with pytest.raises(InvalidArgument):
        Configuration([[1, 0, 0], [0, 0, 0]])


def test_perturb_zero_sigma_is_identity(octahedron):
    assert perturb(octahedron, 0.0, 3) is octahedron


def test_perturb_small_sigma(octahedron):
    p = perturb(octahedron, 1e-6, 3)
    cosang = np.clip(np.sum(p.points * octahedron.points, axis=1), -1, 1)
    assert np.max(np.arccos(cosang)) < 1e-4
    assert np.all(np.abs(np.linalg.norm(p.points, axis=1) - 1) <= 1e-12)


def test_perturb_negative_sigma(octahedron):
    with pytest.raises(InvalidArgument):
        perturb(octahedron, -1.0, 0)


def test_load_simple():
    c = load_configuration("1 0 0\n0 1 0\n")
    assert c.n == 2 and c.dim == 3


def test_load_skips_comments_and_blank_lines():
    c = load_configuration("# header\n\n1 0\n# mid\n0 -1\n")
    assert c.n == 2 and c.dim == 2


@pytest.mark.parametrize("text,line", [
    ("0 0 0\n", 1),
    ("1 0 0\n0 1\n", 2),
    ("1 0 0\n0 x 1\n", 2),
    ("1 0 0\n0 0 1.01\n", 2),
])
def test_load_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as exc:
        load_configuration(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


def test_load_renormalizes_within_tolerance():
    c = load_configuration("1.0000005 0 0\n")
    assert c.points[0, 0] == 1.0


def test_round_trip():
    c = sample_uniform(100, 3, 1)
    back = load_configuration(save_configuration(c, header="N=100"))
    assert np.max(np.abs(back.points - c.points)) <= 1e-15


def test_weights_round_trip():
    w = Weights.vector(np.arange(12.0).reshape(4, 3))
    back = load_weights(save_weights(w), 4)
    assert back.kind == "vector" and np.array_equal(back.values, w.values)
    s = load_weights("1\n2\n3\n")
    assert s.kind == "scalar" and s.total() == 36.0


def test_weights_length_checked():
    with pytest.raises(ParseError):
        load_weights("1\n2\n", 3)


@pytest.mark.parametrize("name,n", [("tetrahedron", 4), ("octahedron", 6), ("cube", 8),
                                    ("icosahedron", 12), ("dodecahedron", 20)])
def test_platonic_solids_are_regular(name, n):
    c = platonic(name)
    assert c.n == n
    G = c.gram()
    nearest = np.sort(G, axis=1)[:, -2]
    assert np.ptp(nearest) < 1e-12
