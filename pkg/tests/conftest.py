import numpy as np
import pytest
from hypothesis import settings

from spherebounds.core import Configuration, platonic

settings.register_profile("ci", max_examples=50, deadline=None)
settings.register_profile("fast", max_examples=10, deadline=None)
settings.load_profile("ci")

ACCEPTANCE_LINES = []


@pytest.fixture
def tetrahedron():
    return platonic("tetrahedron")


@pytest.fixture
def octahedron():
    return platonic("octahedron")


@pytest.fixture
def icosahedron():
    return platonic("icosahedron")


def random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def great_circle(n, tilt=0.3):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False) + 0.1
    p = np.stack([np.cos(t), np.sin(t), np.zeros(n)], axis=1)
    c, s = np.cos(tilt), np.sin(tilt)
    return Configuration(p @ np.array([[1, 0, 0], [0, c, -s], [0, s, c]]).T)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
