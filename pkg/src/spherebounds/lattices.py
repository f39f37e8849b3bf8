"""Observation windows cut from lattices, and their weighted frame potentials.

Window points are recentred on the window center and the center itself is
dropped if it is a lattice point (its direction is undefined).  The ball
is closed: points at distance exactly ``r`` are kept, with a relative
slack of 1e-12 so that shells landing on ``r`` are not lost to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidArgument
from .specfun import uniform_fp_coeff

__all__ = [
    "Lattice",
    "WindowSample",
    "ScanResult",
    "hexagonal_window",
    "cubic_window",
    "lattice_window",
    "window_fp",
    "window_delta",
    "window_deltas",
    "window_scan",
]

_REL_SLACK = 1e-12
HEX_A2 = np.array([0.5, math.sqrt(3) / 2])


@dataclass(frozen=True)
class Lattice:
    kind: str  # "hexagonal" or "cubic"
    spacing: float = 1.0

    def __post_init__(self):
        if self.kind not in ("hexagonal", "cubic"):
            raise InvalidArgument(f"unknown lattice {self.kind!r}")
        if not self.spacing > 0:
            raise InvalidArgument("spacing must be > 0")

    @property
    def dim(self) -> int:
        return 2 if self.kind == "hexagonal" else 3

    def cell_center(self) -> np.ndarray:
        """Default window center: a lattice point (hexagonal) or the cube-cell center."""
        if self.kind == "hexagonal":
            return np.zeros(2)
        return np.full(3, self.spacing / 2)

    def basis(self) -> np.ndarray:
        if self.kind == "hexagonal":
            return self.spacing * np.array([[1.0, 0.0], HEX_A2])
        return self.spacing * np.eye(3)


@dataclass(frozen=True, eq=False)
class WindowSample:
    dim: int
    points: np.ndarray
    r: float
    lattice: Lattice
    center: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _window(lattice: Lattice, r: float, center) -> WindowSample:
    if not r > 0:
        raise InvalidArgument("window radius must be > 0")
    center = np.asarray(center, dtype=float)
    if center.shape != (lattice.dim,):
        raise InvalidArgument(f"center must have {lattice.dim} coordinates")
    B = lattice.basis()
    # integer coefficient range that covers the ball around the center
    coeff = np.linalg.solve(B.T, center)
    reach = r / (lattice.spacing * (math.sqrt(3) / 2 if lattice.kind == "hexagonal" else 1.0))
    span = int(math.ceil(reach)) + 2
    axes = [np.arange(math.floor(c) - span, math.floor(c) + span + 1) for c in coeff]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, lattice.dim)
    pts = grid @ B - center
    dist = np.linalg.norm(pts, axis=1)
    keep = dist <= r * (1 + _REL_SLACK)
    keep &= dist > _REL_SLACK * max(r, lattice.spacing)
    pts = pts[keep]
    order = np.lexsort(pts.T[::-1])
    return WindowSample(lattice.dim, pts[order], float(r), lattice, center)


def hexagonal_window(r: float, spacing: float = 1.0, center=(0.0, 0.0)) -> WindowSample:
    """Triangular-lattice points within ``r`` of ``center`` (basis (1,0), (1/2, sqrt(3)/2))."""
    return _window(Lattice("hexagonal", spacing), r, center)


def cubic_window(r: float, spacing: float = 1.0, center=None) -> WindowSample:
    """Simple-cubic points within ``r`` of ``center``; defaults to the cell center."""
    lat = Lattice("cubic", spacing)
    return _window(lat, r, lat.cell_center() if center is None else center)


def lattice_window(lattice: Lattice, r: float, center=None) -> WindowSample:
    return _window(lattice, r, lattice.cell_center() if center is None else center)


def _directions_and_weights(ws: WindowSample, gamma: float):
    if gamma < 0:
        raise InvalidArgument("gamma must be >= 0")
    norms = np.linalg.norm(ws.points, axis=1)
    if np.any(norms == 0):
        raise InvalidArgument("window contains the origin")
    return ws.points / norms[:, None], (norms / ws.r) ** gamma


def window_fp(ws: WindowSample, gamma: float, l: int) -> float:
    """``sum_ij w_i w_j (u_i . u_j)**l`` with ``u = p/|p|`` and ``w = (|p|/r)**gamma``."""
    if l < 0:
        raise InvalidArgument("l must be >= 0")
    if ws.n == 0:
        return 0.0
    u, w = _directions_and_weights(ws, gamma)
    G = np.clip(u @ u.T, -1.0, 1.0)
    return float(w @ np.power(G, l) @ w)


def window_delta(ws: WindowSample, gamma: float, l: int) -> float:
    """``(FP - bound) / N**2``; nonnegative up to rounding, zero at saturation."""
    if ws.n == 0:
        raise InvalidArgument("empty window")
    u, w = _directions_and_weights(ws, gamma)
    bound = uniform_fp_coeff(l, ws.dim) * float(w.sum()) ** 2
    return (window_fp(ws, gamma, l) - bound) / ws.n**2


def window_deltas(ws: WindowSample, gammas, ells) -> np.ndarray:
    """``window_delta`` for every (gamma, l) pair, sharing one Gram matrix.

    Returns an array of shape ``(len(gammas), len(ells))``.
    """
    if ws.n == 0:
        raise InvalidArgument("empty window")
    ells = [int(l) for l in ells]
    if any(l < 0 for l in ells):
        raise InvalidArgument("l must be >= 0")
    u, _ = _directions_and_weights(ws, 0.0)
    W = np.stack([_directions_and_weights(ws, g)[1] for g in gammas])
    G = np.clip(u @ u.T, -1.0, 1.0)
    out = np.empty((len(W), len(ells)))
    Gl = np.ones_like(G)
    for l in range(max(ells, default=0) + 1):
        for j in (j for j, e in enumerate(ells) if e == l):
            fp = np.einsum("gi,ij,gj->g", W, Gl, W)
            out[:, j] = fp - uniform_fp_coeff(l, ws.dim) * W.sum(axis=1) ** 2
        Gl *= G
    return out / ws.n**2


@dataclass(frozen=True)
class ScanResult:
    centers: np.ndarray
    values: np.ndarray  # NaN where the window was empty or invalid
    errors: tuple  # (index, message) per failed center

    @property
    def _ok(self):
        return self.values[~np.isnan(self.values)]

    @property
    def min(self):
        return float(self._ok.min()) if self._ok.size else math.nan

    @property
    def max(self):
        return float(self._ok.max()) if self._ok.size else math.nan

    @property
    def mean(self):
        return float(self._ok.mean()) if self._ok.size else math.nan

    @property
    def std(self):
        return float(self._ok.std()) if self._ok.size else math.nan


def window_scan(lattice: Lattice, r: float, gamma: float, l: int, centers) -> ScanResult:
    """Evaluate ``window_delta`` for a window of radius ``r`` at each center."""
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    if centers.shape[0] == 0:
        raise InvalidArgument("need at least one center")
    values = np.full(centers.shape[0], math.nan)
    errors = []
    for k, c in enumerate(centers):
        try:
            values[k] = window_delta(_window(lattice, r, c), gamma, l)
        except InvalidArgument as exc:
            errors.append((k, str(exc)))
    return ScanResult(centers, values, tuple(errors))
