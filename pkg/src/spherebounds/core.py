"""Point configurations on the unit sphere, weights, sampling and text I/O."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Configuration",
    "Weights",
    "InvalidArgument",
    "UnsupportedDimension",
    "ParseError",
    "InfiniteEnergyError",
    "DegeneracyError",
    "sample_uniform",
    "perturb",
    "load_configuration",
    "save_configuration",
    "load_weights",
    "save_weights",
    "as_weights",
    "platonic",
]

LOAD_NORM_TOL = 1e-6


class InvalidArgument(ValueError):
    pass


class UnsupportedDimension(InvalidArgument):
    pass


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InfiniteEnergyError(FloatingPointError):
    """Raised when coincident points make a positive-exponent energy diverge."""


class DegeneracyError(RuntimeError):
    def __init__(self, message, points=()):
        self.points = tuple(int(p) for p in points)
        if self.points:
            message = f"{message} (points {list(self.points)})"
        super().__init__(message)


def _readonly(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Configuration:
    """An ordered set of N unit vectors in R^d.

    Rows are renormalized on construction; a zero row is rejected.
    Instances are immutable, and ``points`` is a read-only array of shape
    ``(N, d)``.
    """

    points: np.ndarray

    def __post_init__(self):
        p = np.array(self.points, dtype=float)
        if p.ndim == 1:
            p = p[None, :]
        if p.ndim != 2:
            raise InvalidArgument("points must be a 2-D array of shape (N, d)")
        if p.shape[0] < 1:
            raise InvalidArgument("a configuration needs at least one point")
        if p.shape[1] < 2:
            raise InvalidArgument("dimension must be at least 2")
        if not np.all(np.isfinite(p)):
            raise InvalidArgument("points must be finite")
        norms = np.linalg.norm(p, axis=1)
        if np.any(norms == 0.0):
            bad = np.flatnonzero(norms == 0.0)
            raise InvalidArgument(f"zero-norm point(s) at index {bad.tolist()}")
        object.__setattr__(self, "points", _readonly(p / norms[:, None]))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def gram(self) -> np.ndarray:
        """Matrix of pairwise dot products, clipped to [-1, 1]."""
        return np.clip(self.points @ self.points.T, -1.0, 1.0)

    def rotated(self, rotation) -> "Configuration":
        return Configuration(self.points @ np.asarray(rotation, dtype=float).T)

    def require_dim(self, d: int):
        if self.dim != d:
            raise UnsupportedDimension(f"operation requires d={d}, got d={self.dim}")


@dataclass(frozen=True, eq=False)
class Weights:
    """Per-point scalar weights ``f_i`` or vector weights ``f_i`` in R^m."""

    values: np.ndarray
    kind: str = field(default="")

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        kind = self.kind or ("scalar" if v.ndim == 1 else "vector")
        if kind == "scalar" and v.ndim != 1:
            raise InvalidArgument("scalar weights must be a 1-D array")
        if kind == "vector" and v.ndim != 2:
            raise InvalidArgument("vector weights must be a 2-D array (N, m)")
        if kind not in ("scalar", "vector"):
            raise InvalidArgument(f"unknown weight kind {kind!r}")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "kind", kind)

    @classmethod
    def scalar(cls, values):
        return cls(values, "scalar")

    @classmethod
    def vector(cls, values):
        return cls(values, "vector")

    @classmethod
    def unit(cls, n):
        return cls(np.ones(n), "scalar")

    def __len__(self):
        return self.values.shape[0]

    def total(self) -> float:
        """Weight normalization: (sum f_i)^2 or sum_ij f_i . f_j."""
        s = self.values.sum(axis=0)
        return float(np.dot(s, s)) if self.kind == "vector" else float(s) ** 2

    def check_for(self, config: Configuration):
        if len(self) != config.n:
            raise InvalidArgument(
                f"weights have length {len(self)} but configuration has {config.n} points"
            )


def as_weights(w, n=None) -> Weights:
    if w is None:
        if n is None:
            raise InvalidArgument("unit weights need a point count")
        return Weights.unit(n)
    if isinstance(w, Weights):
        return w
    return Weights(w)


def sample_uniform(n: int, d: int, seed: int) -> Configuration:
    """Draw ``n`` i.i.d. rotation-invariant points on S^{d-1}."""
    if n < 1 or d < 2:
        raise InvalidArgument(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, d))
    # A standard normal vector is never exactly zero in practice; redraw anyway.
    while True:
        zero = np.linalg.norm(x, axis=1) == 0.0
        if not zero.any():
            break
        x[zero] = rng.standard_normal((int(zero.sum()), d))
    return Configuration(x)


def perturb(config: Configuration, sigma: float, seed: int) -> Configuration:
    """Gaussian displacement of scale ``sigma`` per coordinate, then renormalize."""
    if sigma < 0:
        raise InvalidArgument(f"sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return config
    rng = np.random.default_rng(seed)
    return Configuration(config.points + sigma * rng.standard_normal(config.points.shape))


def _parse_rows(text, what):
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            row = [float(f) for f in fields]
        except ValueError:
            raise ParseError(f"non-numeric token in {what} row {line!r}", lineno) from None
        if not all(np.isfinite(row)):
            raise ParseError(f"non-finite value in {what} row", lineno)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} fields, found {len(row)}", lineno)
        rows.append((lineno, row))
    return rows


def load_configuration(text: str) -> Configuration:
    """Parse the whitespace-separated point format.

    One point per line, ``#`` comment lines ignored, dimension taken from
    the first data line.  Rows whose norm is within 1e-6 of one are
    renormalized; anything further off is rejected.
    """
    rows = _parse_rows(text, "point")
    if not rows:
        raise ParseError("no points found")
    if len(rows[0][1]) < 2:
        raise ParseError("points need at least 2 coordinates", rows[0][0])
    for lineno, row in rows:
        norm = float(np.linalg.norm(row))
        if abs(norm - 1.0) > LOAD_NORM_TOL:
            raise ParseError(f"point norm {norm!r} deviates from 1 by more than 1e-6", lineno)
    return Configuration(np.array([r for _, r in rows]))


def save_configuration(config: Configuration, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend("# " + h for h in header.splitlines())
    lines.extend(" ".join(repr(float(x)) for x in p) for p in config.points)
    return "\n".join(lines) + "\n"


def load_weights(text: str, n: int | None = None) -> Weights:
    """One scalar (or m fields for vector weights) per line, same order as the points."""
    rows = _parse_rows(text, "weight")
    if not rows:
        raise ParseError("no weights found")
    values = np.array([r for _, r in rows])
    w = Weights.scalar(values[:, 0]) if values.shape[1] == 1 else Weights.vector(values)
    if n is not None and len(w) != n:
        raise ParseError(f"expected {n} weight rows, found {len(w)}")
    return w


def save_weights(w: Weights) -> str:
    v = w.values[:, None] if w.kind == "scalar" else w.values
    return "\n".join(" ".join(repr(float(x)) for x in row) for row in v) + "\n"


def platonic(name: str) -> Configuration:
    """Vertices of a Platonic solid (or a few other fixed test shapes) on S^2."""
    name = name.lower()
    if name == "tetrahedron":
        p = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
    elif name == "octahedron":
        p = np.vstack([np.eye(3), -np.eye(3)])
    elif name == "cube":
        p = np.array([[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)], dtype=float)
    elif name == "icosahedron":
        g = (1 + 5**0.5) / 2
        p = []
        for a in (-1, 1):
            for b in (-g, g):
                p += [[0, a, b], [a, b, 0], [b, 0, a]]
        p = np.array(p, dtype=float)
    elif name == "dodecahedron":
        g = (1 + 5**0.5) / 2
        p = [[x, y, z] for x in (-1, 1) for y in (-1, 1) for z in (-1, 1)]
        for a in (-1, 1):
            for b in (-1, 1):
                p += [[0, a / g, b * g], [a / g, b * g, 0], [b * g, 0, a / g]]
        p = np.array(p, dtype=float)
    else:
        raise InvalidArgument(f"unknown solid {name!r}")
    return Configuration(p)
