"""Spherical Voronoi diagrams on S^2 from the convex hull of the generators.

For points on the sphere the hull facets are the Delaunay triangles, and
each facet's outward unit normal is the Voronoi vertex it contributes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .core import Configuration, DegeneracyError, InfiniteEnergyError, InvalidArgument, Weights
from .frames import BoundReport, fp_bound_report

__all__ = [
    "VoronoiDiagram",
    "spherical_voronoi",
    "strain",
    "cell_energies",
    "defect_weights",
    "spherical_polygon_area",
    "generator_inside_cell",
    "diagram_to_json",
    "bound_diagnostics",
]

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class VoronoiDiagram:
    """Per-cell data for a spherical Voronoi diagram.

    ``cells[i]`` lists indices into ``vertices``, counterclockwise seen from
    outside the sphere.  ``strain_vectors`` are ``P_i - c_i`` with ``c_i``
    the vertex mean of cell i, radially projected onto the sphere unless the
    diagram was built with ``project_centroid=False``; ``centroid_radius``
    keeps ``|c_i|`` (before projection) for reference.
    """

    config: Configuration
    vertices: np.ndarray
    triangles: np.ndarray
    cells: tuple
    sides: np.ndarray
    strain_vectors: np.ndarray
    centroid_radius: np.ndarray
    energies: np.ndarray
    areas: np.ndarray
    project_centroid: bool = True
    meta: dict = field(default_factory=dict)

    @property
    def charges(self) -> np.ndarray:
        return 6 - self.sides

    @property
    def strain(self) -> np.ndarray:
        return np.linalg.norm(self.strain_vectors, axis=1)

    @property
    def n_defect(self) -> int:
        return int(np.count_nonzero(self.sides != 6))

    def cell_loop(self, i) -> np.ndarray:
        return self.vertices[list(self.cells[i])]


def _orient(a, b, c):
    return float(np.dot(a, np.cross(b, c)))


def _hull_triangles(P):
    try:
        hull = ConvexHull(P)
    except QhullError as exc:
        raise DegeneracyError(f"convex hull failed: {str(exc).splitlines()[0]}") from None
    if len(hull.vertices) != len(P):
        missing = sorted(set(range(len(P))) - set(hull.vertices.tolist()))
        raise DegeneracyError("points missing from the hull (coincident points?)", missing)
    tri = np.array(hull.simplices)
    a, b, c = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
    normal = np.cross(b - a, c - a)
    # qhull's facet normals point away from the hull interior, which need
    # not contain the origin when all points share a hemisphere
    flip = np.einsum("ij,ij->i", normal, hull.equations[:, :3]) < 0
    tri[flip] = tri[flip][:, [0, 2, 1]]
    return tri


def _check_cocircular(P, tri):
    """Two facets sharing an edge must not lie on one circle."""
    edge_owner = {}
    for t, (a, b, c) in enumerate(tri):
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            edge_owner[(u, v)] = (t, w)
    for (u, v), (t, w) in edge_owner.items():
        if u > v:
            continue
        other = edge_owner.get((v, u))
        if other is None:
            raise DegeneracyError("hull is not a closed triangulation", (u, v))
        x = other[1]
        a, b, c = (P[k] for k in tri[t])
        # volume of (a, b, c, x); zero means four points on one circle
        vol = _orient(b - a, c - a, P[x] - a)
        if abs(vol) <= DEGENERACY_TOL:
            raise DegeneracyError("four cocircular points", sorted({u, v, w, x}))


def spherical_polygon_area(loop, center=None) -> float:
    """Signed area of a spherical polygon (counterclockwise positive).

    Sums the triangles ``(center, v_k, v_k+1)`` with the
    Van Oosterom-Strackee solid-angle formula.
    """
    loop = np.asarray(loop, dtype=float)
    if center is None:
        center = loop.mean(axis=0)
        center = center / np.linalg.norm(center)
    a = np.asarray(center, dtype=float)
    b = loop
    c = np.roll(loop, -1, axis=0)
    num = np.einsum("j,ij->i", a, np.cross(b, c))
    den = 1.0 + b @ a + np.einsum("ij,ij->i", b, c) + c @ a
    return float(np.sum(2.0 * np.arctan2(num, den)))


def generator_inside_cell(diagram: VoronoiDiagram, i: int) -> bool:
    loop = diagram.cell_loop(i)
    p = diagram.config.points[i]
    nxt = np.roll(loop, -1, axis=0)
    return bool(np.all(np.einsum("ij,j->i", np.cross(loop, nxt), p) > 0))


def cell_energies(config: Configuration, s: float = 1.0) -> np.ndarray:
    """``U_i = (1/2) sum_{j != i} 1/r_ij**s``; the cells share each pair energy evenly."""
    P = config.points
    D = P[:, None, :] - P[None, :, :]
    r = np.sqrt(np.einsum("ijk,ijk->ij", D, D))
    np.fill_diagonal(r, np.inf)
    if np.any(r == 0.0) and s > 0:
        raise InfiniteEnergyError("coincident points give infinite cell energy")
    return 0.5 * math.copysign(1.0, s) * np.sum(r ** (-s), axis=1)


def _cell_loops(n, tri):
    succ = {}
    for t, (a, b, c) in enumerate(tri):
        for u, v, w in ((a, b, c), (b, c, a), (c, a, b)):
            succ[(u, v)] = (w, t)
    start = {}
    for (u, v) in succ:
        start.setdefault(u, v)
    loops = []
    for i in range(n):
        first = start[i]
        j = first
        loop = []
        while True:
            k, t = succ[(i, j)]
            loop.append(t)
            j = k
            if j == first:
                break
            if len(loop) > len(tri):
                raise DegeneracyError("cell walk did not close", (i,))
        loops.append(tuple(loop))
    return loops


def spherical_voronoi(config: Configuration, project_centroid: bool = True) -> VoronoiDiagram:
    """Build the diagram; raises ``DegeneracyError`` on cocircular or coincident points."""
    config.require_dim(3)
    if config.n < 4:
        raise InvalidArgument(f"need at least 4 points, got {config.n}")
    P = config.points
    tri = _hull_triangles(P)
    _check_cocircular(P, tri)
    a, b, c = P[tri[:, 0]], P[tri[:, 1]], P[tri[:, 2]]
    normal = np.cross(b - a, c - a)
    vertices = normal / np.linalg.norm(normal, axis=1)[:, None]
    loops = _cell_loops(config.n, tri)
    sides = np.array([len(lp) for lp in loops])
    means = np.array([vertices[list(lp)].mean(axis=0) for lp in loops])
    radius = np.linalg.norm(means, axis=1)
    centroids = means / radius[:, None] if project_centroid else means
    areas = np.array([spherical_polygon_area(vertices[list(lp)], P[i]) for i, lp in enumerate(loops)])
    return VoronoiDiagram(
        config=config,
        vertices=vertices,
        triangles=tri,
        cells=tuple(loops),
        sides=sides,
        strain_vectors=P - centroids,
        centroid_radius=radius,
        energies=cell_energies(config),
        areas=areas,
        project_centroid=project_centroid,
    )


def strain(diagram: VoronoiDiagram):
    """Per-cell strain scalars and vectors."""
    return diagram.strain, diagram.strain_vectors


def defect_weights(diagram: VoronoiDiagram) -> Weights:
    """0 for hexagonal cells, 1 for every other cell."""
    return Weights.scalar((diagram.sides != 6).astype(float))


def diagram_to_json(diagram: VoronoiDiagram) -> dict:
    """Plain-data export: one record per cell plus the global checks."""
    cells = []
    for i, lp in enumerate(diagram.cells):
        cells.append({
            "index": i,
            "point": diagram.config.points[i].tolist(),
            "sides": int(diagram.sides[i]),
            "charge": int(6 - diagram.sides[i]),
            "vertices": diagram.vertices[list(lp)].tolist(),
            "area": float(diagram.areas[i]),
            "strain": float(diagram.strain[i]),
            "strain_vector": diagram.strain_vectors[i].tolist(),
            "centroid_radius": float(diagram.centroid_radius[i]),
            "energy": float(diagram.energies[i]),
        })
    return {
        "n": diagram.config.n,
        "total_charge": int(diagram.charges.sum()),
        "total_area": float(diagram.areas.sum()),
        "n_defect": diagram.n_defect,
        "project_centroid": diagram.project_centroid,
        "cells": cells,
    }


def bound_diagnostics(diagram: VoronoiDiagram, l: int = 2) -> dict[str, BoundReport]:
    """Weighted frame-potential reports built from per-cell quantities.

    ``energy`` and ``strain`` use the cell energies and strain scalars as
    scalar weights, ``strain_vector`` the strain vectors, ``defect`` the 0/1
    non-hexagonal indicator.
    """
    cfg = diagram.config
    return {
        "energy": fp_bound_report(cfg, l, Weights.scalar(diagram.energies)),
        "strain": fp_bound_report(cfg, l, Weights.scalar(diagram.strain)),
        "strain_vector": fp_bound_report(cfg, l, Weights.vector(diagram.strain_vectors)),
        "defect": fp_bound_report(cfg, l, defect_weights(diagram)),
    }
