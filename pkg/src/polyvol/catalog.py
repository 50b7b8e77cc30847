"""Generated catalog of compact hyperbolic polyhedra.

Every entry is built from explicit Klein-ball vertex coordinates: the
rotation system is recovered from the geometry (angular order of the
incident edges seen from outside) and each face plane is fitted through
its vertex cycle.  Construction parameters are recorded so tolerance
regressions stay traceable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom
from .errors import CatalogBroken
from .geom import HalfSpace
from .graphs import PlanarGraph
from .polyhedron import Realization, SkeletonStatus


def rotation_from_geometry(vertices: np.ndarray, edges) -> list[list[int]]:
    """Cyclic edge order at each vertex, counterclockwise as seen from
    outside the (convex, origin-star-shaped) polyhedron."""
    center = vertices.mean(axis=0)
    rotation = []
    for v in range(len(vertices)):
        inc = [i for i, (a, b) in enumerate(edges) if v in (a, b)]
        out_dir = vertices[v] - center
        out_dir = out_dir / np.linalg.norm(out_dir)
        # frame in the plane orthogonal to the outward direction
        ref = np.array([1.0, 0.0, 0.0])
        if abs(out_dir @ ref) > 0.9:
            ref = np.array([0.0, 1.0, 0.0])
        t1 = ref - (ref @ out_dir) * out_dir
        t1 /= np.linalg.norm(t1)
        t2 = np.cross(out_dir, t1)

        def angle(e):
            a, b = edges[e]
            w = b if a == v else a
            d = vertices[w] - vertices[v]
            return np.arctan2(d @ t2, d @ t1)

        rotation.append(sorted(inc, key=angle))
    return rotation


def plane_through_points(points: np.ndarray, interior_point) -> HalfSpace:
    """Least-squares plane through coplanar Klein points, oriented so the
    interior point is inside the half-space."""
    k = len(points)
    m = np.hstack([points, -np.ones((k, 1))])
    _, _, vt = np.linalg.svd(m)
    n, c = vt[-1][:3], vt[-1][3]
    u = np.concatenate(([c], n))
    h = HalfSpace.normalize(u)
    p = np.asarray(interior_point, float)
    if float(p @ h.u[1:]) - h.u[0] > 0:
        h = HalfSpace(-h.u)
    return h


def realization_from_klein_vertices(vertices, edges,
                                    marked_edge: int | None = None) -> Realization:
    """Build a Realization from convex-position Klein vertices and an
    abstract edge list."""
    vertices = np.asarray(vertices, dtype=float)
    rotation = rotation_from_geometry(vertices, edges)
    graph = PlanarGraph(len(vertices), edges, rotation, marked_edge=marked_edge)
    graph.validate_embedding()
    interior = vertices.mean(axis=0)
    planes = []
    for face in graph.faces:
        pts = vertices[list(face.vertices)]
        planes.append(plane_through_points(pts, interior))
    return Realization(graph, planes)


# -- solids ---------------------------------------------------------------

TET_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def regular_tetrahedron(scale: float) -> Realization:
    """Regular compact tetrahedron, vertices at Klein radius ``scale``."""
    dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                    dtype=float) / np.sqrt(3.0)
    return realization_from_klein_vertices(scale * dirs, TET_EDGES)


CUBE_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0),
              (4, 5), (5, 6), (6, 7), (7, 4),
              (0, 4), (1, 5), (2, 6), (3, 7)]


def _cube_vertices(half_side: float) -> np.ndarray:
    s = half_side
    return np.array([
        [-s, -s, -s], [s, -s, -s], [s, s, -s], [-s, s, -s],   # bottom 0-3
        [-s, -s, s], [s, -s, s], [s, s, s], [-s, s, s],        # top 4-7
    ])


def cube(half_side: float = 0.35) -> Realization:
    return realization_from_klein_vertices(_cube_vertices(half_side), CUBE_EDGES)


def cube_with_diagonal(half_side: float = 0.35) -> Realization:
    """Cube with the top-face diagonal 4-6 as a marked edge; the two
    split top faces are coplanar, so the realization sits on the weak
    boundary."""
    edges = CUBE_EDGES + [(4, 6)]
    return realization_from_klein_vertices(_cube_vertices(half_side), edges,
                                           marked_edge=len(edges) - 1)


PRISM_EDGES = [(0, 1), (1, 2), (2, 0),
               (3, 4), (4, 5), (5, 3),
               (0, 3), (1, 4), (2, 5)]


def triangular_prism(radius: float = 0.4, half_height: float = 0.35) -> Realization:
    ang = 2.0 * np.pi * np.arange(3) / 3.0
    bottom = np.column_stack([radius * np.cos(ang), radius * np.sin(ang),
                              -half_height * np.ones(3)])
    top = bottom + np.array([0.0, 0.0, 2 * half_height])
    return realization_from_klein_vertices(np.vstack([bottom, top]), PRISM_EDGES)


PYRAMID_EDGES = [(0, 1), (1, 2), (2, 3), (3, 0),
                 (0, 4), (1, 4), (2, 4), (3, 4)]


def square_pyramid(half_side: float = 0.4, apex_height: float = 0.45,
                   base_depth: float = 0.2) -> Realization:
    s = half_side
    base = np.array([[-s, -s, -base_depth], [s, -s, -base_depth],
                     [s, s, -base_depth], [-s, s, -base_depth]])
    apex = np.array([[0.0, 0.0, apex_height]])
    return realization_from_klein_vertices(np.vstack([base, apex]), PYRAMID_EDGES)


# -- catalog ----------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    realization: Realization
    expected_status: SkeletonStatus
    note: str
    symmetry_count: int


def catalog_build(verify: bool = True) -> list[CatalogEntry]:
    """Construct and verify the standard catalog."""
    entries = [
        CatalogEntry("tet_small", regular_tetrahedron(0.30),
                     SkeletonStatus.STRICT,
                     "regular tetrahedron, Klein circumradius 0.30", 24),
        CatalogEntry("tet_medium", regular_tetrahedron(0.55),
                     SkeletonStatus.STRICT,
                     "regular tetrahedron, Klein circumradius 0.55", 24),
        CatalogEntry("tet_large", regular_tetrahedron(0.80),
                     SkeletonStatus.STRICT,
                     "regular tetrahedron, Klein circumradius 0.80", 24),
        CatalogEntry("cube", cube(0.35),
                     SkeletonStatus.STRICT,
                     "cube, Klein half-side 0.35", 48),
        CatalogEntry("prism", triangular_prism(0.40, 0.35),
                     SkeletonStatus.STRICT,
                     "triangular prism, radius 0.40, half-height 0.35", 12),
        CatalogEntry("pyramid", square_pyramid(0.40, 0.45, 0.20),
                     SkeletonStatus.STRICT,
                     "square pyramid with a 4-valent apex", 8),
        CatalogEntry("cube_diagonal", cube_with_diagonal(0.35),
                     SkeletonStatus.WEAK_BOUNDARY,
                     "cube with a coplanar split of the top face along a "
                     "marked diagonal", 4),
    ]
    if verify:
        for entry in entries:
            report = entry.realization.check_membership()
            if report.status is not entry.expected_status:
                raise CatalogBroken(
                    f"{entry.name}: expected {entry.expected_status.value}, "
                    f"got {report.pretty()}")
    return entries


def catalog_entry(name: str) -> CatalogEntry:
    for entry in catalog_build(verify=False):
        if entry.name == name:
            return entry
    raise KeyError(name)
