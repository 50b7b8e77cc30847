import math

import numpy as np
import pytest

from polyvol import geom
from polyvol.catalog import catalog_build, regular_tetrahedron
from polyvol.geom import HalfSpace, random_isometry
from polyvol.polyhedron import Realization, SkeletonStatus


def test_catalog_statuses(entries):
    for entry in entries:
        report = entry.realization.check_membership()
        assert report.status is entry.expected_status, entry.name


def test_regular_tet_symmetry(tet_medium):
    angles = tet_medium.angle_vector()
    lengths = tet_medium.edge_lengths()
    assert np.ptp(angles) < 1e-10
    assert np.ptp(lengths) < 1e-10
    # compact hyperbolic: strictly below the Euclidean dihedral angle
    assert 0 < angles[0] < math.acos(1.0 / 3.0) + 1e-12


def test_tet_angle_monotone_in_size():
    # larger tetrahedra are "more hyperbolic": smaller dihedral angles
    a = [regular_tetrahedron(s).angle_vector()[0] for s in (0.3, 0.55, 0.8)]
    assert a[0] > a[1] > a[2]


def test_vertices_match_klein(tet_medium):
    ys = tet_medium.klein_vertices()
    pts = tet_medium.solve_vertices()
    for y, p in zip(ys, pts):
        assert np.allclose(geom.klein_project(p), y, atol=1e-10)


def test_membership_isometry_invariant(entries, rng):
    for entry in entries:
        g = random_isometry(rng, max_rapidity=0.5)
        moved = entry.realization.transformed(g)
        assert moved.check_membership().status is entry.expected_status


def test_marked_pair(cube_diagonal, cube):
    assert cube.marked_pair() is None
    pair = cube_diagonal.marked_pair()
    assert pair is not None
    assert cube_diagonal.marked_pair_coplanar()
    e = cube_diagonal.graph.marked_edge
    assert abs(cube_diagonal.angle_vector()[e] - math.pi) < 1e-10


def test_invalid_duplicate_plane(tet_medium):
    planes = list(tet_medium.planes)
    planes[1] = planes[0]
    bad = Realization(tet_medium.graph, planes)
    assert bad.check_membership().status is SkeletonStatus.INVALID


def test_invalid_noncompact():
    bad = regular_tetrahedron(0.55).scaled(2.5)
    report = bad.check_membership()
    assert report.status is SkeletonStatus.INVALID
    assert any(v.condition == "compact" for v in report.violations)


def test_invalid_interior_violation(cube):
    # push one cube face inward past its opposite face: the empty
    # "intersection" shows up as interior violations
    planes = list(cube.planes)
    n, c = planes[0].klein_plane()
    planes[0] = HalfSpace.normalize(np.concatenate(([-1.3 * c], n)))
    bad = Realization(cube.graph, planes)
    report = bad.check_membership()
    assert report.status is SkeletonStatus.INVALID
    assert any(v.condition == "interior" for v in report.violations)


def test_strict_is_open_under_small_perturbation(tet_medium, rng):
    # a strict skeleton survives a tiny normal perturbation
    planes = []
    for h in tet_medium.planes:
        u = h.u + 1e-6 * rng.standard_normal(4)
        planes.append(HalfSpace.normalize(u))
    assert (Realization(tet_medium.graph, planes).check_membership().status
            is SkeletonStatus.STRICT)


def test_weak_boundary_breaks_under_perturbation(cube_diagonal, rng):
    # perturbing one of the coplanar pair destroys the coincidence
    pair = cube_diagonal.marked_pair()
    planes = list(cube_diagonal.planes)
    planes[pair[0]] = HalfSpace.normalize(
        planes[pair[0]].u + 1e-4 * np.array([0.0, 1.0, 0.5, -0.3]))
    bad = Realization(cube_diagonal.graph, planes)
    assert bad.check_membership().status is SkeletonStatus.INVALID
