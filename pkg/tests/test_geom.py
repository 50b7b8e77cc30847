import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyvol import geom
from polyvol.errors import DivergentPlanes
from polyvol.geom import (HalfSpace, HPoint, apply_isometry, boost_x,
                          dihedral_angle, frame_to_isometry, hyp_distance,
                          is_isometry, klein_lift, klein_project, mink_inner,
                          plane_through_klein_points, random_isometry,
                          rotation_xyz, translation_to_origin)

ball_coord = st.floats(-0.55, 0.55)
klein_point = st.tuples(ball_coord, ball_coord, ball_coord)


def test_mink_inner_signature():
    assert mink_inner([1, 0, 0, 0], [1, 0, 0, 0]) == -1.0
    assert mink_inner([0, 1, 0, 0], [0, 1, 0, 0]) == 1.0
    assert mink_inner([1, 2, 3, 4], [0, 0, 0, 0]) == 0.0


def test_hpoint_normalize_and_validation():
    p = HPoint.normalize([2.0, 0.5, -0.3, 0.1])
    assert abs(mink_inner(p.vec, p.vec) + 1.0) < 1e-14
    with pytest.raises(ValueError):
        HPoint(np.array([1.0, 1.0, 0.0, 0.0]))   # null vector
    with pytest.raises(ValueError):
        HPoint.normalize([0.1, 1.0, 0.0, 0.0])   # spacelike


def test_halfspace_normalize_and_contains():
    h = HalfSpace.normalize([0.0, 3.0, 0.0, 0.0])
    assert abs(mink_inner(h.u, h.u) - 1.0) < 1e-14
    origin = HPoint(np.array([1.0, 0, 0, 0]))
    assert h.contains(origin)
    with pytest.raises(ValueError):
        HalfSpace.normalize([2.0, 1.0, 0.0, 0.0])  # timelike


@given(klein_point)
def test_klein_roundtrip(y):
    p = klein_lift(y)
    assert np.allclose(klein_project(p), y, atol=1e-12)


def test_dihedral_angle_orthogonal_planes():
    h1 = HalfSpace(np.array([0.0, 1.0, 0.0, 0.0]))
    h2 = HalfSpace(np.array([0.0, 0.0, 1.0, 0.0]))
    assert abs(dihedral_angle(h1, h2) - math.pi / 2) < 1e-14
    assert abs(dihedral_angle(h1, h1) - math.pi) < 1e-14


def test_dihedral_angle_divergent():
    h1 = HalfSpace(np.array([0.0, 1.0, 0.0, 0.0]))
    h2 = apply_isometry(boost_x(3.0), HalfSpace(np.array([0.0, -1.0, 0.0, 0.0])))
    with pytest.raises(DivergentPlanes):
        dihedral_angle(h1, h2)


def test_boost_and_rotation_are_isometries():
    assert is_isometry(boost_x(0.7))
    for axis in (1, 2, 3):
        assert is_isometry(rotation_xyz(axis, 1.1))


def test_random_isometry_is_isometry(rng):
    for _ in range(10):
        assert is_isometry(random_isometry(rng))


@given(klein_point, klein_point)
@settings(max_examples=50)
def test_hyp_distance_symmetric_nonnegative(y1, y2):
    p, q = klein_lift(y1), klein_lift(y2)
    d = hyp_distance(p, q)
    assert d >= 0
    assert abs(d - hyp_distance(q, p)) < 1e-12


@given(klein_point, klein_point, klein_point)
@settings(max_examples=50)
def test_hyp_distance_triangle_inequality(y1, y2, y3):
    p, q, s = (klein_lift(y) for y in (y1, y2, y3))
    assert hyp_distance(p, s) <= hyp_distance(p, q) + hyp_distance(q, s) + 1e-10


def test_isometry_preserves_distance_and_angles(rng):
    g = random_isometry(rng)
    p = klein_lift([0.1, 0.2, -0.3])
    q = klein_lift([-0.2, 0.05, 0.4])
    assert abs(hyp_distance(apply_isometry(g, p), apply_isometry(g, q))
               - hyp_distance(p, q)) < 1e-10
    h1 = HalfSpace.normalize([0.1, 1.0, 0.2, 0.0])
    h2 = HalfSpace.normalize([0.0, 0.3, 1.0, 0.1])
    assert abs(dihedral_angle(apply_isometry(g, h1), apply_isometry(g, h2))
               - dihedral_angle(h1, h2)) < 1e-10


def test_translation_to_origin():
    p = klein_lift([0.3, -0.1, 0.25])
    g = translation_to_origin(p)
    moved = apply_isometry(g, p)
    assert np.allclose(klein_project(moved), 0.0, atol=1e-12)


def test_frame_to_isometry_maps_frame_to_standard():
    # orthonormal Minkowski frame built from a boost+rotation image of
    # the standard frame; the isometry must bring it back exactly
    g0 = boost_x(0.4) @ rotation_xyz(2, 0.9)
    cols = [g0[:, i] for i in range(4)]
    g = frame_to_isometry(cols[0], cols[1], cols[2], cols[3])
    assert is_isometry(g)
    out = np.stack([g @ c for c in cols], axis=1)
    assert np.allclose(out, np.eye(4), atol=1e-12)


def test_plane_through_klein_points_contains_them():
    pts = [np.array([0.3, 0.0, 0.2]), np.array([-0.1, 0.25, 0.2]),
           np.array([0.0, -0.2, 0.2])]
    h = plane_through_klein_points(*pts, interior_point=np.zeros(3))
    n, c = h.klein_plane()
    for y in pts:
        assert abs(y @ n - c) < 1e-12
    # interior point strictly inside
    assert 0.0 < c or (np.zeros(3) @ n) < c
