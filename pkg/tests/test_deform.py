import math

import numpy as np
import pytest

from polyvol.catalog import catalog_build, regular_tetrahedron
from polyvol.deform import (DeformationFamily, add_diagonal_normal_form,
                            angle_jacobian, boundary_angle_derivative,
                            boundary_angle_formula, BoundaryDerivativeConfig,
                            default_chart, face_congruent, gauge_fix,
                            run_family, solve_to_angles, stoker_compare)
from polyvol.errors import AnglesDiffer, LeftStratum, SkeletonMismatch
from polyvol.geom import random_isometry


def test_gauge_fix_is_isometric(tet_medium):
    fixed = gauge_fix(tet_medium, default_chart(tet_medium))
    assert np.allclose(fixed.angle_vector(), tet_medium.angle_vector(),
                       atol=1e-12)
    assert np.allclose(fixed.edge_lengths(), tet_medium.edge_lengths(),
                       atol=1e-10)


def test_gauge_fix_idempotent(prism):
    chart = default_chart(prism)
    once = gauge_fix(prism, chart)
    twice = gauge_fix(once, chart)
    for h0, h1 in zip(once.planes, twice.planes):
        assert np.allclose(h0.u, h1.u, atol=1e-9)


def test_gauge_fix_kills_isometry(tet_medium, rng):
    chart = default_chart(tet_medium)
    g = random_isometry(rng, max_rapidity=0.5)
    a = gauge_fix(tet_medium, chart)
    b = gauge_fix(tet_medium.transformed(g), chart)
    for h0, h1 in zip(a.planes, b.planes):
        assert np.allclose(h0.u, h1.u, atol=1e-8)


def test_solve_to_angles_identity(tet_medium):
    out = solve_to_angles(tet_medium, tet_medium.angle_vector())
    assert np.allclose(out.angle_vector(), tet_medium.angle_vector(),
                       atol=1e-10)


def test_solve_to_angles_perturbation_roundtrip(prism, rng):
    base_angles = prism.angle_vector()
    target = base_angles + 1e-3 * rng.uniform(-1, 1, size=len(base_angles))
    moved = solve_to_angles(prism, target, max_iter=10)
    assert np.allclose(moved.angle_vector(), target, atol=1e-10)
    back = solve_to_angles(moved, base_angles, max_iter=10)
    assert np.allclose(back.edge_lengths(), prism.edge_lengths(), atol=1e-8)


def test_solve_to_angles_rejects_overshoot(tet_medium):
    target = tet_medium.angle_vector()
    target[0] = math.pi + 0.05
    with pytest.raises(LeftStratum):
        solve_to_angles(tet_medium, target)


def test_angle_jacobian_interior(entries):
    for entry in entries:
        if entry.name == "cube_diagonal":
            continue
        jac = angle_jacobian(entry.realization)
        assert not jac.boundary
        n_e = entry.realization.graph.n_edges
        assert jac.matrix.shape == (n_e, n_e)
        assert jac.sigma_min > 1e-8, entry.name


def test_angle_map_is_differentiable(tet_medium):
    # edge-length response is linear in the angle perturbation size
    base_angles = tet_medium.angle_vector()
    base_lengths = tet_medium.edge_lengths()
    d = np.zeros_like(base_angles)
    d[2] = 1.0
    resp = []
    for h in (1e-4, 5e-5):
        moved = solve_to_angles(tet_medium, base_angles + h * d)
        resp.append((moved.edge_lengths() - base_lengths) / h)
    assert np.allclose(resp[0], resp[1], atol=1e-3)


def test_angle_jacobian_weak_boundary(cube_diagonal):
    jac = angle_jacobian(cube_diagonal)
    assert jac.boundary
    assert jac.sigma_min > 1e-8
    # the marked angle responds to the inward direction only: along
    # every boundary-parallel direction it stays pinned at pi
    row = jac.matrix[jac.marked_edge]
    mask = np.ones(len(row), bool)
    mask[jac.inward_column] = False
    assert abs(row[jac.inward_column]) > 0.1
    assert np.max(np.abs(row[mask])) < 1e-6


def test_run_family_grid(tet_medium):
    fam = DeformationFamily(tet_medium, "scale_one_edge", 1, (0.9, 1.0))
    record = run_family(fam, 10)
    assert len(record.ts) == 11
    assert record.ts[0] == pytest.approx(0.9)
    assert record.ts[-1] == pytest.approx(1.0)
    target_angles = [fam.targets(t)[1] for t in record.ts]
    assert np.allclose(record.angles[:, 1], target_angles, atol=1e-9)
    assert all(s.value == "StrictSkeleton" for s in record.statuses)


def test_run_family_add_diagonal(cube_diagonal):
    marked = cube_diagonal.graph.marked_edge
    fam = DeformationFamily(cube_diagonal, "add_diagonal", marked, (0.0, 0.1))
    record = run_family(fam, 8)
    assert record.statuses[0].value == "WeakBoundary"
    assert all(s.value == "StrictSkeleton" for s in record.statuses[1:])
    # the marked angle leaves pi at the prescribed rate
    assert np.allclose(record.angles[:, marked],
                       math.pi * (1.0 - record.ts), atol=1e-9)


def test_boundary_closed_form():
    alpha = 1.5
    cfg0 = BoundaryDerivativeConfig(alpha=alpha, t=0.0)
    assert boundary_angle_formula(cfg0) == pytest.approx(math.pi)
    # one-sided slope at t=0, Richardson-extrapolated first order
    h = 1e-5
    f = lambda t: boundary_angle_formula(BoundaryDerivativeConfig(alpha, t))
    d1 = (f(h) - f(0)) / h
    d2 = (f(2 * h) - f(0)) / (2 * h)
    fd = 2 * d1 - d2
    assert fd == pytest.approx(boundary_angle_derivative(alpha), rel=1e-5)


def test_stoker_compare_isometric(tet_medium, rng):
    g = random_isometry(rng, max_rapidity=0.4)
    rep = stoker_compare(tet_medium, tet_medium.transformed(g))
    assert rep.max_edge_diff < 1e-9
    assert rep.all_faces_congruent()
    assert rep.isometry_max_displacement < 1e-7


def test_stoker_compare_gates(tet_medium, cube):
    with pytest.raises(SkeletonMismatch):
        stoker_compare(tet_medium, cube)
    with pytest.raises(AnglesDiffer):
        stoker_compare(tet_medium, regular_tetrahedron(0.56))


def test_face_congruent_self(prism):
    for f in range(prism.graph.n_faces):
        ok, res = face_congruent(prism, f, prism, f)
        assert ok and res < 1e-12
