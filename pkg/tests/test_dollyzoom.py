"""Tests for the dolly-zoom camera adjustments and distortion metric."""

import math

import numpy as np
import pytest

from panowalk import (
    DollyMode,
    PointBehindCamera,
    Surface,
    adjust_camera,
    build_grid,
    distortion_value,
    feasible_offset_interval,
    grid_objective,
    heuristic_offset,
    intersect_cylinder,
    intersect_sphere,
    linearity,
    make_camera,
    optimize_offset,
    pixel_ray,
    project_with_offset,
    refit_fov,
    view_transform,
)
from conftest import random_interior_pose

DEG90 = math.radians(90.0)


class TestHeuristicOffset:
    def test_pure_dolly_recovers_origin(self):
        pose = make_camera((0, 0.5, 0), (0, -1, 0), (0, 0, 1), DEG90, 1.0)
        t = heuristic_offset(pose)
        np.testing.assert_array_equal(pose.pos - t * pose.dir, np.zeros(3))

    def test_truck_gives_zero(self):
        pose = make_camera((0.5, 0, 0), (0, 1, 0), (0, 0, 1), DEG90, 1.0)
        assert heuristic_offset(pose) == 0.0

    def test_hand_computed_dot(self):
        pose = make_camera((0.3, 0.4, 0), (-0.6, -0.8, 0), (0, 0, 1), DEG90, 1.0)
        t = heuristic_offset(pose)
        assert t == pytest.approx(-0.5, abs=1e-15)
        np.testing.assert_allclose(pose.pos - t * pose.dir, np.zeros(3), atol=1e-15)

    def test_is_true_line_minimizer(self, rng):
        for _ in range(200):
            pose = random_interior_pose(rng)
            t = heuristic_offset(pose)
            best = np.linalg.norm(pose.pos - t * pose.dir)
            for s in rng.uniform(-2.0, 2.0, 50):
                assert best <= np.linalg.norm(pose.pos - s * pose.dir) + 1e-12


class TestRefitFov:
    def test_identity_refit(self):
        pose = make_camera((0.2, 0.3, 0.1), (1, 0.2, -0.1), (0, 0, 1), DEG90, 1.5)
        same = refit_fov(pose, pose.pos, Surface.SPHERE)
        assert same.fovx_left == pytest.approx(pose.fovx_left, abs=1e-12)
        assert same.fovx_right == pytest.approx(pose.fovx_right, abs=1e-12)
        assert same.fovy == pytest.approx(pose.fovy, abs=1e-12)

    def test_pure_dolly_stays_symmetric(self):
        pose = make_camera((-0.4, 0, 0), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        refit = refit_fov(pose, np.zeros(3), Surface.SPHERE)
        assert refit.fovx_left == pytest.approx(refit.fovx_right, abs=1e-12)

    def test_new_boundary_rays_hit_old_anchors(self):
        # The anchors come from an intersection oracle evaluated here, and
        # the refit frustum's boundary rays must pass back through them.
        pose = make_camera((0, 0.3, 0), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        new_pos = np.zeros(3)
        refit = refit_fov(pose, new_pos, Surface.SPHERE)
        for X, half in ((0.0, refit.fovx_left), (1.0, refit.fovx_right)):
            anchor = intersect_sphere(pose.pos, pixel_ray(pose, X, 0.5))
            ray = anchor - new_pos
            ray = ray / np.linalg.norm(ray)
            claimed = math.cos(half)
            assert float(ray @ refit.dir) == pytest.approx(claimed, abs=1e-12)
            hit = intersect_sphere(new_pos, ray)
            np.testing.assert_allclose(hit, anchor, atol=1e-9)

    def test_anchor_reintersection_on_cylinder(self, rng):
        for _ in range(50):
            pose = random_interior_pose(rng)
            t = heuristic_offset(pose)
            new_pos = pose.pos - t * pose.dir
            try:
                refit = refit_fov(pose, new_pos, Surface.CYLINDER)
            except Exception:
                continue
            for X in (0.0, 1.0):
                anchor = intersect_cylinder(pose.pos, pixel_ray(pose, X, 0.5))
                ray = (anchor - new_pos) / np.linalg.norm(anchor - new_pos)
                hit = intersect_cylinder(new_pos, ray)
                np.testing.assert_allclose(hit, anchor, atol=1e-9)
            assert refit.dir is not None


class TestBuildGrid:
    def test_lattice_shape(self):
        pose = make_camera((0.1, 0.2, 0.0), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        grid = build_grid(pose, Surface.CYLINDER, 10, 10)
        assert grid.verts.shape == (11, 11, 3)
        assert grid.verts_view.shape == (11, 11, 3)

    def test_vertices_normalized_and_in_front(self, rng):
        # Cylinder grids from near-vertical views can legitimately reach
        # behind the camera (the objective is +inf there), so the
        # in-front assertion is restricted to non-degenerate poses.
        for surface in Surface:
            for _ in range(30):
                pose = random_interior_pose(rng)
                grid = build_grid(pose, surface, 6, 8)
                norms = np.linalg.norm(grid.verts, axis=-1)
                np.testing.assert_allclose(norms, 1.0, atol=1e-12)
                assert grid.B > 0.0 and grid.H > 0.0
                if surface is Surface.SPHERE or abs(pose.dir[2]) < 0.8:
                    assert np.all(grid.verts_view[..., 2] < 0.0)

    def test_degenerate_vertical_cylinder_view_scores_inf(self):
        pose = make_camera(
            (0, 0, 0.9), (0.125, -0.2576, 0.958), (0, 0, 1), DEG90, 16 / 9
        )
        assert distortion_value(pose, Surface.CYLINDER) == math.inf
        # The optimizer can still repair the pose by dollying backward.
        t = optimize_offset(pose, Surface.CYLINDER)
        grid = build_grid(pose, Surface.CYLINDER)
        assert grid_objective(grid, t, pose.aspect) < math.inf

    def test_corner_idempotent_on_sphere(self):
        pose = make_camera((0.3, -0.1, 0.2), (1, 0.4, 0), (0, 0, 1), DEG90, 16 / 9)
        grid = build_grid(pose, Surface.SPHERE, 4, 4)
        corner = intersect_sphere(pose.pos, pixel_ray(pose, 0.0, 0.0))
        np.testing.assert_allclose(grid.verts[0, 0], corner, atol=1e-12)

    def test_h_equals_b_tan_half_fovy(self):
        pose = make_camera((0.2, 0.0, 0.1), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        grid = build_grid(pose, Surface.SPHERE, 4, 4)
        assert grid.H == pytest.approx(grid.B * math.tan(pose.fovy / 2.0), abs=1e-15)


class TestLinearity:
    def test_collinear_cases(self):
        assert linearity((0, 0), (1, 0), (2, 0)) == 0.0
        assert linearity((0, 0), (2, 1), (4, 2)) == 0.0

    def test_unit_right_angle(self):
        assert linearity((0, 0), (1, 0), (1, 1)) == 1.0

    def test_translation_and_rotation_invariant(self, rng):
        for _ in range(100):
            a, b, c = rng.normal(size=(3, 2))
            base = linearity(a, b, c)
            shift = rng.normal(size=2)
            assert linearity(a + shift, b + shift, c + shift) == pytest.approx(
                base, rel=1e-9, abs=1e-12
            )
            ang = rng.uniform(0, 2 * math.pi)
            R = np.array(
                [[math.cos(ang), -math.sin(ang)], [math.sin(ang), math.cos(ang)]]
            )
            assert linearity(R @ a, R @ b, R @ c) == pytest.approx(
                base, rel=1e-9, abs=1e-12
            )

    def test_quartic_scaling(self, rng):
        for _ in range(100):
            a, b, c = rng.normal(size=(3, 2))
            s = rng.uniform(0.1, 3.0)
            assert linearity(s * a, s * b, s * c) == pytest.approx(
                s**4 * linearity(a, b, c), rel=1e-9, abs=1e-12
            )

    def test_zero_iff_collinear_by_construction(self, rng):
        for _ in range(100):
            a = rng.normal(size=2)
            d = rng.normal(size=2)
            b = a + rng.uniform(0.1, 2.0) * d
            c = a + rng.uniform(2.1, 4.0) * d
            assert linearity(a, b, c) < 1e-20


class TestProjectWithOffset:
    def test_zero_offset_is_plain_perspective_divide(self):
        B = 2.0
        v = np.array([0.3, -0.4, -B])
        V = project_with_offset(v, 0.0, B, B, 1.0)
        np.testing.assert_allclose(V, [0.3 / B, -0.4 / B], atol=1e-15)

    def test_optical_axis_point_is_fixed(self):
        v = np.array([0.0, 0.0, -1.5])
        for t in (0.0, 0.3, 2.0):
            np.testing.assert_allclose(
                project_with_offset(v, t, 1.5, 0.9, 1.7), [0.0, 0.0], atol=1e-15
            )

    def test_hand_computed_offset_case(self):
        V = project_with_offset(np.array([0.2, 0.1, -1.0]), 1.0, 1.0, 1.0, 1.0)
        np.testing.assert_allclose(V, [0.2, 0.1], atol=1e-15)

    def test_point_behind_camera_rejected(self):
        with pytest.raises(PointBehindCamera):
            project_with_offset(np.array([0.0, 0.0, 1.0]), 0.0, 1.0, 1.0, 1.0)
        with pytest.raises(PointBehindCamera):
            project_with_offset(np.array([0.0, 0.0, -1.0]), -2.0, 1.0, 1.0, 1.0)

    def test_zero_offset_matches_pose_projection(self, rng):
        # Independent projection: plane coordinates from the view-space
        # point divided by the frame half-extents at near = 1.
        for _ in range(50):
            pose = random_interior_pose(rng)
            grid = build_grid(pose, Surface.SPHERE)
            point = grid.verts[3, 4]
            v = view_transform(pose, point)
            V = project_with_offset(v, 0.0, grid.B, grid.H, pose.aspect)
            half_h = math.tan(pose.fovy / 2.0)
            expect_x = v[0] / (-v[2]) / (pose.aspect * half_h)
            expect_y = v[1] / (-v[2]) / half_h
            np.testing.assert_allclose(V, [expect_x, expect_y], atol=1e-12)


class TestDistortionValue:
    def test_zero_at_origin_any_surface(self, rng):
        for surface in Surface:
            for _ in range(10):
                d = rng.normal(size=3)
                d /= np.linalg.norm(d)
                up = [0, 0, 1] if abs(d[2]) < 0.99 else [1, 0, 0]
                pose = make_camera(np.zeros(3), d, up, DEG90, 16 / 9)
                assert distortion_value(pose, surface) < 1e-18

    def test_positive_off_center(self):
        pose = make_camera((0.5, 0, 0), (0, 1, 0), (0, 0, 1), DEG90, 16 / 9)
        assert distortion_value(pose, Surface.CYLINDER) > 1e-6

    def test_objective_at_zero_matches_distortion_value(self, rng):
        for _ in range(30):
            pose = random_interior_pose(rng)
            d = distortion_value(pose, Surface.CYLINDER)
            grid = build_grid(pose, Surface.CYLINDER)
            assert grid_objective(grid, 0.0, pose.aspect) == pytest.approx(
                d, rel=1e-12, abs=1e-15
            )


class TestOptimizeOffset:
    def test_origin_pose_already_optimal(self):
        pose = make_camera(np.zeros(3), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        t = optimize_offset(pose, Surface.CYLINDER)
        grid = build_grid(pose, Surface.CYLINDER)
        assert grid_objective(grid, t, pose.aspect) < 1e-20

    def test_pure_dolly_reaches_origin(self):
        pose = make_camera((-0.4, 0, 0), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        t = optimize_offset(pose, Surface.CYLINDER)
        grid = build_grid(pose, Surface.CYLINDER)
        assert grid_objective(grid, t, pose.aspect) < 1e-20
        np.testing.assert_allclose(pose.pos - t * pose.dir, np.zeros(3), atol=1e-9)

    def test_dominates_bruteforce_scan(self, rng):
        for _ in range(30):
            pose = random_interior_pose(rng)
            t_opt = optimize_offset(pose, Surface.CYLINDER)
            grid = build_grid(pose, Surface.CYLINDER)
            lo, hi = feasible_offset_interval(pose, Surface.CYLINDER, grid)
            scan = np.linspace(lo, hi, 2000)
            best = min(grid_objective(grid, float(t), pose.aspect) for t in scan)
            assert grid_objective(grid, t_opt, pose.aspect) <= best + 1e-12

    def test_never_worse_than_zero_or_heuristic(self, rng):
        for _ in range(50):
            pose = random_interior_pose(rng)
            grid = build_grid(pose, Surface.CYLINDER)
            t_opt = optimize_offset(pose, Surface.CYLINDER)
            obj_opt = grid_objective(grid, t_opt, pose.aspect)
            assert obj_opt <= grid_objective(grid, 0.0, pose.aspect)
            assert obj_opt <= grid_objective(grid, heuristic_offset(pose), pose.aspect)

    def test_stable_under_grid_refinement(self, rng):
        # In flat basins the argmin itself is ill-conditioned (measured
        # shifts up to ~1e-2 when doubling the lattice), so stability is
        # asserted on the objective: the refined grid's argmin must score
        # within 1% of optimal on the coarse grid, and vice versa.
        for _ in range(10):
            pose = random_interior_pose(rng)
            t10 = optimize_offset(pose, Surface.CYLINDER, 10, 10)
            t20 = optimize_offset(pose, Surface.CYLINDER, 20, 20)
            g10 = build_grid(pose, Surface.CYLINDER, 10, 10)
            g20 = build_grid(pose, Surface.CYLINDER, 20, 20)
            for grid, t_own, t_other in ((g10, t10, t20), (g20, t20, t10)):
                best = grid_objective(grid, t_own, pose.aspect)
                other = grid_objective(grid, t_other, pose.aspect)
                assert other <= best * 1.01 + 1e-18


class TestAdjustCamera:
    def test_origin_pose_is_fixed_point(self):
        pose = make_camera(np.zeros(3), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        for mode in (DollyMode.HEURISTIC, DollyMode.OPTIMIZED):
            sol = adjust_camera(pose, Surface.CYLINDER, mode)
            if mode is DollyMode.HEURISTIC:
                assert sol.t == 0.0
                assert sol.adjusted_pose is pose
            assert sol.d_adjusted == pytest.approx(sol.d_original, abs=1e-20)

    def test_truck_pose_heuristic_is_identity(self):
        pose = make_camera((0.5, 0, 0), (0, 1, 0), (0, 0, 1), DEG90, 16 / 9)
        sol = adjust_camera(pose, Surface.CYLINDER, DollyMode.HEURISTIC)
        assert sol.t == 0.0
        assert sol.d_adjusted == sol.d_original

    def test_heuristic_never_moves_outward(self, rng):
        for _ in range(50):
            pose = random_interior_pose(rng)
            sol = adjust_camera(pose, Surface.CYLINDER, DollyMode.HEURISTIC)
            assert np.linalg.norm(sol.adjusted_pose.pos) <= (
                np.linalg.norm(pose.pos) + 1e-12
            )

    def test_offset_position_relation(self, rng):
        for _ in range(20):
            pose = random_interior_pose(rng)
            sol = adjust_camera(pose, Surface.SPHERE, DollyMode.OPTIMIZED)
            np.testing.assert_allclose(
                sol.adjusted_pose.pos, pose.pos - sol.t * pose.dir, atol=1e-12
            )

    def test_pure_dolly_optimized_nulls_distortion(self):
        pose = make_camera((-0.4, 0, 0), (1, 0, 0), (0, 0, 1), DEG90, 16 / 9)
        sol = adjust_camera(pose, Surface.CYLINDER, DollyMode.OPTIMIZED)
        assert sol.d_adjusted < 1e-20
        assert sol.d_original > 1e-6
