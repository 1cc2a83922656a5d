import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import pcviews as pv

from conftest import brute_force_rasterize, make_proposal, make_scene, random_projections


class TestWorldToCamera:
    def test_camera_origin(self):
        pose = pv.look_at_pose(np.array([1.0, 2.0, 3.0]), np.array([4.0, 2.0, 3.0]))
        np.testing.assert_allclose(
            pv.world_to_camera(pose, pose.translation), [0, 0, 0], atol=1e-12)

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        pose = pv.look_at_pose(np.array([0.5, -2.0, 1.0]), np.array([1.0, 1.0, 0.5]))
        points = rng.uniform(-5, 5, size=(500, 3))
        back = pv.camera_to_world(pose, pv.world_to_camera(pose, points))
        np.testing.assert_allclose(back, points, atol=1e-9)


class TestUcmProject:
    def test_optical_axis(self):
        intr = pv.Intrinsics(100, 120, 16, 17, 0.3)
        assert pv.ucm_project(intr, np.array([0.0, 0.0, 2.0])) == (16, 17)

    def test_pinhole_reduction(self):
        intr = pv.Intrinsics(100, 100, 16, 16, 0.0)
        u, v = pv.ucm_project(intr, np.array([1.0, 0.0, 2.0]))
        assert (u, v) == (66.0, 16.0)

    def test_distorted_scalar_value(self):
        # frozen from an independent high-precision evaluation:
        # u = 100 * 1 / (sqrt(5) + 2) + 16
        intr = pv.Intrinsics(100, 100, 16, 16, 1.0)
        u, v = pv.ucm_project(intr, np.array([1.0, 0.0, 2.0]))
        assert u == pytest.approx(39.60679774997897, abs=1e-12)
        assert v == pytest.approx(16.0, abs=1e-12)

    def test_behind_camera_rejected(self):
        intr = pv.Intrinsics(100, 100, 16, 16, 0.0)
        assert pv.ucm_project(intr, np.array([1.0, 0.0, -2.0])) is None

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(7)
        intr = pv.Intrinsics(80, 90, 15, 17, 0.4)
        pose = pv.look_at_pose(np.array([0.0, -3.0, 1.0]), np.array([0.0, 0.0, 1.0]))
        positions = rng.uniform(-2, 2, size=(300, 3))
        colors = rng.uniform(0, 1, size=(300, 3))
        proj = pv.project_points(intr, pose, positions, colors)
        expected = [pv.ucm_project(intr, pv.world_to_camera(pose, p))
                    for p in positions]
        expected = [e for e in expected if e is not None]
        assert len(proj) == len(expected)
        np.testing.assert_allclose(proj.u, [e[0] for e in expected], atol=1e-12)
        np.testing.assert_allclose(proj.v, [e[1] for e in expected], atol=1e-12)


class TestComputeRoi:
    def _proj(self, us, vs):
        n = len(us)
        return pv.Projections(np.array(us, dtype=float), np.array(vs, dtype=float),
                              np.ones(n), np.zeros(n), np.zeros((n, 3)))

    def test_tight_bounds(self):
        roi = pv.compute_roi(self._proj([10, 20, 15], [5, 15, 10]), epsilon=0)
        assert (roi.u_min, roi.u_max, roi.v_min, roi.v_max) == (10, 20, 5, 15)

    def test_ten_percent_per_side(self):
        roi = pv.compute_roi(self._proj([10, 20], [5, 15]), epsilon=0.1)
        assert (roi.u_min, roi.u_max, roi.v_min, roi.v_max) == (9, 21, 4, 16)

    def test_default_epsilon(self):
        assert pv.RenderConfig().epsilon == 0.02

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pv.compute_roi(self._proj([], []), epsilon=0)

    def test_degenerate_side_widened(self):
        roi = pv.compute_roi(self._proj([10], [5]), epsilon=0.1)
        assert roi.u_min < 10 < roi.u_max
        assert roi.v_min < 5 < roi.v_max


class TestRasterize:
    def test_single_point_at_center(self):
        proj = pv.Projections(np.array([15.0]), np.array([10.0]), np.ones(1),
                              np.zeros(1), np.array([[1.0, 0.0, 0.0]]))
        roi = pv.ROI(10, 20, 5, 15, 0.0)
        img = pv.rasterize(proj, roi, 32)
        assert img.occupancy.sum() == 1
        assert img.occupancy[16, 16]
        np.testing.assert_array_equal(img.pixels[16, 16], [255, 0, 0])

    def test_height_priority_keeps_tall_point(self):
        floor_gray = np.array([0.5, 0.5, 0.5])
        chair_red = np.array([1.0, 0.0, 0.0])
        proj = pv.Projections(
            u=np.array([12.0, 12.0]), v=np.array([12.0, 12.0]),
            depth=np.array([1.0, 2.0]), world_z=np.array([0.05, 0.8]),
            colors=np.vstack([floor_gray, chair_red]))
        roi = pv.ROI(10, 20, 10, 20, 0.0)
        img = pv.rasterize(proj, roi, 16)
        row, col = np.argwhere(img.occupancy)[0]
        np.testing.assert_array_equal(img.pixels[row, col], [255, 0, 0])

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(41)
        for trial in range(10):
            proj = random_projections(rng, int(rng.integers(1, 2000)))
            roi = pv.ROI(2.0, 27.0, 3.0, 28.0, 0.0)
            size = 16
            img = pv.rasterize(proj, roi, size)
            pixels, occupancy = brute_force_rasterize(proj, roi, size)
            np.testing.assert_array_equal(img.pixels, pixels)
            np.testing.assert_array_equal(img.occupancy, occupancy)

    def test_background_fill(self):
        proj = random_projections(np.random.default_rng(1), 50)
        roi = pv.ROI(0, 30, 0, 30, 0.0)
        img = pv.rasterize(proj, roi, 16, background=(7, 8, 9))
        np.testing.assert_array_equal(img.pixels[~img.occupancy],
                                      np.tile([7, 8, 9], (int((~img.occupancy).sum()), 1)))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_permutation_invariant(self, seed):
        rng = np.random.default_rng(seed)
        proj = random_projections(rng, 300)
        perm = rng.permutation(300)
        shuffled = pv.Projections(proj.u[perm], proj.v[perm], proj.depth[perm],
                                  proj.world_z[perm], proj.colors[perm])
        roi = pv.ROI(0, 30, 0, 30, 0.0)
        a = pv.rasterize(proj, roi, 16)
        b = pv.rasterize(shuffled, roi, 16)
        np.testing.assert_array_equal(a.pixels, b.pixels)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_monotone_priority(self, seed):
        rng = np.random.default_rng(seed)
        proj = random_projections(rng, 200)
        roi = pv.ROI(0, 30, 0, 30, 0.0)
        size = 16
        before = pv.rasterize(proj, roi, size)
        i = int(rng.integers(0, 200))
        world_z = proj.world_z.copy()
        world_z[i] += 10.0
        after = pv.rasterize(
            pv.Projections(proj.u, proj.v, proj.depth, world_z, proj.colors),
            roi, size)
        col = min(max(int((proj.u[i] - roi.u_min) / 30 * size), 0), size - 1)
        row = min(max(int((proj.v[i] - roi.v_min) / 30 * size), 0), size - 1)
        if np.array_equal(before.pixels[row, col],
                          np.clip(np.round(proj.colors[i] * 255), 0, 255)):
            np.testing.assert_array_equal(
                after.pixels[row, col],
                np.clip(np.round(proj.colors[i] * 255), 0, 255).astype(np.uint8))


class TestRenderObjectViews:
    def test_defaults_five_32px_views(self, scene, proposal):
        results = pv.render_object_views(scene, proposal, pv.RenderConfig())
        assert len(results) == 5
        for r in results:
            assert r.ok
            assert r.image.pixels.shape == (32, 32, 3)

    def test_single_point_object_single_view(self):
        positions = np.array([[2.0, 2.0, 1.0]] + [[0.0, 0.0, 0.0], [4.0, 4.0, 2.0],
                                                  [1.0, 3.0, 0.5], [3.0, 1.0, 1.5]])
        scene = pv.Scene.from_points(positions, np.full((5, 3), 0.5))
        prop = pv.ObjectProposal("pt", np.array([0]), pv.AABB(positions[0], positions[0]))
        cfg = pv.RenderConfig(views=1, source="object")
        (result,) = pv.render_object_views(scene, prop, cfg)
        assert result.ok
        assert result.image.occupancy.sum() == 1

    def test_fixed_seed_byte_identical(self, scene, proposal):
        cfg = pv.RenderConfig(seed=9, augment=pv.AugmentConfig(
            image=pv.ImageAugConfig(hflip_prob=0.5, blur_prob=0.5, crop_prob=0.5)))
        a = pv.render_object_views(scene, proposal, cfg, scene_id="s")
        b = pv.render_object_views(scene, proposal, cfg, scene_id="s")
        for ra, rb in zip(a, b):
            np.testing.assert_array_equal(ra.image.pixels, rb.image.pixels)
            assert ra.meta == rb.meta
            assert ra.geo == rb.geo

    def test_roi_containment_object_only(self):
        scene = make_scene(n=1000, seed=5)
        prop = make_proposal(scene, n_points=100, seed=6)
        cfg = pv.RenderConfig(epsilon=0.0, source="object")
        for r in pv.render_object_views(scene, prop, cfg):
            assert r.ok
            assert r.image.occupancy.any()

    def test_object_mode_subset_of_scene_mode_pixels(self):
        scene = make_scene(n=2000, seed=8)
        prop = make_proposal(scene, n_points=150, seed=9)
        obj = pv.render_object_views(scene, prop, pv.RenderConfig(source="object"))
        scn = pv.render_object_views(scene, prop, pv.RenderConfig(source="scene"))
        for a, b in zip(obj, scn):
            assert b.image.occupancy.sum() >= a.image.occupancy.sum()
