import math

import numpy as np
import pytest

import pcviews as pv

from conftest import make_proposal, make_scene


def make_rig(theta=0.0, d_f=2.0, d_up=1.0, zeta=0.0):
    intr = pv.Intrinsics(32, 32, 16, 16, zeta)
    pose = pv.look_at_pose(np.array([0.0, -2.0, 1.0]), np.array([0.0, 0.0, 1.0]))
    return pv.CameraRig(intr, pose, theta, d_f, d_up)


class TestBuildGeoVector:
    def test_length_is_30(self):
        geo = pv.build_geo_vector(pv.AABB((0, 0, 0), (1, 1, 1)), make_rig(), 0.0)
        assert geo.values.shape == (30,)
        assert pv.GEO_DIM == 30

    def test_column_convention_slots(self):
        # facing +y from below the y axis: columns r=(1,0,0), u=(0,0,1), f=(0,1,0)
        geo = pv.build_geo_vector(pv.AABB((0, 0, 0), (1, 1, 1)), make_rig(), 0.0)
        np.testing.assert_allclose(geo.values[9:18],
                                   [1, 0, 0, 0, 0, 1, 0, 1, 0], atol=1e-12)

    def test_distance_slot_matches_recomputed_norm(self):
        bbox = pv.AABB((0.5, -1.0, 0.0), (2.0, 1.5, 1.0))
        rig = make_rig()
        geo = pv.build_geo_vector(bbox, rig, 0.25, epsilon=0.02)
        center = (bbox.lo + bbox.hi) / 2
        expected = math.sqrt(sum((rig.pose.translation[i] - center[i]) ** 2
                                 for i in range(3)))
        assert geo.values[27] == pytest.approx(expected, abs=1e-12)

    def test_named_slots(self):
        bbox = pv.AABB((0, 0, 0), (2, 4, 6))
        rig = make_rig(theta=30.0, d_f=2.5, d_up=1.5, zeta=0.3)
        geo = pv.build_geo_vector(bbox, rig, floor_height=0.125, epsilon=0.07)
        np.testing.assert_array_equal(geo.values[0:3], [1, 2, 3])
        np.testing.assert_array_equal(geo.values[3:6], [2, 4, 6])
        np.testing.assert_array_equal(geo.values[6:9], rig.pose.translation)
        np.testing.assert_array_equal(
            geo.values[18:23], [32, 32, 16, 16, 0.3])
        assert geo.values[23] == 2.5
        assert geo.values[24] == 1.5
        assert geo.values[25] == pytest.approx(math.radians(30.0), abs=1e-15)
        assert geo.values[26] == 0.07
        assert geo.values[28] == 0.125
        assert geo.values[29] == 0.0

    def test_rotation_slots_orthonormal(self):
        for seed in range(50):
            scene = make_scene(n=300, seed=seed)
            prop = make_proposal(scene, seed=seed + 1)
            for r in pv.render_object_views(scene, prop, pv.RenderConfig()):
                rot = r.geo.values[9:18].reshape(3, 3).T
                err = np.abs(rot.T @ rot - np.eye(3)).max()
                assert err < 1e-9

    def test_pure_function(self):
        bbox = pv.AABB((0, 0, 0), (1, 1, 1))
        a = pv.build_geo_vector(bbox, make_rig(), 0.0, 0.02)
        b = pv.build_geo_vector(bbox, make_rig(), 0.0, 0.02)
        assert a == b
        np.testing.assert_array_equal(a.values, b.values)

    def test_layout_tag_guard(self):
        geo = pv.build_geo_vector(pv.AABB((0, 0, 0), (1, 1, 1)), make_rig(), 0.0)
        assert geo.layout == pv.GEO_LAYOUT

    def test_wrong_length_rejected(self):
        with pytest.raises(ValueError):
            pv.GeoSemantics(np.zeros(29))


class TestSerializeMeta:
    def _render_one(self, seed=0):
        scene = make_scene(n=800, seed=seed)
        prop = make_proposal(scene, seed=seed + 1)
        cfg = pv.RenderConfig(seed=seed)
        result = pv.render_object_views(scene, prop, cfg, scene_id="sc")[0]
        return scene, prop, cfg, result

    def test_round_trip_equal(self):
        _, _, _, result = self._render_one()
        line = pv.serialize_meta(result.meta, result.geo)
        meta, geo = pv.parse_meta(line)
        assert meta == result.meta
        assert geo == result.geo
        assert pv.serialize_meta(meta, geo) == line

    def test_reserved_slot_serialized_as_zero(self):
        import json
        _, _, _, result = self._render_one()
        rec = json.loads(pv.serialize_meta(result.meta, result.geo))
        assert rec["geo"][29] == 0

    def test_replay_from_parsed_record_is_byte_identical(self):
        for seed in range(5):
            scene, prop, cfg, result = self._render_one(seed)
            line = pv.serialize_meta(result.meta, result.geo)
            meta, _ = pv.parse_meta(line)
            replayed = pv.replay_view(scene, prop, cfg, meta)
            assert replayed.image.pixels.tobytes() == result.image.pixels.tobytes()

    def test_replay_with_augmentation(self):
        scene = make_scene(n=800, seed=3)
        prop = make_proposal(scene, seed=4)
        cfg = pv.RenderConfig(seed=7, augment=pv.AugmentConfig(
            image=pv.ImageAugConfig(hflip_prob=0.5, crop_prob=0.5)))
        result = pv.render_object_views(scene, prop, cfg, scene_id="sc")[2]
        meta, _ = pv.parse_meta(pv.serialize_meta(result.meta, result.geo))
        replayed = pv.replay_view(scene, prop, cfg, meta)
        assert replayed.image.pixels.tobytes() == result.image.pixels.tobytes()
