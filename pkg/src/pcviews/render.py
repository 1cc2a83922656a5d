"""End-to-end per-object rendering: cameras, projection, raster, geo vector.

Every view is rendered from a seed derived from (global seed, scene id,
object id, view index), so output is identical regardless of worker
scheduling and any view can be replayed in isolation from its metadata.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .augment import sample_camera_params, apply_image_aug
from .camera import (CameraRig, ProminentFace, camera_position,
                     default_intrinsics, look_at_pose, prominent_face,
                     view_angles)
from .config import RenderConfig
from .geosem import GeoSemantics, ViewMeta, build_geo_vector
from .projector import SyntheticImage, compute_roi, project_points, rasterize
from .scene import ObjectProposal, Scene
from .seeds import derive_seed

_CAMERA_SAMPLE_TAG = "camera"  # per-object camera-augmentation stream


@dataclass(frozen=True)
class ViewResult:
    """One rendered view, or a per-view error with the slot preserved."""

    image: Optional[SyntheticImage]
    meta: Optional[ViewMeta]
    geo: Optional[GeoSemantics]
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None


def _camera_params(config: RenderConfig, rng: np.random.Generator, override):
    base = default_intrinsics(config.image_size)
    if override is not None:
        return override
    if config.augment is not None and not config.augment.per_object:
        return sample_camera_params(rng, config.augment.camera, base)
    return config.d_f, config.d_up, config.epsilon, base


def render_single_view(
    scene: Scene,
    proposal: ObjectProposal,
    config: RenderConfig,
    view_index: int,
    seed: int,
    scene_id: str = "",
    _camera_override=None,
) -> ViewResult:
    """Render one view of one proposal from its per-view seed."""
    angles = view_angles(config.views, config.theta_step, config.angles)
    theta = angles[view_index]
    rng = np.random.default_rng(seed)
    d_f, d_up, epsilon, intrinsics = _camera_params(config, rng, _camera_override)

    try:
        face = prominent_face(proposal.bbox, scene.center)
    except ValueError:
        # fully degenerate box (e.g. single-point object): aim at its center
        face = ProminentFace(0, proposal.bbox.center)
    cam_p = camera_position(face, scene.center, d_f, d_up, scene.floor_height, theta)
    pose = look_at_pose(cam_p, face.center)
    rig = CameraRig(intrinsics, pose, theta, d_f, d_up)

    obj_positions = scene.positions[proposal.point_indices]
    obj_colors = scene.colors[proposal.point_indices]
    obj_proj = project_points(intrinsics, pose, obj_positions, obj_colors)
    if len(obj_proj) == 0:
        return ViewResult(None, None, None,
                          error="all object points rejected (behind camera)")
    roi = compute_roi(obj_proj, epsilon)

    if config.source == "scene":
        src_proj = project_points(intrinsics, pose, scene.positions, scene.colors)
    else:
        src_proj = obj_proj
    image = rasterize(src_proj, roi, config.image_size, config.background)
    if config.augment is not None:
        image = apply_image_aug(image, rng, config.augment.image)

    geo = build_geo_vector(proposal.bbox, rig, scene.floor_height, epsilon)
    meta = ViewMeta(
        scene_id=scene_id,
        object_id=proposal.id,
        view_index=view_index,
        seed=seed,
        rig=rig,
        roi=roi,
        bbox=proposal.bbox,
        floor_height=scene.floor_height,
        image_size=config.image_size,
        source=config.source,
        background=config.background,
    )
    return ViewResult(image, meta, geo)


def render_object_views(
    scene: Scene,
    proposal: ObjectProposal,
    config: RenderConfig,
    scene_id: str = "",
) -> list[ViewResult]:
    """Render all configured views of one proposal; always len == views."""
    override = None
    if config.augment is not None and config.augment.per_object:
        obj_rng = np.random.default_rng(
            derive_seed(config.seed, scene_id, proposal.id, _CAMERA_SAMPLE_TAG)
        )
        override = sample_camera_params(
            obj_rng, config.augment.camera, default_intrinsics(config.image_size)
        )
    results = []
    for k in range(config.views):
        view_seed = derive_seed(config.seed, scene_id, proposal.id, k)
        results.append(
            render_single_view(scene, proposal, config, k, view_seed,
                               scene_id, _camera_override=override)
        )
    return results


def replay_view(
    scene: Scene,
    proposal: ObjectProposal,
    config: RenderConfig,
    meta: ViewMeta,
) -> ViewResult:
    """Re-render the view described by a parsed metadata record."""
    override = None
    if config.augment is not None and config.augment.per_object:
        obj_rng = np.random.default_rng(
            derive_seed(config.seed, meta.scene_id, proposal.id, _CAMERA_SAMPLE_TAG)
        )
        override = sample_camera_params(
            obj_rng, config.augment.camera, default_intrinsics(config.image_size)
        )
    return render_single_view(scene, proposal, config, meta.view_index,
                              meta.seed, meta.scene_id, _camera_override=override)
