"""Deterministic multi-view 2D image synthesis from 3D point-cloud scenes."""

from .augment import (CameraAugConfig, ImageAugConfig, apply_camera_dropout,
                      apply_image_aug, sample_camera_params)
from .batch import BatchSummary, run_batch
from .camera import (CameraRig, Intrinsics, Pose, ProminentFace, cocoon_rigs,
                     camera_position, default_intrinsics, look_at_pose,
                     prominent_face, view_angles)
from .config import AugmentConfig, Diagnostics, RenderConfig, load_config_file, validate_config
from .geosem import (GEO_DIM, GEO_LAYOUT, GeoSemantics, ViewMeta,
                     build_geo_vector, parse_meta, serialize_meta)
from .projector import (ROI, Projections, SyntheticImage, camera_to_world,
                        compute_roi, project_points, rasterize, ucm_project,
                        world_to_camera)
from .render import ViewResult, render_object_views, render_single_view, replay_view
from .scene import (AABB, ObjectProposal, Point, Scene, compute_floor_height,
                    compute_scene_center, load_proposals, load_scene,
                    proposal_from_indices, sample_proposal_points,
                    save_proposals, save_scene)
from .seeds import derive_seed

__version__ = "0.1.0"
