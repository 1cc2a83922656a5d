"""Per-view geometry vectors and line-delimited view metadata.

Each rendered view carries a 30-dimensional vector packing the object's
box and the full virtual-camera state, plus a JSON metadata record that is
sufficient to re-render the view bit-exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .camera import CameraRig, Intrinsics, Pose
from .projector import ROI
from .scene import AABB

GEO_DIM = 30

# Slot layout, position-stable; bump the tag on any reordering:
#   [0:3]   bbox center            [3:6]   bbox extents
#   [6:9]   camera position        [9:18]  rotation columns r, u, f
#   [18:23] gamma_x, gamma_y, c_x, c_y, zeta
#   [23] d_f   [24] d_up   [25] theta (radians)   [26] epsilon
#   [27] camera-to-bbox-center distance   [28] floor height   [29] reserved (0)
GEO_LAYOUT = "box-cam-v1"


@dataclass(frozen=True)
class GeoSemantics:
    """30-vector of box and camera state for one rendered view."""

    values: np.ndarray
    layout: str = GEO_LAYOUT

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        if values.shape != (GEO_DIM,):
            raise ValueError(f"geo vector must have exactly {GEO_DIM} entries")
        if not np.isfinite(values).all():
            raise ValueError("geo vector entries must be finite")

    def __eq__(self, other):
        if not isinstance(other, GeoSemantics):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.values, other.values)


@dataclass(frozen=True)
class ViewMeta:
    """Full provenance of one rendered view; replays to identical bytes."""

    scene_id: str
    object_id: str
    view_index: int
    seed: int
    rig: CameraRig
    roi: ROI
    bbox: AABB
    floor_height: float
    image_size: int
    source: str
    background: tuple[int, int, int]


def build_geo_vector(
    bbox: AABB, rig: CameraRig, floor_height: float, epsilon: float = 0.0
) -> GeoSemantics:
    """Pack box coordinates and camera intrinsics/extrinsics into 30 slots."""
    intr = rig.intrinsics
    pose = rig.pose
    center = bbox.center
    values = np.empty(GEO_DIM, dtype=np.float64)
    values[0:3] = center
    values[3:6] = bbox.extents
    values[6:9] = pose.translation
    values[9:18] = pose.rotation.T.reshape(-1)  # columns r, u, f in order
    values[18:23] = (intr.gamma_x, intr.gamma_y, intr.c_x, intr.c_y, intr.zeta)
    values[23] = rig.d_f
    values[24] = rig.d_up
    values[25] = math.radians(rig.view_angle_deg)
    values[26] = epsilon
    values[27] = float(np.linalg.norm(pose.translation - center))
    values[28] = floor_height
    values[29] = 0.0
    return GeoSemantics(values)


def serialize_meta(meta: ViewMeta, geo: GeoSemantics) -> str:
    """One JSON line per view; floats survive the round trip exactly."""
    rig = meta.rig
    record = {
        "scene_id": meta.scene_id,
        "object_id": meta.object_id,
        "view_index": meta.view_index,
        "seed": meta.seed,
        "theta_deg": rig.view_angle_deg,
        "d_f": rig.d_f,
        "d_up": rig.d_up,
        "intrinsics": [rig.intrinsics.gamma_x, rig.intrinsics.gamma_y,
                       rig.intrinsics.c_x, rig.intrinsics.c_y, rig.intrinsics.zeta],
        "rotation": rig.pose.rotation.T.reshape(-1).tolist(),
        "cam_p": rig.pose.translation.tolist(),
        "roi": [meta.roi.u_min, meta.roi.u_max, meta.roi.v_min, meta.roi.v_max],
        "epsilon": meta.roi.epsilon,
        "bbox_lo": meta.bbox.lo.tolist(),
        "bbox_hi": meta.bbox.hi.tolist(),
        "floor_height": meta.floor_height,
        "image_size": meta.image_size,
        "source": meta.source,
        "background": list(meta.background),
        "geo_layout": geo.layout,
        "geo": geo.values.tolist(),
    }
    return json.dumps(record, separators=(",", ":"))


def parse_meta(line: str) -> tuple[ViewMeta, GeoSemantics]:
    rec = json.loads(line)
    intr = Intrinsics(*rec["intrinsics"])
    rotation = np.array(rec["rotation"], dtype=np.float64).reshape(3, 3).T
    pose = Pose(rotation, np.array(rec["cam_p"], dtype=np.float64))
    rig = CameraRig(intr, pose, rec["theta_deg"], rec["d_f"], rec["d_up"])
    roi = ROI(*rec["roi"], epsilon=rec["epsilon"])
    meta = ViewMeta(
        scene_id=rec["scene_id"],
        object_id=rec["object_id"],
        view_index=rec["view_index"],
        seed=rec["seed"],
        rig=rig,
        roi=roi,
        bbox=AABB(np.array(rec["bbox_lo"]), np.array(rec["bbox_hi"])),
        floor_height=rec["floor_height"],
        image_size=rec["image_size"],
        source=rec["source"],
        background=tuple(rec["background"]),
    )
    geo = GeoSemantics(np.array(rec["geo"], dtype=np.float64), rec["geo_layout"])
    return meta, geo
