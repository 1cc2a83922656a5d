"""Virtual camera placement around object proposals.

The camera fan targets the side face of the object's box nearest the scene
center, guaranteeing placement on the interior side of the room.  Poses use
the basis f = normalize(target - position), r = normalize(f x z_up),
u = normalize(r x f); the rotation matrix stores (r, u, f) as columns.
Note this triple is orthonormal but has determinant -1 (u points world-up,
not image-down), which is harmless for projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np

from .scene import AABB, ObjectProposal, Scene

if TYPE_CHECKING:
    from .config import RenderConfig

# side faces of an axis-aligned box, in tie-break order
FACE_ORDER = ("+x", "+y", "-x", "-y")

_DEGENERATE_EPS = 1e-9
_VERTICAL_EPS = 1e-6


@dataclass(frozen=True)
class Intrinsics:
    """Unified-camera-model intrinsics (gamma_x, gamma_y, c_x, c_y, zeta)."""

    gamma_x: float
    gamma_y: float
    c_x: float
    c_y: float
    zeta: float = 0.0

    def __post_init__(self):
        if self.gamma_x <= 0 or self.gamma_y <= 0:
            raise ValueError("focal scalars must be positive")
        if self.zeta < 0:
            raise ValueError("distortion scalar must be >= 0")


@dataclass(frozen=True)
class Pose:
    """Rigid camera pose: rotation columns (right, up, forward), translation."""

    rotation: np.ndarray    # (3, 3)
    translation: np.ndarray  # (3,) camera position in world frame

    def __post_init__(self):
        rotation = np.asarray(self.rotation, dtype=np.float64)
        translation = np.asarray(self.translation, dtype=np.float64)
        object.__setattr__(self, "rotation", rotation)
        object.__setattr__(self, "translation", translation)
        err = np.abs(rotation.T @ rotation - np.eye(3)).max()
        if err >= 1e-9:
            raise ValueError(f"rotation not orthonormal (max error {err:g})")

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return (np.array_equal(self.rotation, other.rotation)
                and np.array_equal(self.translation, other.translation))

    @property
    def right(self) -> np.ndarray:
        return self.rotation[:, 0]

    @property
    def up(self) -> np.ndarray:
        return self.rotation[:, 1]

    @property
    def forward(self) -> np.ndarray:
        return self.rotation[:, 2]


@dataclass(frozen=True)
class ProminentFace:
    """Side face (index into FACE_ORDER) and its center point."""

    index: int
    center: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, ProminentFace):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.center, other.center)


@dataclass(frozen=True)
class CameraRig:
    """One virtual view: intrinsics, pose, and its placement parameters."""

    intrinsics: Intrinsics
    pose: Pose
    view_angle_deg: float
    d_f: float
    d_up: float

    def __post_init__(self):
        if not -180.0 <= self.view_angle_deg <= 180.0:
            raise ValueError("view angle must lie in [-180, 180] degrees")
        if self.d_f <= 0:
            raise ValueError("face distance must be positive")
        if self.d_up < 0:
            raise ValueError("floor distance must be >= 0")


def face_centers(bbox: AABB) -> np.ndarray:
    """Centers of the four side faces, ordered per FACE_ORDER, (4, 3)."""
    cx, cy, cz = bbox.center
    return np.array([
        [bbox.hi[0], cy, cz],
        [cx, bbox.hi[1], cz],
        [bbox.lo[0], cy, cz],
        [cx, bbox.lo[1], cz],
    ])


def prominent_face(bbox: AABB, scene_center: np.ndarray) -> ProminentFace:
    """Side face whose center is nearest the scene center.

    Ties break toward the lowest face index.  A box with zero extent in
    both x and y has no usable side face and is rejected.
    """
    x0, y0 = float(bbox.lo[0]), float(bbox.lo[1])
    x1, y1 = float(bbox.hi[0]), float(bbox.hi[1])
    if x1 - x0 <= 0 and y1 - y0 <= 0:
        raise ValueError("degenerate bbox: zero extent in both x and y")
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    cz = (float(bbox.lo[2]) + float(bbox.hi[2])) / 2.0
    sx, sy, sz = (float(c) for c in scene_center)
    centers = ((x1, cy, cz), (cx, y1, cz), (x0, cy, cz), (cx, y0, cz))
    idx = 0
    best = math.inf
    for k, (fx, fy, fz) in enumerate(centers):
        # squared distance: same ordering, no sqrt; strict < keeps the first minimum
        d2 = (fx - sx) ** 2 + (fy - sy) ** 2 + (fz - sz) ** 2
        if d2 < best:
            idx, best = k, d2
    return ProminentFace(idx, np.array(centers[idx]))


def camera_position(
    face: ProminentFace,
    scene_center: np.ndarray,
    d_f: float,
    d_up: float,
    floor_height: float,
    theta_deg: float,
) -> np.ndarray:
    """Place a camera d_f meters from the face center, d_up above the floor.

    theta=0 puts the camera on the interior (scene-center) side of the
    face; nonzero theta rotates the offset CCW about the vertical axis
    through the face center.  A zero horizontal offset between face and
    scene center falls back to the +x direction.
    """
    scene_center = np.asarray(scene_center, dtype=np.float64)
    horiz = scene_center[:2] - face.center[:2]
    norm = np.linalg.norm(horiz)
    u = horiz / norm if norm > _DEGENERATE_EPS else np.array([1.0, 0.0])
    theta = math.radians(theta_deg)
    c, s = math.cos(theta), math.sin(theta)
    rotated = np.array([c * u[0] - s * u[1], s * u[0] + c * u[1]])
    xy = face.center[:2] + d_f * rotated
    return np.array([xy[0], xy[1], floor_height + d_up])


def look_at_pose(cam_p: np.ndarray, target: np.ndarray) -> Pose:
    """Pose looking from cam_p at target, world z as the up reference."""
    cam_p = np.asarray(cam_p, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    forward = target - cam_p
    dist = np.linalg.norm(forward)
    if dist <= _DEGENERATE_EPS:
        raise ValueError("camera position coincides with target")
    forward = forward / dist
    if math.hypot(forward[0], forward[1]) < _VERTICAL_EPS:
        raise ValueError("vertical look direction is gimbal-degenerate")
    right = np.cross(forward, np.array([0.0, 0.0, 1.0]))
    right = right / np.linalg.norm(right)
    up = np.cross(right, forward)
    up = up / np.linalg.norm(up)
    return Pose(np.column_stack([right, up, forward]), cam_p)


def default_intrinsics(image_size: int) -> Intrinsics:
    """Principal point at the image center, focal = image size, zero distortion."""
    if image_size < 8:
        raise ValueError("image size must be >= 8 pixels")
    size = float(image_size)
    return Intrinsics(size, size, size / 2.0, size / 2.0, 0.0)


def view_angles(views: int, theta_step: float,
                explicit: Optional[Sequence[float]] = None) -> list[float]:
    """Symmetric fan of view angles: 0, +s, -s, +2s, -2s, ..."""
    if explicit is not None:
        if len(explicit) != views:
            raise ValueError("explicit angle list length must equal views")
        return [float(a) for a in explicit]
    if views < 1:
        raise ValueError("views must be >= 1")
    angles = [0.0]
    k = 1
    while len(angles) < views:
        angles.append(k * theta_step)
        if len(angles) < views:
            angles.append(-k * theta_step)
        k += 1
    return angles


def cocoon_rigs(proposal: ObjectProposal, scene: Scene,
                config: "RenderConfig") -> list[CameraRig]:
    """Fan of cameras circling the prominent face at fixed angular steps."""
    face = prominent_face(proposal.bbox, scene.center)
    intr = default_intrinsics(config.image_size)
    rigs = []
    for theta in view_angles(config.views, config.theta_step, config.angles):
        cam_p = camera_position(face, scene.center, config.d_f, config.d_up,
                                scene.floor_height, theta)
        pose = look_at_pose(cam_p, face.center)
        rigs.append(CameraRig(intr, pose, theta, config.d_f, config.d_up))
    return rigs
