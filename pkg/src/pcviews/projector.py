"""Camera-frame transforms, UCM projection, ROI, and rasterization.

The projection follows the unified camera model:

    u = gamma_x * x / (zeta * d + z) + c_x
    v = gamma_y * y / (zeta * d + z) + c_y

with d the Euclidean norm of the camera-frame point; zeta = 0 reduces to
the pinhole model.  Rasterization resolves pixel conflicts by keeping the
point with the greatest world height, so floor points never overwrite
objects; ties fall to the smaller depth, then the smaller input index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .camera import Intrinsics, Pose

_DENOM_EPS = 1e-9
_DEGENERATE_HALF_WIDTH = 0.5  # widening for zero-extent ROI sides, pixels


@dataclass(frozen=True)
class Projections:
    """Projected points, struct-of-arrays: pixel coords, depth, height, color."""

    u: np.ndarray        # (N,) continuous pixel coordinates
    v: np.ndarray        # (N,)
    depth: np.ndarray    # (N,) camera-frame z, meters
    world_z: np.ndarray  # (N,) world height, the rasterization priority key
    colors: np.ndarray   # (N, 3) RGB in [0, 1]

    def __len__(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class ROI:
    """Continuous pixel-space rectangle, expanded by epsilon per side."""

    u_min: float
    u_max: float
    v_min: float
    v_max: float
    epsilon: float

    def __post_init__(self):
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError("ROI must have positive extent on both axes")
        if self.epsilon < 0:
            raise ValueError("epsilon must be >= 0")


@dataclass(frozen=True)
class SyntheticImage:
    """Square RGB raster plus the per-pixel occupancy mask."""

    width: int
    height: int
    pixels: np.ndarray      # (H, W, 3) uint8
    occupancy: np.ndarray   # (H, W) bool
    background: tuple[int, int, int] = (0, 0, 0)

    def __eq__(self, other):
        if not isinstance(other, SyntheticImage):
            return NotImplemented
        return ((self.width, self.height, self.background)
                == (other.width, other.height, other.background)
                and np.array_equal(self.pixels, other.pixels)
                and np.array_equal(self.occupancy, other.occupancy))


def world_to_camera(pose: Pose, points: np.ndarray) -> np.ndarray:
    """Rigid inverse: R^T (p - cam_p).  Accepts (3,) or (N, 3)."""
    points = np.asarray(points, dtype=np.float64)
    # distribute the rotation so no full-size intermediate is allocated
    cam = points @ pose.rotation
    cam -= pose.translation @ pose.rotation
    return cam


def camera_to_world(pose: Pose, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=np.float64)
    return points @ pose.rotation.T + pose.translation


def ucm_project(intr: Intrinsics, p_cam: np.ndarray) -> Optional[tuple[float, float]]:
    """Project one camera-frame point; None when behind the camera."""
    p_cam = np.asarray(p_cam, dtype=np.float64)
    d = np.linalg.norm(p_cam)
    denom = intr.zeta * d + p_cam[2]
    if p_cam[2] <= 0 or denom <= _DENOM_EPS:
        return None
    u = intr.gamma_x * p_cam[0] / denom + intr.c_x
    v = intr.gamma_y * p_cam[1] / denom + intr.c_y
    return float(u), float(v)


def project_points(
    intr: Intrinsics,
    pose: Pose,
    positions: np.ndarray,
    colors: np.ndarray,
) -> Projections:
    """Project world points into pixel space, dropping behind-camera points."""
    positions = np.asarray(positions, dtype=np.float64)
    cam = world_to_camera(pose, positions)
    if intr.zeta == 0.0:
        # pinhole special case: denominator is just z, skip the norms
        denom = cam[:, 2]
        keep = denom > _DENOM_EPS
    else:
        d = np.linalg.norm(cam, axis=1)
        denom = intr.zeta * d + cam[:, 2]
        keep = (cam[:, 2] > 0) & (denom > _DENOM_EPS)
    cam = cam[keep]
    denom = denom[keep]
    u = intr.gamma_x * cam[:, 0] / denom + intr.c_x
    v = intr.gamma_y * cam[:, 1] / denom + intr.c_y
    return Projections(u, v, cam[:, 2], positions[keep, 2], np.asarray(colors)[keep])


def compute_roi(projections: Projections, epsilon: float) -> ROI:
    """Tight pixel rectangle of the projections, grown by epsilon per side.

    Zero-extent sides (single point or axis-aligned degeneracy) are widened
    by half a pixel each way so the rectangle stays usable.
    """
    if len(projections) == 0:
        raise ValueError("cannot compute an ROI from zero retained projections")
    u_min, u_max = float(projections.u.min()), float(projections.u.max())
    v_min, v_max = float(projections.v.min()), float(projections.v.max())
    u_min, u_max = _expand(u_min, u_max, epsilon)
    v_min, v_max = _expand(v_min, v_max, epsilon)
    return ROI(u_min, u_max, v_min, v_max, epsilon)


def _expand(lo: float, hi: float, epsilon: float) -> tuple[float, float]:
    extent = hi - lo
    if extent <= 0:
        return lo - _DEGENERATE_HALF_WIDTH, hi + _DEGENERATE_HALF_WIDTH
    return lo - epsilon * extent, hi + epsilon * extent


def _grid_index(coords: np.ndarray, lo: float, hi: float, size: int) -> np.ndarray:
    """floor((c - lo) / (hi - lo) * size) clamped to [0, size - 1].

    Inputs already lie in [lo, hi], so the scaled values are nonnegative and
    int-cast truncation equals floor.
    """
    scaled = coords - lo
    scaled /= hi - lo
    scaled *= size
    cells = scaled.astype(np.int64)
    np.minimum(cells, size - 1, out=cells)
    return cells


def rasterize(
    projections: Projections,
    roi: ROI,
    size: int,
    background: tuple[int, int, int] = (0, 0, 0),
) -> SyntheticImage:
    """Assign projections inside the ROI to a size x size grid.

    Pixel index = floor((coord - lo) / extent * size), clamped to the grid.
    When several points land on one pixel the greatest world height wins;
    ties fall to the smaller depth, then the smaller input index, so the
    result is independent of input order.
    """
    if size < 8:
        raise ValueError("grid size must be >= 8 pixels")
    bg = np.asarray(background, dtype=np.uint8)
    pixels = np.empty((size, size, 3), dtype=np.uint8)
    pixels[:] = bg
    occupancy = np.zeros((size, size), dtype=bool)

    inside = np.flatnonzero(
        (projections.u >= roi.u_min) & (projections.u <= roi.u_max)
        & (projections.v >= roi.v_min) & (projections.v <= roi.v_max))
    if inside.size:
        cols = _grid_index(projections.u[inside], roi.u_min, roi.u_max, size)
        rows = _grid_index(projections.v[inside], roi.v_min, roi.v_max, size)
        world_z = projections.world_z[inside]
        depth = projections.depth[inside]
        idx = np.arange(inside.size)
        # ascending sort so the per-pixel winner lands last in the scatter
        order = np.lexsort((-idx, -depth, world_z))
        flat = rows * size
        flat += cols
        slot = np.full(size * size, -1, dtype=np.int64)
        slot[flat[order]] = order
        winners = slot[slot >= 0]
        colors8 = np.clip(np.round(projections.colors[inside[winners]] * 255.0),
                          0, 255).astype(np.uint8)
        pixels[rows[winners], cols[winners]] = colors8
        occupancy[rows[winners], cols[winners]] = True

    return SyntheticImage(size, size, pixels, occupancy,
                          (int(bg[0]), int(bg[1]), int(bg[2])))
