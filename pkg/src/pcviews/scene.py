"""Point-cloud scenes and object proposals.

Scenes are immutable after load and safe to share across concurrent
renderers; proposals reference point indices rather than copying points.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import plyio

FLOOR_PERCENTILE = 0.5  # z-percentile used as the floor estimate
FLOOR_MIN_POINTS = 200  # below this, fall back to min z
MIN_PROPOSAL_POINTS = 4


@dataclass(frozen=True)
class Point:
    """One colored point: position in meters, RGB in [0, 1]."""

    position: np.ndarray
    color: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return (np.array_equal(self.position, other.position)
                and np.array_equal(self.color, other.color))


@dataclass(frozen=True)
class AABB:
    """Axis-aligned box, lo <= hi componentwise."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=np.float64)
        hi = np.asarray(self.hi, dtype=np.float64)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo.shape != (3,) or hi.shape != (3,):
            raise ValueError("AABB corners must be 3-vectors")
        if np.any(lo > hi):
            raise ValueError("AABB requires lo <= hi componentwise")

    def __eq__(self, other):
        if not isinstance(other, AABB):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)

    @property
    def center(self) -> np.ndarray:
        return (self.lo + self.hi) / 2.0

    @property
    def extents(self) -> np.ndarray:
        return self.hi - self.lo

    @classmethod
    def of_points(cls, positions: np.ndarray) -> "AABB":
        positions = np.asarray(positions, dtype=np.float64)
        if positions.size == 0:
            raise ValueError("cannot bound an empty point set")
        return cls(positions.min(axis=0), positions.max(axis=0))


@dataclass(frozen=True)
class Scene:
    """A colored point cloud with its derived center and floor height."""

    positions: np.ndarray  # (N, 3) float64, meters
    colors: np.ndarray     # (N, 3) float64 in [0, 1]
    center: np.ndarray     # (3,) AABB midpoint
    floor_height: float

    def __len__(self) -> int:
        return self.positions.shape[0]

    @property
    def aabb(self) -> AABB:
        return AABB.of_points(self.positions)

    def point(self, i: int) -> Point:
        return Point(self.positions[i].copy(), self.colors[i].copy())

    @classmethod
    def from_points(cls, positions: np.ndarray, colors: np.ndarray) -> "Scene":
        positions = np.ascontiguousarray(positions, dtype=np.float64)
        colors = np.ascontiguousarray(colors, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] != 3:
            raise ValueError("positions must have shape (N, 3)")
        if colors.shape != positions.shape:
            raise ValueError("colors must match positions in shape")
        if positions.shape[0] == 0:
            raise ValueError("scene must contain at least one point")
        if not np.isfinite(positions).all():
            raise ValueError("positions must be finite")
        if colors.min() < 0.0 or colors.max() > 1.0:
            raise ValueError("colors must lie in [0, 1]")
        positions.setflags(write=False)
        colors.setflags(write=False)
        center = _aabb_midpoint(positions)
        floor = _floor_height(positions[:, 2])
        return cls(positions, colors, center, floor)


@dataclass(frozen=True)
class ObjectProposal:
    """Point subset of a scene plus its recomputed bounding box."""

    id: str
    point_indices: np.ndarray  # (N',) int64, unique
    bbox: AABB

    def __eq__(self, other):
        if not isinstance(other, ObjectProposal):
            return NotImplemented
        return (self.id == other.id
                and np.array_equal(self.point_indices, other.point_indices)
                and self.bbox == other.bbox)


def _aabb_midpoint(positions: np.ndarray) -> np.ndarray:
    return (positions.min(axis=0) + positions.max(axis=0)) / 2.0


def _floor_height(z: np.ndarray) -> float:
    if z.shape[0] < FLOOR_MIN_POINTS:
        return float(z.min())
    return float(np.percentile(z, FLOOR_PERCENTILE))


def compute_scene_center(scene: Scene) -> np.ndarray:
    """Midpoint of the scene's axis-aligned bounding box."""
    return _aabb_midpoint(scene.positions)


def compute_floor_height(scene: Scene) -> float:
    """Noise-robust floor estimate: 0.5th z-percentile (min z for tiny clouds)."""
    return _floor_height(scene.positions[:, 2])


def load_scene(path) -> Scene:
    """Load a colored PLY cloud (ascii or binary little-endian)."""
    positions, colors = plyio.load_ply(path)
    return Scene.from_points(positions, colors)


def save_scene(path, scene: Scene, binary: bool = True) -> None:
    plyio.save_ply(path, scene.positions, scene.colors, binary=binary)


def proposal_from_indices(object_id: str, indices, scene: Scene) -> ObjectProposal:
    indices = np.asarray(indices, dtype=np.int64)
    if indices.size == 0:
        raise ValueError(f"proposal {object_id!r} has an empty index list")
    if np.unique(indices).size != indices.size:
        raise ValueError(f"proposal {object_id!r} has duplicate indices")
    if indices.min() < 0 or indices.max() >= len(scene):
        raise IndexError(f"proposal {object_id!r} has out-of-range indices")
    if indices.size >= len(scene):
        raise ValueError(f"proposal {object_id!r} must be a strict subset of the scene")
    bbox = AABB.of_points(scene.positions[indices])
    indices.setflags(write=False)
    return ObjectProposal(object_id, indices, bbox)


def load_proposals(path, scene: Scene) -> list[ObjectProposal]:
    """Load object proposals from a JSON array of {"id", "indices"} records.

    Bounding boxes are always recomputed from the referenced points; an
    optional "bbox" field in the file is ignored.  Proposals with fewer
    than 4 points are dropped.
    """
    with open(Path(path), "r", encoding="utf-8") as fh:
        records = json.load(fh)
    if not isinstance(records, list):
        raise ValueError("proposals file must contain a top-level array")
    proposals = []
    seen = set()
    for rec in records:
        object_id = str(rec["id"])
        if object_id in seen:
            raise ValueError(f"duplicate object id {object_id!r}")
        seen.add(object_id)
        indices = rec["indices"]
        if len(indices) == 0:
            raise ValueError(f"proposal {object_id!r} has an empty index list")
        if len(indices) < MIN_PROPOSAL_POINTS:
            continue
        proposals.append(proposal_from_indices(object_id, indices, scene))
    return proposals


def save_proposals(path, proposals: list[ObjectProposal]) -> None:
    records = [
        {"id": p.id, "indices": [int(i) for i in p.point_indices]}
        for p in proposals
    ]
    with open(Path(path), "w", encoding="utf-8") as fh:
        json.dump(records, fh)


def sample_proposal_points(
    proposal: ObjectProposal, scene: Scene, n: int, rng: np.random.Generator
) -> np.ndarray:
    """Sample n points of a proposal as a (n, 6) array of position+color.

    Without replacement when the proposal has at least n points, with
    replacement otherwise.  Deterministic for a seeded generator.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    indices = proposal.point_indices
    if indices.size == 0:
        raise ValueError("empty proposal")
    replace = indices.size < n
    chosen = rng.choice(indices, size=n, replace=replace)
    return np.hstack([scene.positions[chosen], scene.colors[chosen]])
