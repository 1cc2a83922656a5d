"""Handle-based binding layer for online view generation in training loops.

Loads a scene once and renders any number of (proposal, config, seed)
requests against it, returning stacked contiguous arrays ready for an
encoder: uint8 images of shape (views, H, W, 3) and float64 geo vectors
of shape (views, 30).  Output bytes match the batch/CLI path exactly for
the same scene file, proposal, config, and seed.
"""

from __future__ import annotations

import json
from dataclasses import fields
from pathlib import Path
from typing import Optional

import numpy as np

import pcviews as pv

__all__ = ["SceneHandle", "open_scene", "render_views"]
__version__ = "0.1.0"

_CONFIG_FIELDS = {f.name for f in fields(pv.RenderConfig)}


class SceneHandle:
    """Immutable loaded scene, shareable across threads for reads.

    The handle carries the scene id (the source file's stem) so that
    per-view seed derivation matches the batch renderer byte-for-byte.
    """

    def __init__(self, scene: pv.Scene, scene_id: str):
        self._scene = scene
        self._scene_id = scene_id

    @property
    def scene_id(self) -> str:
        return self._scene_id

    @property
    def point_count(self) -> int:
        self._check_open()
        return len(self._scene)

    def release(self) -> None:
        """Drop the scene reference; subsequent renders raise."""
        self._scene = None

    def _check_open(self) -> None:
        if self._scene is None:
            raise ValueError("scene handle has been released")


def open_scene(path) -> SceneHandle:
    """Load a PLY scene once for reuse across many render calls."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"scene file not found: {path}")
    return SceneHandle(pv.load_scene(path), path.stem)


def _build_config(record: Optional[dict], seed: Optional[int]) -> pv.RenderConfig:
    record = dict(record or {})
    aug = record.pop("augment", None)
    unknown = set(record) - _CONFIG_FIELDS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    for key in ("background", "angles"):
        if key in record and record[key] is not None:
            record[key] = tuple(record[key])
    if isinstance(aug, dict):
        aug = pv.AugmentConfig(
            camera=pv.CameraAugConfig(**{
                k: tuple(v) if isinstance(v, (list, tuple)) else v
                for k, v in aug.get("camera", {}).items()}),
            image=pv.ImageAugConfig(**aug.get("image", {})),
            per_object=aug.get("per_object", False),
        )
    if aug is not None:
        record["augment"] = aug
    if seed is not None:
        record["seed"] = seed
    config = pv.RenderConfig(**record)
    diag = pv.validate_config(config)
    if not diag.ok:
        raise ValueError("; ".join(diag.errors))
    return config


def render_views(
    handle: SceneHandle,
    proposal: dict,
    config: Optional[dict] = None,
    seed: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray, list[dict]]:
    """Render all views of one proposal against a loaded scene.

    proposal is a {"id": ..., "indices": [...]} record; config is a dict of
    render settings (same names as the CLI flags); seed, when given,
    overrides the config seed.  Returns (images, geo, meta) with images a
    C-contiguous uint8 array of shape (views, H, W, 3), geo float64 of
    shape (views, 30), and meta a list of parsed metadata records.
    """
    handle._check_open()
    cfg = _build_config(config, seed)
    prop = pv.proposal_from_indices(
        str(proposal["id"]),
        np.asarray(proposal["indices"], dtype=np.int64),
        handle._scene,
    )
    results = pv.render_object_views(handle._scene, prop, cfg,
                                     scene_id=handle.scene_id)
    errors = [f"view {k}: {r.error}" for k, r in enumerate(results) if not r.ok]
    if errors:
        raise RuntimeError("; ".join(errors))

    images = np.ascontiguousarray(
        np.stack([r.image.pixels for r in results]))
    geo = np.ascontiguousarray(
        np.stack([r.geo.values for r in results]))
    meta = [json.loads(pv.serialize_meta(r.meta, r.geo)) for r in results]
    return images, geo, meta
