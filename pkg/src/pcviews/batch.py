"""Batch driver: render every proposal of every scene to PNG + metadata.

Work units are (scene, object) pairs dispatched to a thread pool; each
unit owns its output directory, so there is no shared mutable state and
the output tree is a pure function of (inputs, config, seed).
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from PIL import Image

from .config import RenderConfig
from .geosem import serialize_meta
from .render import render_object_views
from .scene import ObjectProposal, Scene, load_proposals, load_scene

log = logging.getLogger(__name__)


@dataclass
class BatchSummary:
    objects: int = 0
    rendered_views: int = 0
    failed_views: int = 0
    failed_objects: int = 0
    wall_time_s: float = 0.0


def write_png(path, image) -> None:
    Image.fromarray(image.pixels, mode="RGB").save(path, format="PNG")


def _render_unit(scene: Scene, scene_id: str, proposal: ObjectProposal,
                 out_dir: Path, config: RenderConfig) -> tuple[int, int]:
    obj_dir = out_dir / scene_id / proposal.id
    obj_dir.mkdir(parents=True, exist_ok=True)
    results = render_object_views(scene, proposal, config, scene_id=scene_id)
    lines = []
    ok = failed = 0
    for k, result in enumerate(results):
        if not result.ok:
            log.warning("view %d of %s/%s failed: %s",
                        k, scene_id, proposal.id, result.error)
            failed += 1
            continue
        write_png(obj_dir / f"view_{k}.png", result.image)
        lines.append(serialize_meta(result.meta, result.geo))
        ok += 1
    with open(obj_dir / "meta.jsonl", "w", encoding="utf-8") as fh:
        fh.write("".join(line + "\n" for line in lines))
    return ok, failed


def run_batch(scene_paths, proposal_paths, out_dir, config: RenderConfig) -> BatchSummary:
    """Render all objects of all scenes under out_dir.

    scene_paths and proposal_paths are matched positionally.  Per-object
    failures are logged and counted; the batch continues.
    """
    scene_paths = [Path(p) for p in scene_paths]
    proposal_paths = [Path(p) for p in proposal_paths]
    if len(scene_paths) != len(proposal_paths):
        raise ValueError("need one proposals file per scene")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    started = time.perf_counter()
    summary = BatchSummary()
    units = []
    for scene_path, proposal_path in zip(scene_paths, proposal_paths):
        scene = load_scene(scene_path)
        proposals = load_proposals(proposal_path, scene)
        scene_id = scene_path.stem
        for proposal in proposals:
            units.append((scene, scene_id, proposal))
    summary.objects = len(units)

    def worker(unit):
        scene, scene_id, proposal = unit
        try:
            return _render_unit(scene, scene_id, proposal, out_dir, config)
        except Exception:
            log.exception("object %s/%s failed", scene_id, proposal.id)
            return None

    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        for outcome in pool.map(worker, units):
            if outcome is None:
                summary.failed_objects += 1
            else:
                ok, failed = outcome
                summary.rendered_views += ok
                summary.failed_views += failed

    summary.wall_time_s = time.perf_counter() - started
    return summary
