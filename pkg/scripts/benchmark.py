#!/usr/bin/env python3
"""Measure per-view render latency and batch throughput.

Renders a fixed random scene at several point counts and reports median
per-view wall time for object-only and full-scene sources, plus threaded
batch throughput in views/second.
"""

import argparse
import json
import tempfile
import time
from pathlib import Path

import numpy as np

import pcviews as pv


def median_view_ms(scene, prop, config, reps):
    pv.render_object_views(scene, prop, config)  # warmup
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        pv.render_object_views(scene, prop, config)
        times.append((time.perf_counter() - t0) * 1000 / config.views)
    return float(np.median(times))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=21)
    ap.add_argument("--object-points", type=int, default=1024)
    ap.add_argument("--workers", type=int, default=4)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    for n in (10_000, 100_000, 500_000):
        positions = rng.uniform((0, 0, 0), (8, 6, 3), size=(n, 3))
        colors = rng.uniform(0, 1, size=(n, 3))
        scene = pv.Scene.from_points(positions, colors)
        idx = np.sort(rng.choice(n, size=args.object_points, replace=False))
        prop = pv.proposal_from_indices("bench", idx, scene)

        obj_ms = median_view_ms(scene, prop, pv.RenderConfig(source="object"), args.reps)
        scene_ms = median_view_ms(scene, prop, pv.RenderConfig(source="scene"), args.reps)
        print(f"{n:>8d} pts  object-only {obj_ms:7.3f} ms/view   "
              f"full-scene {scene_ms:7.2f} ms/view")

    # threaded batch throughput on a mid-size scene with many objects
    n = 100_000
    positions = rng.uniform((0, 0, 0), (8, 6, 3), size=(n, 3))
    colors = rng.uniform(0, 1, size=(n, 3))
    scene = pv.Scene.from_points(positions, colors)
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        pv.save_scene(tmp / "bench.ply", scene)
        records = [{"id": f"obj_{i}",
                    "indices": [int(j) for j in
                                rng.choice(n, size=args.object_points, replace=False)]}
                   for i in range(16)]
        (tmp / "bench.json").write_text(json.dumps(records))
        summary = pv.run_batch([tmp / "bench.ply"], [tmp / "bench.json"],
                               tmp / "out", pv.RenderConfig(workers=args.workers))
    print(f"batch: {summary.rendered_views} views in {summary.wall_time_s:.2f}s "
          f"({summary.rendered_views / summary.wall_time_s:.0f} views/s, "
          f"{args.workers} workers)")


if __name__ == "__main__":
    main()
