import numpy as np
import pytest

import pcviews as pv


def make_scene(n=2000, seed=0, lo=(0.0, 0.0, 0.0), hi=(6.0, 5.0, 3.0)):
    rng = np.random.default_rng(seed)
    positions = rng.uniform(lo, hi, size=(n, 3))
    colors = rng.uniform(0.0, 1.0, size=(n, 3))
    return pv.Scene.from_points(positions, colors)


def make_proposal(scene, object_id="obj", n_points=200, seed=1):
    rng = np.random.default_rng(seed)
    indices = rng.choice(len(scene), size=min(n_points, len(scene) - 1), replace=False)
    return pv.proposal_from_indices(object_id, np.sort(indices), scene)


@pytest.fixture
def scene():
    return make_scene()


@pytest.fixture
def proposal(scene):
    return make_proposal(scene)


def brute_force_rasterize(proj, roi, size, background=(0, 0, 0)):
    """Independent O(points x pixels) oracle with the max-height rule."""
    bg = np.asarray(background, dtype=np.uint8)
    pixels = np.empty((size, size, 3), dtype=np.uint8)
    pixels[:] = bg
    occupancy = np.zeros((size, size), dtype=bool)
    for row in range(size):
        for col in range(size):
            best = None
            for i in range(len(proj)):
                u, v = proj.u[i], proj.v[i]
                if not (roi.u_min <= u <= roi.u_max and roi.v_min <= v <= roi.v_max):
                    continue
                c = int(np.floor((u - roi.u_min) / (roi.u_max - roi.u_min) * size))
                r = int(np.floor((v - roi.v_min) / (roi.v_max - roi.v_min) * size))
                c = min(max(c, 0), size - 1)
                r = min(max(r, 0), size - 1)
                if (r, c) != (row, col):
                    continue
                key = (-proj.world_z[i], proj.depth[i], i)
                if best is None or key < best[0]:
                    best = (key, i)
            if best is not None:
                i = best[1]
                pixels[row, col] = np.clip(
                    np.round(proj.colors[i] * 255.0), 0, 255
                ).astype(np.uint8)
                occupancy[row, col] = True
    return pixels, occupancy


def random_projections(rng, n, span=30.0):
    u = rng.uniform(0.0, span, size=n)
    v = rng.uniform(0.0, span, size=n)
    depth = rng.uniform(0.1, 10.0, size=n)
    # coarse grid of heights to force plenty of exact ties
    world_z = rng.integers(0, 4, size=n).astype(np.float64) * 0.5
    colors = rng.uniform(0.0, 1.0, size=(n, 3))
    return pv.Projections(u, v, depth, world_z, colors)
