"""Camera-parameter sampling, image-space augmentation, and camera dropout.

Camera augmentation perturbs the virtual rig (placement distances, ROI
extension, intrinsic noise) before rendering; image augmentation operates
on the finished raster.  All sampling is uniform over configured ranges
and reproducible for a seeded generator.  Image transforms run in a fixed
order and use nearest-neighbor resampling so output bytes are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .camera import Intrinsics
from .projector import SyntheticImage

_MIN_FOCAL = 1e-6


@dataclass(frozen=True)
class CameraAugConfig:
    """Uniform sampling ranges for the virtual camera parameters."""

    d_f_range: tuple[float, float] = (1.5, 4.0)
    d_up_range: tuple[float, float] = (0.5, 2.5)
    epsilon_range: tuple[float, float] = (0.02, 0.15)
    intrinsic_noise_sigma: float = 0.05  # relative, uniform(-sigma, sigma)


@dataclass(frozen=True)
class ImageAugConfig:
    """Per-transform probabilities and magnitudes for image augmentation."""

    hflip_prob: float = 0.0
    vflip_prob: float = 0.0
    color_jitter_prob: float = 0.0
    color_jitter_strength: float = 0.2
    blur_prob: float = 0.0
    scale_prob: float = 0.0
    scale_max_delta: float = 0.2       # zoom factor in [1-d, 1+d]
    shift_prob: float = 0.0
    shift_max_frac: float = 0.2        # of image size, per axis
    crop_prob: float = 0.0
    crop_fraction: float = 0.8         # side fraction kept, then resized back

    PROB_FIELDS = ("hflip_prob", "vflip_prob", "color_jitter_prob",
                   "blur_prob", "scale_prob", "shift_prob", "crop_prob")


def sample_camera_params(
    rng: np.random.Generator, cfg: CameraAugConfig, base: Intrinsics
) -> tuple[float, float, float, Intrinsics]:
    """Draw (d_f, d_up, epsilon) uniformly and jitter the intrinsics.

    Each intrinsic parameter is scaled by (1 + eta), eta ~ U(-sigma, sigma),
    with focals clamped positive and zeta clamped nonnegative.
    """
    d_f = float(rng.uniform(*cfg.d_f_range))
    d_up = float(rng.uniform(*cfg.d_up_range))
    epsilon = float(rng.uniform(*cfg.epsilon_range))
    sigma = cfg.intrinsic_noise_sigma
    eta = rng.uniform(-sigma, sigma, size=5)
    intr = Intrinsics(
        gamma_x=max(base.gamma_x * (1.0 + eta[0]), _MIN_FOCAL),
        gamma_y=max(base.gamma_y * (1.0 + eta[1]), _MIN_FOCAL),
        c_x=base.c_x * (1.0 + eta[2]),
        c_y=base.c_y * (1.0 + eta[3]),
        zeta=max(base.zeta * (1.0 + eta[4]), 0.0),
    )
    return d_f, d_up, epsilon, intr


def apply_camera_dropout(
    views: Sequence[SyntheticImage], rng: np.random.Generator, drop_count: int
) -> list[SyntheticImage]:
    """Replace drop_count random views by byte-copies of surviving views.

    The view count is preserved so downstream fixed-v consumers stay
    shape-stable; at least one original view always survives.
    """
    n = len(views)
    if not 0 <= drop_count < n:
        raise ValueError("drop_count must satisfy 0 <= drop_count < len(views)")
    if drop_count == 0:
        return list(views)
    dropped = rng.choice(n, size=drop_count, replace=False)
    survivors = np.setdiff1d(np.arange(n), dropped)
    out = list(views)
    for slot in dropped:
        source = views[int(rng.choice(survivors))]
        out[int(slot)] = replace(
            source, pixels=source.pixels.copy(), occupancy=source.occupancy.copy()
        )
    return out


def apply_image_aug(
    image: SyntheticImage, rng: np.random.Generator, cfg: ImageAugConfig
) -> SyntheticImage:
    """Apply enabled transforms with their probabilities, in fixed order.

    Order: hflip, vflip, color jitter, blur, scale, shift, crop-and-resize.
    Output dimensions always equal input dimensions.
    """
    img = image
    if rng.uniform() < cfg.hflip_prob:
        img = _replace_raster(img, img.pixels[:, ::-1], img.occupancy[:, ::-1])
    if rng.uniform() < cfg.vflip_prob:
        img = _replace_raster(img, img.pixels[::-1], img.occupancy[::-1])
    if rng.uniform() < cfg.color_jitter_prob:
        img = _color_jitter(img, rng, cfg.color_jitter_strength)
    if rng.uniform() < cfg.blur_prob:
        img = _box_blur(img)
    if rng.uniform() < cfg.scale_prob:
        factor = float(rng.uniform(1.0 - cfg.scale_max_delta, 1.0 + cfg.scale_max_delta))
        img = _zoom(img, factor)
    if rng.uniform() < cfg.shift_prob:
        max_px = cfg.shift_max_frac * img.height
        dy = int(round(rng.uniform(-max_px, max_px)))
        dx = int(round(rng.uniform(-max_px, max_px)))
        img = _shift(img, dy, dx)
    if rng.uniform() < cfg.crop_prob:
        img = _crop_resize(img, rng, cfg.crop_fraction)
    return img


def _replace_raster(img: SyntheticImage, pixels, occupancy) -> SyntheticImage:
    return replace(img, pixels=np.ascontiguousarray(pixels),
                   occupancy=np.ascontiguousarray(occupancy))


def _color_jitter(img: SyntheticImage, rng, strength: float) -> SyntheticImage:
    factors = rng.uniform(1.0 - strength, 1.0 + strength, size=3)
    pixels = img.pixels.copy()
    occ = img.occupancy
    jittered = np.clip(np.round(pixels[occ].astype(np.float64) * factors), 0, 255)
    pixels[occ] = jittered.astype(np.uint8)
    return replace(img, pixels=pixels)


def _box_blur(img: SyntheticImage) -> SyntheticImage:
    """3x3 box filter; occupancy dilates by one pixel, background stays exact."""
    padded = np.pad(img.pixels.astype(np.float64), ((1, 1), (1, 1), (0, 0)))
    acc = np.zeros_like(img.pixels, dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            acc += padded[dy:dy + img.height, dx:dx + img.width]
    blurred = np.clip(np.round(acc / 9.0), 0, 255).astype(np.uint8)
    occ_pad = np.pad(img.occupancy, 1)
    occ = np.zeros_like(img.occupancy)
    for dy in range(3):
        for dx in range(3):
            occ |= occ_pad[dy:dy + img.height, dx:dx + img.width]
    blurred[~occ] = np.asarray(img.background, dtype=np.uint8)
    return replace(img, pixels=blurred, occupancy=occ)


def _remap(img: SyntheticImage, src_rows: np.ndarray, src_cols: np.ndarray) -> SyntheticImage:
    """Nearest-neighbor remap; out-of-bounds sources become background."""
    h, w = img.height, img.width
    valid = (src_rows >= 0) & (src_rows < h) & (src_cols >= 0) & (src_cols < w)
    rows = np.clip(src_rows, 0, h - 1)
    cols = np.clip(src_cols, 0, w - 1)
    pixels = img.pixels[rows, cols]
    occupancy = img.occupancy[rows, cols] & valid
    pixels[~occupancy] = np.asarray(img.background, dtype=np.uint8)
    return replace(img, pixels=pixels, occupancy=occupancy)


def _zoom(img: SyntheticImage, factor: float) -> SyntheticImage:
    h, w = img.height, img.width
    cy, cx = (h - 1) / 2.0, (w - 1) / 2.0
    rows, cols = np.indices((h, w))
    src_rows = np.round((rows - cy) / factor + cy).astype(np.int64)
    src_cols = np.round((cols - cx) / factor + cx).astype(np.int64)
    return _remap(img, src_rows, src_cols)


def _shift(img: SyntheticImage, dy: int, dx: int) -> SyntheticImage:
    rows, cols = np.indices((img.height, img.width))
    return _remap(img, rows - dy, cols - dx)


def _crop_resize(img: SyntheticImage, rng, fraction: float) -> SyntheticImage:
    h, w = img.height, img.width
    ch = max(int(round(fraction * h)), 1)
    cw = max(int(round(fraction * w)), 1)
    top = int(rng.integers(0, h - ch + 1))
    left = int(rng.integers(0, w - cw + 1))
    rows, cols = np.indices((h, w))
    src_rows = top + (rows * ch) // h
    src_cols = left + (cols * cw) // w
    return _remap(img, src_rows, src_cols)
