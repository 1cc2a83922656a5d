"""Render configuration, validation, and config-file parsing.

Defaults reproduce the reference operating point: 5 views at 30-degree
steps, 32-pixel images, camera 2 m from the prominent face and 1 m above
the floor, 2% ROI extension.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .augment import CameraAugConfig, ImageAugConfig

SOURCES = ("object", "scene")


@dataclass(frozen=True)
class AugmentConfig:
    camera: CameraAugConfig = field(default_factory=CameraAugConfig)
    image: ImageAugConfig = field(default_factory=ImageAugConfig)
    # resample camera parameters once per object instead of per view
    per_object: bool = False


@dataclass(frozen=True)
class RenderConfig:
    views: int = 5
    theta_step: float = 30.0
    image_size: int = 32
    d_f: float = 2.0
    d_up: float = 1.0
    epsilon: float = 0.02
    source: str = "scene"
    background: tuple[int, int, int] = (0, 0, 0)
    seed: int = 0
    augment: Optional[AugmentConfig] = None
    workers: int = 1
    angles: Optional[tuple[float, ...]] = None  # explicit view angles, overrides the fan


@dataclass(frozen=True)
class Diagnostics:
    errors: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_config(config: RenderConfig) -> Diagnostics:
    """Check a configuration, returning actionable diagnostics."""
    errors = []
    warnings = []
    if config.views < 1:
        errors.append(f"views must be >= 1, got {config.views}")
    if config.image_size < 8:
        errors.append(f"image_size must be >= 8 pixels, got {config.image_size}")
    if config.d_f <= 0:
        errors.append(f"d_f must be positive meters, got {config.d_f}")
    if config.d_up < 0:
        errors.append(f"d_up must be >= 0 meters, got {config.d_up}")
    if config.epsilon < 0:
        errors.append(f"epsilon must be >= 0, got {config.epsilon}")
    if config.theta_step <= 0:
        errors.append(f"theta_step must be positive degrees, got {config.theta_step}")
    if config.source not in SOURCES:
        errors.append(f"source must be one of {SOURCES}, got {config.source!r}")
    if len(config.background) != 3 or any(
        not (0 <= int(c) <= 255) for c in config.background
    ):
        errors.append(f"background must be three 8-bit components, got {config.background}")
    if config.workers < 1:
        errors.append(f"workers must be >= 1, got {config.workers}")
    if config.angles is not None and len(config.angles) != config.views:
        errors.append(
            f"explicit angle list has {len(config.angles)} entries for {config.views} views"
        )
    if config.augment is not None:
        cam = config.augment.camera
        for name, value in (("d_f", config.d_f), ("d_up", config.d_up),
                            ("epsilon", config.epsilon)):
            lo, hi = getattr(cam, f"{name}_range")
            if lo > hi:
                errors.append(f"{name}_range is inverted: [{lo}, {hi}]")
            elif not lo <= value <= hi:
                warnings.append(
                    f"augmentation {name}_range [{lo}, {hi}] excludes the "
                    f"deterministic default {value}"
                )
        if cam.intrinsic_noise_sigma < 0:
            errors.append(
                f"intrinsic_noise_sigma must be >= 0, got {cam.intrinsic_noise_sigma}")
        img = config.augment.image
        for name in ImageAugConfig.PROB_FIELDS:
            p = getattr(img, name)
            if not 0.0 <= p <= 1.0:
                errors.append(f"{name} must lie in [0, 1], got {p}")
        if not 0.0 < img.crop_fraction <= 1.0:
            errors.append(f"crop_fraction must lie in (0, 1], got {img.crop_fraction}")
    return Diagnostics(tuple(errors), tuple(warnings))


def _parse_pair(text: str) -> tuple[float, float]:
    parts = [float(p) for p in text.replace(",", " ").split()]
    if len(parts) != 2:
        raise ValueError(f"expected 'low,high', got {text!r}")
    return parts[0], parts[1]


def _parse_background(text: str) -> tuple[int, int, int]:
    parts = [int(p) for p in text.replace(",", " ").split()]
    if len(parts) != 3:
        raise ValueError(f"expected 'r,g,b', got {text!r}")
    return parts[0], parts[1], parts[2]


def load_config_file(path) -> RenderConfig:
    """Parse a sectioned key-value config ([render], [augment.camera], [augment.image])."""
    parser = configparser.ConfigParser()
    read = parser.read(Path(path))
    if not read:
        raise FileNotFoundError(f"config file not found: {path}")

    config = RenderConfig()
    if parser.has_section("render"):
        sec = parser["render"]
        overrides = {}
        for name, caster in (
            ("views", int), ("theta_step", float), ("image_size", int),
            ("d_f", float), ("d_up", float), ("epsilon", float),
            ("source", str), ("seed", int), ("workers", int),
        ):
            if name in sec:
                overrides[name] = caster(sec[name])
        if "background" in sec:
            overrides["background"] = _parse_background(sec["background"])
        if "angles" in sec:
            overrides["angles"] = tuple(
                float(a) for a in sec["angles"].replace(",", " ").split()
            )
        config = replace(config, **overrides)
        augment_flag = sec.getboolean("augment", fallback=False)
    else:
        augment_flag = False

    has_aug_sections = (parser.has_section("augment.camera")
                        or parser.has_section("augment.image"))
    if augment_flag or has_aug_sections:
        cam_kwargs = {}
        if parser.has_section("augment.camera"):
            sec = parser["augment.camera"]
            for name in ("d_f_range", "d_up_range", "epsilon_range"):
                if name in sec:
                    cam_kwargs[name] = _parse_pair(sec[name])
            if "intrinsic_noise_sigma" in sec:
                cam_kwargs["intrinsic_noise_sigma"] = float(sec["intrinsic_noise_sigma"])
            per_object = sec.getboolean("per_object", fallback=False)
        else:
            per_object = False
        img_kwargs = {}
        if parser.has_section("augment.image"):
            sec = parser["augment.image"]
            for f in fields(ImageAugConfig):
                if f.name in sec:
                    img_kwargs[f.name] = float(sec[f.name])
        config = replace(config, augment=AugmentConfig(
            camera=CameraAugConfig(**cam_kwargs),
            image=ImageAugConfig(**img_kwargs),
            per_object=per_object,
        ))
    return config
