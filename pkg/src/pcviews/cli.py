"""Command-line batch renderer.

Flags mirror the render configuration; a sectioned config file may supply
defaults, with flags taking precedence.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from .batch import run_batch
from .config import (AugmentConfig, RenderConfig, load_config_file,
                     validate_config, _parse_background)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pcviews",
        description="Render multi-view synthetic images from point-cloud scenes.",
    )
    parser.add_argument("--scene", action="append", required=True,
                        help="PLY scene file (repeatable)")
    parser.add_argument("--proposals", action="append", required=True,
                        help="JSON proposals file, one per scene (repeatable)")
    parser.add_argument("--out-dir", required=True, help="output directory")
    parser.add_argument("--config", help="sectioned config file; flags override it")
    parser.add_argument("--views", type=int, help="views per object")
    parser.add_argument("--theta-step", type=float, help="angular step, degrees")
    parser.add_argument("--image-size", type=int, help="square image side, pixels")
    parser.add_argument("--df", type=float, dest="d_f",
                        help="camera distance from the prominent face, meters")
    parser.add_argument("--dup", type=float, dest="d_up",
                        help="camera height above the floor, meters")
    parser.add_argument("--eps", type=float, dest="epsilon",
                        help="ROI extension fraction")
    parser.add_argument("--source", choices=("object", "scene"),
                        help="points drawn into the raster")
    parser.add_argument("--background", help="background fill as 'r,g,b'")
    parser.add_argument("--seed", type=int, help="global 64-bit seed")
    parser.add_argument("--workers", type=int, help="worker threads")
    parser.add_argument("--augment", action="store_true", default=None,
                        help="enable camera+image augmentation with default ranges")
    return parser


def config_from_args(args: argparse.Namespace) -> RenderConfig:
    config = load_config_file(args.config) if args.config else RenderConfig()
    overrides = {}
    for name in ("views", "theta_step", "image_size", "d_f", "d_up",
                 "epsilon", "source", "seed", "workers"):
        value = getattr(args, name)
        if value is not None:
            overrides[name] = value
    if args.background is not None:
        overrides["background"] = _parse_background(args.background)
    if args.augment and config.augment is None:
        overrides["augment"] = AugmentConfig()
    return replace(config, **overrides)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    if len(args.scene) != len(args.proposals):
        print("error: need exactly one --proposals per --scene", file=sys.stderr)
        return 2

    config = config_from_args(args)
    diagnostics = validate_config(config)
    for warning in diagnostics.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if not diagnostics.ok:
        for error in diagnostics.errors:
            print(f"error: {error}", file=sys.stderr)
        return 2

    summary = run_batch(args.scene, args.proposals, args.out_dir, config)
    print(f"objects: {summary.objects}  rendered views: {summary.rendered_views}  "
          f"failed views: {summary.failed_views}  "
          f"failed objects: {summary.failed_objects}  "
          f"wall time: {summary.wall_time_s:.2f}s")
    return 0 if summary.failed_objects == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
