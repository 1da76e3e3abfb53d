#!/usr/bin/env python3
"""
Synthetic Dataset Generator
Desk-scale stand-in for seagrass survey frames: textured single-class images per sub-area
"""

import logging
from dataclasses import dataclass
from datetime import date, timedelta
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np

from ..augment.rng import Rng
from ..core.images import ImageBuffer, save_image
from ..core.models import Manifest, save_manifest
from ..core.taxonomy import Taxonomy
from ..ingest.manifest_builder import build_manifest
from ..ingest.splits import split_by_subarea
from ..utils.errors import DataError, UsageError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
TEST_LIST_NAME = "test_subareas.txt"
FIRST_DATE = date(2019, 3, 1)
DENSITIES = ("dense", "medium", "sparse")


@dataclass(frozen=True)
class Texture:
    """Mean color plus the pattern that sits on top of it"""
    color: Tuple[int, int, int]
    pattern: str
    frequency: float = 0.0
    blobs: int = 0
    amplitude: float = 28.0


TEXTURES: Dict[str, Texture] = {
    "Strappy": Texture((70, 140, 60), "vertical_stripes", frequency=1 / 14),
    "Ferny": Texture((150, 115, 40), "diagonal_stripes", frequency=1 / 6),
    "Rounded": Texture((55, 175, 115), "blobs", blobs=60),
    "Background": Texture((195, 175, 135), "speckle"),
    "Substrate": Texture((195, 175, 135), "speckle"),
    "Water": Texture((20, 60, 175), "gradient", amplitude=20.0),
}


@dataclass(frozen=True)
class SynthSpec:
    """What to generate: counts, frame size, geographic brightness shift and seed"""
    taxonomy: Taxonomy
    sub_areas: int = 10
    images_per_area: int = 5
    width: int = 320
    height: int = 200
    brightness_shift: float = 0.0
    test_areas: int = 2
    noise: float = 6.0
    seed: int = 0

    def __post_init__(self):
        if self.sub_areas < 1 or self.images_per_area < 1:
            raise UsageError("synthetic datasets need at least one sub-area and one image per sub-area")
        if not 0 <= self.test_areas < self.sub_areas:
            raise UsageError(f"test sub-area count must lie in [0, {self.sub_areas})")
        if self.width < 16 or self.height < 16:
            raise UsageError("synthetic frames must be at least 16x16")
        if not 0.0 <= self.brightness_shift <= 0.25:
            raise UsageError("brightness shift must lie in [0, 0.25]")

    @property
    def area_ids(self) -> List[str]:
        return [f"area{index + 1:02d}" for index in range(self.sub_areas)]


def _pattern(texture: Texture, rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    phase = rng.uniform(0, 2 * np.pi)
    if texture.pattern == "vertical_stripes":
        return np.sin(2 * np.pi * texture.frequency * xs + phase)
    if texture.pattern == "diagonal_stripes":
        return np.sin(2 * np.pi * texture.frequency * (xs + ys) / np.sqrt(2) + phase)
    if texture.pattern == "blobs":
        field = np.full((height, width), -0.5)
        for _ in range(texture.blobs):
            cx, cy = rng.uniform(0, width), rng.uniform(0, height)
            radius = rng.uniform(3, 8)
            field[(xs - cx) ** 2 + (ys - cy) ** 2 <= radius ** 2] = 0.8
        return field
    if texture.pattern == "gradient":
        return np.linspace(-1.0, 1.0, height)[:, None] * np.ones((1, width))
    return rng.uniform(-1.0, 1.0, (height, width))


def render_frame(texture: Texture, rng: np.random.Generator, width: int, height: int,
                 offset: float, noise: float) -> ImageBuffer:
    pattern = _pattern(texture, rng, width, height)[..., None]
    base = np.asarray(texture.color, dtype=np.float64)[None, None, :]
    pixels = base + texture.amplitude * pattern + offset + rng.normal(0.0, noise, (height, width, 3))
    return ImageBuffer(np.clip(np.rint(pixels), 0, 255).astype(np.uint8))


def area_offsets(spec: SynthSpec) -> Dict[str, float]:
    """Per-sub-area brightness offset in 0-255 units"""
    rng = Rng(spec.seed).child("area-shift")
    return {area: rng.child(area).uniform(-spec.brightness_shift, spec.brightness_shift) * 255.0
            for area in spec.area_ids}


def choose_test_areas(spec: SynthSpec) -> List[str]:
    if spec.test_areas == 0:
        return []
    picks = Rng(spec.seed).child("test-areas").generator.choice(spec.sub_areas, spec.test_areas, replace=False)
    return [spec.area_ids[i] for i in sorted(picks)]


def synth_dataset(out_dir: Union[str, Path], spec: SynthSpec) -> Manifest:
    """Write root/<class>/<sub_area>/<date>[_<density>]_<n>.png plus manifest and test list"""
    root = Path(out_dir)
    try:
        root.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataError(f"cannot create output directory {root}: {e}")

    offsets = area_offsets(spec)
    base = Rng(spec.seed).child("frames")
    written = 0
    for label, name in enumerate(spec.taxonomy.names):
        texture = TEXTURES[name]
        seagrass = spec.taxonomy.is_seagrass(label)
        for area_index, area in enumerate(spec.area_ids):
            area_dir = root / name / area
            try:
                area_dir.mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise DataError(f"cannot create {area_dir}: {e}")
            stamp = (FIRST_DATE + timedelta(days=7 * area_index)).strftime("%Y%m%d")
            for number in range(spec.images_per_area):
                rng = base.child(name, area, number).generator
                frame = render_frame(texture, rng, spec.width, spec.height, offsets[area], spec.noise)
                token = f"_{DENSITIES[number % len(DENSITIES)]}" if seagrass else ""
                save_image(frame, area_dir / f"{stamp}{token}_{number + 1:04d}.png")
                written += 1

    test_areas = choose_test_areas(spec)
    (root / TEST_LIST_NAME).write_text("".join(f"{area}\n" for area in test_areas))
    manifest = split_by_subarea(build_manifest(root, spec.taxonomy), test_areas)
    save_manifest(manifest, root / MANIFEST_NAME)
    logger.info(f"✅ Synthesized {written} frames under {root} ({len(test_areas)} test sub-areas)")
    return manifest
