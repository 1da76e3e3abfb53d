#!/usr/bin/env python3
"""
Overlay Rendering
Color-coded cell tinting of whole frames
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from PIL import Image, ImageDraw

from ..core.images import ImageBuffer
from ..core.taxonomy import Taxonomy
from ..utils.errors import ShapeError, UsageError
from ..utils.validators import Validators

RGB = Tuple[int, int, int]

DEFAULT_ALPHA = 0.35

CLASS_COLORS: Dict[str, RGB] = {
    "Strappy": (255, 255, 0),
    "Ferny": (255, 0, 0),
    "Rounded": (0, 0, 255),
    "Background": (255, 192, 203),
    "Substrate": (255, 192, 203),
    "Water": (0, 255, 255),
}


@dataclass(frozen=True)
class Palette:
    """Class index -> RGB color, plus the tint alpha"""
    taxonomy: Taxonomy
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not (Validators.is_finite(self.alpha) and 0.0 <= self.alpha <= 1.0):
            raise UsageError(f"overlay alpha must lie in [0, 1], got {self.alpha}")

    @classmethod
    def for_taxonomy(cls, taxonomy: Taxonomy, alpha: float = DEFAULT_ALPHA) -> 'Palette':
        return cls(taxonomy, alpha)

    def color_of(self, index: int) -> RGB:
        return CLASS_COLORS[self.taxonomy.name_of(index)]

    def hex_of(self, index: int) -> str:
        return "#%02x%02x%02x" % self.color_of(index)

    def class_of_color(self, rgb) -> Optional[int]:
        """First class whose color matches, or None"""
        for index in range(self.taxonomy.size):
            if tuple(int(c) for c in rgb) == self.color_of(index):
                return index
        return None


def blend(pixels: np.ndarray, color: RGB, alpha: float) -> np.ndarray:
    """round((1 - alpha) * c + alpha * p) per channel, halves rounded up"""
    mixed = (1.0 - alpha) * pixels.astype(np.float64) + alpha * np.asarray(color, dtype=np.float64)
    return np.clip(np.floor(mixed + 0.5), 0, 255).astype(np.uint8)


def render_overlay(image: ImageBuffer, labels, palette: Palette) -> ImageBuffer:
    """Tint every classified cell and outline it in its class color.

    Skipped cells and pixels outside the grid (remainder strips) are left
    untouched. Alpha 0 returns the input unchanged.
    """
    if (image.width, image.height) != (labels.width, labels.height):
        raise ShapeError(
            f"label grid was computed for {labels.width}x{labels.height} but image is {image.width}x{image.height}"
        )
    if palette.taxonomy.size < labels.class_count:
        raise ShapeError("palette has fewer classes than the label grid")
    if palette.alpha == 0.0:
        return image

    pixels = np.array(image.data)
    boxes = []
    for row, col, label in labels.classified_cells():
        left, top, right, bottom = labels.cell_box(row, col)
        color = palette.color_of(label)
        pixels[top:bottom, left:right] = blend(pixels[top:bottom, left:right], color, palette.alpha)
        boxes.append(((left, top, right - 1, bottom - 1), color))

    canvas = Image.fromarray(pixels)
    draw = ImageDraw.Draw(canvas)
    for box, color in boxes:
        draw.rectangle(box, outline=color, width=1)
    return ImageBuffer(np.asarray(canvas, dtype=np.uint8))
