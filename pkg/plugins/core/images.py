#!/usr/bin/env python3
"""
Image Buffers
8-bit RGB images and their file I/O
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..utils.errors import DataError, ShapeError

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """Row-major interleaved RGB pixels, shape (height, width, 3), uint8"""
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if data.ndim != 3 or data.shape[2] != 3:
            raise ShapeError(f"image data must have shape (height, width, 3), got {data.shape}")
        if data.dtype != np.uint8:
            raise ShapeError(f"image data must be uint8, got {data.dtype}")
        data = np.ascontiguousarray(data)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def channels(self) -> int:
        return 3

    def crop(self, left: int, top: int, width: int, height: int) -> 'ImageBuffer':
        return ImageBuffer(self.data[top:top + height, left:left + width])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    @classmethod
    def filled(cls, width: int, height: int, rgb=(0, 0, 0)) -> 'ImageBuffer':
        data = np.empty((height, width, 3), dtype=np.uint8)
        data[...] = np.asarray(rgb, dtype=np.uint8)
        return cls(data)


def is_image_file(path: Union[str, Path]) -> bool:
    return Path(path).suffix.lower() in IMAGE_SUFFIXES


def load_image(path: Union[str, Path]) -> ImageBuffer:
    """Read a PNG/JPEG file as 8-bit RGB"""
    try:
        with Image.open(path) as img:
            if img.mode not in ("RGB", "L", "P"):
                raise DataError(f"unsupported image mode {img.mode} in {path}")
            return ImageBuffer(np.asarray(img.convert("RGB"), dtype=np.uint8))
    except (OSError, UnidentifiedImageError) as e:
        raise DataError(f"unreadable image {path}: {e}")


def save_image(image: ImageBuffer, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(image.data)).save(path)


def image_size(path: Union[str, Path]) -> Tuple[int, int]:
    """(width, height) from the file header, without decoding pixels"""
    try:
        with Image.open(path) as img:
            return img.size
    except (OSError, UnidentifiedImageError) as e:
        raise DataError(f"unreadable image {path}: {e}")
