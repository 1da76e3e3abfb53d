#!/usr/bin/env python3
"""
Tensor Utilities
numpy arrays are the tensor type; this module holds the image/tensor boundary
"""

from typing import Sequence, Union

import numpy as np

from ..utils.errors import ShapeError
from .images import ImageBuffer

Tensor = np.ndarray


def _as_array(image: Union[ImageBuffer, np.ndarray]) -> np.ndarray:
    if isinstance(image, ImageBuffer):
        return image.data
    arr = np.asarray(image)
    if arr.ndim != 3:
        raise ShapeError(f"expected an (height, width, channels) tensor, got shape {arr.shape}")
    return arr


def _axis_weights(in_size: int, out_size: int):
    """Source indices and weights for half-pixel-centred sampling along one axis"""
    scale = in_size / out_size
    src = (np.arange(out_size, dtype=np.float64) + 0.5) * scale - 0.5
    src = np.clip(src, 0.0, in_size - 1)
    lo = np.floor(src).astype(np.intp)
    hi = np.minimum(lo + 1, in_size - 1)
    frac = src - lo
    return lo, hi, frac


def resize_bilinear(image: Union[ImageBuffer, np.ndarray], out_width: int, out_height: int) -> Tensor:
    """Bilinear resize to (out_height, out_width, C).

    uint8 inputs come back as float64 in the same [0, 255] scale; float
    inputs keep their dtype.
    """
    arr = _as_array(image)
    if out_width < 1 or out_height < 1:
        raise ShapeError(f"output size must be at least 1x1, got {out_width}x{out_height}")
    in_h, in_w = arr.shape[0], arr.shape[1]
    if in_h == 0 or in_w == 0:
        raise ShapeError("cannot resize a zero-sized image")

    dtype = arr.dtype if np.issubdtype(arr.dtype, np.floating) else np.float64
    src = arr.astype(dtype, copy=False)
    if in_h == out_height and in_w == out_width:
        return src.copy()

    y0, y1, fy = _axis_weights(in_h, out_height)
    x0, x1, fx = _axis_weights(in_w, out_width)
    fy = fy.astype(dtype)[:, None, None]
    fx = fx.astype(dtype)[None, :, None]

    top = src[y0][:, x0] * (1 - fx) + src[y0][:, x1] * fx
    bottom = src[y1][:, x0] * (1 - fx) + src[y1][:, x1] * fx
    return top * (1 - fy) + bottom * fy


def image_to_tensor(image: Union[ImageBuffer, np.ndarray], input_size: Sequence[int] = None,
                    dtype=np.float32) -> Tensor:
    """Resize to the network input (height, width) and scale [0,255] to [0,1]"""
    arr = _as_array(image)
    if input_size is not None:
        height, width = int(input_size[0]), int(input_size[1])
        arr = resize_bilinear(arr, width, height)
    return (np.asarray(arr, dtype=np.float64) / 255.0).astype(dtype)


def images_to_batch(images: Sequence[Union[ImageBuffer, np.ndarray]], input_size: Sequence[int],
                    dtype=np.float32) -> Tensor:
    """Stack images into an (N, H, W, 3) batch"""
    height, width = int(input_size[0]), int(input_size[1])
    batch = np.empty((len(images), height, width, 3), dtype=dtype)
    for index, image in enumerate(images):
        batch[index] = image_to_tensor(image, (height, width), dtype=dtype)
    return batch


def tensor_to_image(tensor: Tensor) -> ImageBuffer:
    """Inverse of the unit scaling, rounded and clamped to uint8"""
    arr = np.clip(np.rint(np.asarray(tensor, dtype=np.float64) * 255.0), 0, 255)
    return ImageBuffer(arr.astype(np.uint8))
