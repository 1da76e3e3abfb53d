#!/usr/bin/env python3
"""
Augmentation Transforms
Flip, colour and geometric transforms on (H, W, C) tensors in [0, 1]
"""

import math

import numpy as np
from scipy import ndimage

from ..core.tensors import Tensor, resize_bilinear
from ..utils.errors import DataError, ShapeError
from ..utils.validators import Validators
from .policies import AugmentPolicy, PolicyKind
from .rng import Rng


def _check_rank(patch: Tensor) -> np.ndarray:
    arr = np.asarray(patch)
    if arr.ndim != 3:
        raise ShapeError(f"augmentation expects an (H, W, C) tensor, got shape {arr.shape}")
    return arr


def horizontal_flip(patch: Tensor) -> Tensor:
    """Reverse column order"""
    return _check_rank(patch)[:, ::-1, :].copy()


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Normalised 1-D kernel with radius ceil(3 sigma)"""
    radius = int(math.ceil(3.0 * sigma))
    if sigma <= 0 or radius == 0:
        return np.ones(1)
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-(offsets ** 2) / (2.0 * sigma * sigma))
    return kernel / kernel.sum()


def gaussian_blur(patch: Tensor, sigma: float) -> Tensor:
    """Separable blur with edge replication"""
    arr = _check_rank(patch)
    kernel = gaussian_kernel(sigma)
    if kernel.size == 1:
        return arr.copy()
    out = ndimage.correlate1d(arr, kernel.astype(arr.dtype), axis=0, mode="nearest")
    return ndimage.correlate1d(out, kernel.astype(arr.dtype), axis=1, mode="nearest")


def color_transform(patch: Tensor, brightness: float = 0.0, contrast: float = 1.0,
                    sigma: float = 0.0, red_gain: float = 1.0) -> Tensor:
    """Brightness shift, contrast about the patch mean, blur, red gain; clamped to [0, 1]"""
    arr = _check_rank(patch)
    if not Validators.is_unit_interval_array(arr):
        raise DataError("colour augmentation expects pixel values in [0, 1]")
    out = arr.copy()
    if brightness != 0.0:
        out = out + brightness
    if contrast != 1.0:
        mean = out.mean()
        out = (out - mean) * contrast + mean
    if sigma > 0.0:
        out = gaussian_blur(out, sigma)
    if red_gain != 1.0:
        out[..., 0] = out[..., 0] * red_gain
    return np.clip(out, 0.0, 1.0).astype(arr.dtype, copy=False)


def _edge_indices(size: int, shift: int) -> np.ndarray:
    return np.clip(np.arange(size) - shift, 0, size - 1)


def _zoom(arr: np.ndarray, factor: float) -> np.ndarray:
    """Scale about the centre, replicating edges"""
    height, width = arr.shape[0], arr.shape[1]

    def axis(size):
        centre = size / 2.0
        src = (np.arange(size, dtype=np.float64) + 0.5 - centre) / factor + centre - 0.5
        src = np.clip(src, 0.0, size - 1)
        lo = np.floor(src).astype(np.intp)
        hi = np.minimum(lo + 1, size - 1)
        return lo, hi, (src - lo).astype(arr.dtype)

    y0, y1, fy = axis(height)
    x0, x1, fx = axis(width)
    fy = fy[:, None, None]
    fx = fx[None, :, None]
    top = arr[y0][:, x0] * (1 - fx) + arr[y0][:, x1] * fx
    bottom = arr[y1][:, x0] * (1 - fx) + arr[y1][:, x1] * fx
    return top * (1 - fy) + bottom * fy


def geometric_transform(patch: Tensor, flip: bool = False, crop_fraction: float = 1.0,
                        crop_position=(0.0, 0.0), zoom: float = 1.0, shift=(0.0, 0.0)) -> Tensor:
    """Flip, crop-and-resize, zoom, translate; output shape equals input shape.

    crop_position is (y, x) in [0, 1) choosing the crop origin; shift is the
    (y, x) translation as a fraction of each dimension.
    """
    arr = _check_rank(patch)
    height, width = arr.shape[0], arr.shape[1]
    out = arr[:, ::-1, :] if flip else arr

    if crop_fraction < 1.0:
        crop_h = max(1, int(round(crop_fraction * height)))
        crop_w = max(1, int(round(crop_fraction * width)))
        top = min(int(crop_position[0] * (height - crop_h + 1)), height - crop_h)
        left = min(int(crop_position[1] * (width - crop_w + 1)), width - crop_w)
        out = resize_bilinear(out[top:top + crop_h, left:left + crop_w], width, height).astype(arr.dtype)

    if zoom != 1.0:
        out = _zoom(out, zoom)

    dy = int(round(shift[0] * height))
    dx = int(round(shift[1] * width))
    if dy or dx:
        out = out[_edge_indices(height, dy)][:, _edge_indices(width, dx)]

    return np.ascontiguousarray(out, dtype=arr.dtype)


def apply_color(patch: Tensor, policy: AugmentPolicy, rng: Rng) -> Tensor:
    """Sample brightness, contrast, blur sigma and red gain, in that order"""
    params = policy.params
    brightness = rng.uniform(*params.brightness)
    contrast = rng.uniform(*params.contrast)
    sigma = rng.uniform(*params.blur_sigma)
    red_gain = rng.uniform(*params.red_gain)
    return color_transform(patch, brightness, contrast, sigma, red_gain)


def apply_geometric(patch: Tensor, policy: AugmentPolicy, rng: Rng) -> Tensor:
    """Sample flip, crop, zoom and translation, in that order"""
    _check_rank(patch)
    params = policy.params
    flip = rng.random() < params.flip_probability
    crop_fraction = rng.uniform(*params.crop_fraction)
    crop_position = (rng.random(), rng.random())
    zoom = rng.uniform(*params.zoom)
    shift = (rng.uniform(*params.translate), rng.uniform(*params.translate))
    return geometric_transform(patch, flip, crop_fraction, crop_position, zoom, shift)


def apply_policy(patch: Tensor, policy: AugmentPolicy, rng: Rng) -> Tensor:
    """Dispatch on the policy kind; geometric runs before colour"""
    kind = policy.kind
    if kind is PolicyKind.NONE:
        return _check_rank(patch)
    if kind is PolicyKind.FLIP_ONLY:
        if rng.random() < policy.params.flip_probability:
            return horizontal_flip(patch)
        return _check_rank(patch)
    if kind is PolicyKind.GEOMETRIC:
        return apply_geometric(patch, policy, rng)
    if kind is PolicyKind.COLOR:
        return apply_color(patch, policy, rng)
    return apply_color(apply_geometric(patch, policy, rng), policy, rng)


def augment_batch(batch: Tensor, policy: AugmentPolicy, rng: Rng, epoch: int, indices) -> Tensor:
    """Augment each sample with a child stream keyed by (epoch, patch index)"""
    if policy.kind is PolicyKind.NONE:
        return batch
    out = np.empty_like(batch)
    for row, patch_index in enumerate(indices):
        out[row] = apply_policy(batch[row], policy, rng.child(epoch, int(patch_index)))
    return out
