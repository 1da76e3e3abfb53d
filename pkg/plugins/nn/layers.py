#!/usr/bin/env python3
"""
Layer Kernels
Forward and backward passes for the fixed layer vocabulary, NHWC layout
"""

from typing import Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..utils.errors import ShapeError


def _windows(x: np.ndarray, kernel: int, stride: int, out_h: int, out_w: int) -> np.ndarray:
    """(N, out_h, out_w, C, k, k) view of the k x k windows"""
    view = sliding_window_view(x, (kernel, kernel), axis=(1, 2))
    return view[:, ::stride, ::stride][:, :out_h, :out_w]


def conv_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray, stride: int, padding: int):
    """weights: (k, k, C_in, C_out)"""
    if x.ndim != 4:
        raise ShapeError(f"conv expects (N, H, W, C) input, got {x.shape}")
    kernel, _, in_channels, _ = weights.shape
    if x.shape[3] != in_channels:
        raise ShapeError(f"conv expects {in_channels} input channels, got {x.shape[3]}")
    padded = np.pad(x, ((0, 0), (padding, padding), (padding, padding), (0, 0))) if padding else x
    out_h = (padded.shape[1] - kernel) // stride + 1
    out_w = (padded.shape[2] - kernel) // stride + 1
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"conv kernel {kernel} does not fit input {x.shape}")
    windows = _windows(padded, kernel, stride, out_h, out_w)
    out = np.tensordot(windows, weights, axes=([4, 5, 3], [0, 1, 2])) + bias
    return out, (padded.shape, windows)


def conv_backward(grad_out: np.ndarray, weights: np.ndarray, stride: int, padding: int, cache):
    padded_shape, windows = cache
    kernel = weights.shape[0]
    out_h, out_w = grad_out.shape[1], grad_out.shape[2]

    grad_w = np.tensordot(windows, grad_out, axes=([0, 1, 2], [0, 1, 2])).transpose(1, 2, 0, 3)
    grad_b = grad_out.sum(axis=(0, 1, 2))

    # (N, out_h, out_w, k, k, C_in)
    grad_cols = np.tensordot(grad_out, weights, axes=([3], [3]))
    grad_padded = np.zeros(padded_shape, dtype=grad_out.dtype)
    for i in range(kernel):
        for j in range(kernel):
            grad_padded[:, i:i + stride * out_h:stride, j:j + stride * out_w:stride, :] += grad_cols[:, :, :, i, j, :]
    if padding:
        grad_padded = grad_padded[:, padding:-padding, padding:-padding, :]
    return grad_padded, grad_w.astype(weights.dtype, copy=False), grad_b


def maxpool_forward(x: np.ndarray, kernel: int, stride: int):
    if x.ndim != 4:
        raise ShapeError(f"max-pool expects (N, H, W, C) input, got {x.shape}")
    out_h = (x.shape[1] - kernel) // stride + 1
    out_w = (x.shape[2] - kernel) // stride + 1
    if out_h < 1 or out_w < 1:
        raise ShapeError(f"max-pool kernel {kernel} does not fit input {x.shape}")
    windows = _windows(x, kernel, stride, out_h, out_w)
    flat = windows.reshape(windows.shape[:4] + (kernel * kernel,))
    argmax = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, argmax[..., None], axis=-1)[..., 0]
    return out, (x.shape, argmax)


def maxpool_backward(grad_out: np.ndarray, kernel: int, stride: int, cache) -> np.ndarray:
    in_shape, argmax = cache
    out_h, out_w = grad_out.shape[1], grad_out.shape[2]
    grad_in = np.zeros(in_shape, dtype=grad_out.dtype)
    for i in range(kernel):
        for j in range(kernel):
            routed = np.where(argmax == i * kernel + j, grad_out, 0)
            grad_in[:, i:i + stride * out_h:stride, j:j + stride * out_w:stride, :] += routed
    return grad_in


def dense_forward(x: np.ndarray, weights: np.ndarray, bias: np.ndarray):
    if x.ndim != 2 or x.shape[1] != weights.shape[0]:
        raise ShapeError(f"dense expects (N, {weights.shape[0]}) input, got {x.shape}")
    return x @ weights + bias, x


def dense_backward(grad_out: np.ndarray, weights: np.ndarray, x: np.ndarray):
    return grad_out @ weights.T, x.T @ grad_out, grad_out.sum(axis=0)


def relu_forward(x: np.ndarray):
    mask = x > 0
    return np.where(mask, x, 0).astype(x.dtype, copy=False), mask


def relu_backward(grad_out: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return np.where(mask, grad_out, 0).astype(grad_out.dtype, copy=False)


def dropout_forward(x: np.ndarray, probability: float, training: bool, generator: np.random.Generator):
    """Inverted dropout; identity outside training"""
    if not training or probability == 0.0:
        return x, None
    keep = generator.random(x.shape) >= probability
    scale = np.asarray(1.0 / (1.0 - probability), dtype=x.dtype)
    return np.where(keep, x * scale, 0).astype(x.dtype, copy=False), (keep, scale)


def dropout_backward(grad_out: np.ndarray, cache) -> np.ndarray:
    if cache is None:
        return grad_out
    keep, scale = cache
    return np.where(keep, grad_out * scale, 0).astype(grad_out.dtype, copy=False)


def softmax_forward(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=1, keepdims=True)


def softmax_backward(grad_probs: np.ndarray, probs: np.ndarray) -> np.ndarray:
    inner = (grad_probs * probs).sum(axis=1, keepdims=True)
    return probs * (grad_probs - inner)


def flatten_forward(x: np.ndarray) -> Tuple[np.ndarray, Tuple[int, ...]]:
    return x.reshape(x.shape[0], -1), x.shape
