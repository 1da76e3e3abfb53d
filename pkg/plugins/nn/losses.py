#!/usr/bin/env python3
"""
Losses
Cross entropy over softmax probabilities
"""

import numpy as np

from ..utils.errors import ShapeError

PROBABILITY_FLOOR = 1e-12


def _check_labels(probs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if probs.ndim != 2 or labels.shape != (probs.shape[0],):
        raise ShapeError(f"labels {labels.shape} do not match probabilities {probs.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= probs.shape[1]):
        raise ShapeError(f"labels must lie in [0, {probs.shape[1]})")
    return labels


def cross_entropy(probs: np.ndarray, labels) -> float:
    """Mean of -log p[label] with p clamped to [1e-12, 1]"""
    probs = np.asarray(probs)
    labels = _check_labels(probs, labels)
    picked = np.clip(probs[np.arange(len(labels)), labels], PROBABILITY_FLOOR, 1.0)
    return float(-np.log(picked.astype(np.float64)).mean())


def cross_entropy_grad(probs: np.ndarray, labels) -> np.ndarray:
    """d loss / d probabilities; composed with softmax this is (p - onehot) / N"""
    probs = np.asarray(probs)
    labels = _check_labels(probs, labels)
    rows = np.arange(len(labels))
    grad = np.zeros_like(probs)
    grad[rows, labels] = -1.0 / (len(labels) * np.maximum(probs[rows, labels], PROBABILITY_FLOOR))
    return grad
