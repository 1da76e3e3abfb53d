#!/usr/bin/env python3
"""
KNN Head
k-nearest-neighbour voting over penultimate features
"""

from typing import Optional

import numpy as np
from scipy.spatial.distance import cdist

from ..utils.errors import ShapeError, UsageError


def _votes(queries, bank_features, bank_labels, k: int, class_count: Optional[int]) -> np.ndarray:
    queries = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    bank = np.asarray(bank_features, dtype=np.float64)
    labels = np.asarray(bank_labels, dtype=np.int64)
    if bank.ndim != 2 or bank.shape[0] == 0:
        raise UsageError("KNN bank is empty")
    if labels.shape != (bank.shape[0],):
        raise ShapeError("KNN bank labels do not match bank rows")
    if queries.shape[1] != bank.shape[1]:
        raise ShapeError(f"query width {queries.shape[1]} does not match bank width {bank.shape[1]}")
    if not 1 <= k <= bank.shape[0]:
        raise UsageError(f"k={k} must lie in [1, {bank.shape[0]}]")

    minlength = class_count or int(labels.max()) + 1
    distances = cdist(queries, bank, metric="euclidean")
    # stable sort: equidistant bank points keep bank order
    nearest = np.argsort(distances, axis=1, kind="stable")[:, :k]
    return np.stack([np.bincount(labels[row], minlength=minlength) for row in nearest])


def knn_predict_batch(queries: np.ndarray, bank_features: np.ndarray, bank_labels, k: int = 3,
                      class_count: Optional[int] = None) -> np.ndarray:
    """Majority vote among the k nearest (Euclidean); ties go to the lowest class"""
    return _votes(queries, bank_features, bank_labels, k, class_count).argmax(axis=1)


def knn_predict(query_features: np.ndarray, bank_features: np.ndarray, bank_labels, k: int = 3) -> int:
    return int(knn_predict_batch(np.asarray(query_features)[None, :], bank_features, bank_labels, k)[0])


def knn_vote_probabilities(queries: np.ndarray, bank_features: np.ndarray, bank_labels, k: int,
                           class_count: int) -> np.ndarray:
    """Vote fractions per class; their lowest-index argmax is the KNN prediction"""
    return _votes(queries, bank_features, bank_labels, k, class_count).astype(np.float64) / k
