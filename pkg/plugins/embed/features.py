#!/usr/bin/env python3
"""
Feature Extraction
Penultimate-layer activations for embedding
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..augment.rng import Rng
from ..nn.checkpoint import Checkpoint
from ..tiler.patch_dataset import PatchDataset
from ..traineval.classifier import PatchClassifier
from ..utils.errors import ShapeError, TaxonomyMismatchError

logger = logging.getLogger(__name__)


@dataclass
class FeatureMatrix:
    rows: np.ndarray
    labels: np.ndarray
    ids: List[str]
    subsample: Optional[List[int]] = field(default=None)

    def __len__(self) -> int:
        return int(self.rows.shape[0])


def extract_features(checkpoint: Checkpoint, dataset: PatchDataset, batch_size: int = 64) -> FeatureMatrix:
    """One evaluation-mode feature row per patch, in dataset order"""
    if len(checkpoint.spec.layers) < 3:
        raise ShapeError("model spec has no penultimate layer to extract features from")
    classifier = PatchClassifier(checkpoint, batch_size)
    if classifier.taxonomy != dataset.taxonomy:
        raise TaxonomyMismatchError("checkpoint and patches use different taxonomies")
    width = checkpoint.spec.feature_width
    if len(dataset) == 0:
        return FeatureMatrix(np.zeros((0, width)), np.zeros(0, dtype=np.int64), [])
    rows = np.concatenate([
        classifier.features(batch) for _, batch in dataset.batches(classifier.input_size, batch_size)
    ]).astype(np.float64)
    logger.info(f"✅ Extracted {rows.shape[0]} feature vectors of width {width}")
    return FeatureMatrix(rows, dataset.labels, [patch.patch_id for patch in dataset.patches])


def subsample_features(matrix: FeatureMatrix, max_rows: int, seed: int) -> FeatureMatrix:
    """Seeded subsample without replacement, original order kept; indices recorded"""
    if len(matrix) <= max_rows:
        return matrix
    chosen = np.sort(Rng(seed).child("subsample").generator.choice(len(matrix), size=max_rows, replace=False))
    return FeatureMatrix(matrix.rows[chosen], matrix.labels[chosen], [matrix.ids[i] for i in chosen],
                         [int(i) for i in chosen])
