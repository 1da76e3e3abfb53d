#!/usr/bin/env python3
"""
Patch Classifier
Evaluation-mode prediction from a checkpoint, with the optional KNN head
"""

from typing import Tuple

import numpy as np

from ..core.taxonomy import Taxonomy
from ..nn.checkpoint import Checkpoint
from ..nn.knn import knn_vote_probabilities
from ..nn.network import batch_features, predict_proba


class PatchClassifier:
    """Wraps a checkpoint; predict_proba takes an (N, H, W, 3) batch in [0, 1]"""

    def __init__(self, checkpoint: Checkpoint, batch_size: int = 64):
        self.checkpoint = checkpoint
        self.batch_size = batch_size
        self.taxonomy = Taxonomy.from_mode(checkpoint.taxonomy_mode)

    @property
    def input_size(self) -> Tuple[int, int]:
        return self.checkpoint.spec.input_size[:2]

    @property
    def uses_knn(self) -> bool:
        return self.checkpoint.head == "knn" and self.checkpoint.knn_features is not None

    def predict_proba(self, batch: np.ndarray) -> np.ndarray:
        spec, params = self.checkpoint.spec, self.checkpoint.params
        batch = batch.astype(next(iter(params.values())).dtype, copy=False)
        if self.uses_knn:
            feats = batch_features(spec, params, batch, self.batch_size)
            k = int(self.checkpoint.config.get("knn_k", 3))
            return knn_vote_probabilities(feats, self.checkpoint.knn_features, self.checkpoint.knn_labels,
                                          k, spec.class_count)
        return predict_proba(spec, params, batch, self.batch_size)

    def features(self, batch: np.ndarray) -> np.ndarray:
        params = self.checkpoint.params
        batch = batch.astype(next(iter(params.values())).dtype, copy=False)
        return batch_features(self.checkpoint.spec, params, batch, self.batch_size)
