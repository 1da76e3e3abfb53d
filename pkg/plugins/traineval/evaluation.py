#!/usr/bin/env python3
"""
Evaluation
Confusion matrices, per-class precision/recall and overall accuracy
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from ..core.models import Density
from ..core.taxonomy import Taxonomy
from ..nn.checkpoint import Checkpoint
from ..nn.network import argmax_lowest
from ..tiler.patch_dataset import PatchDataset
from ..utils.errors import DataError, TaxonomyMismatchError
from ..utils.helpers import chunked, run_ordered
from .classifier import PatchClassifier

logger = logging.getLogger(__name__)


@dataclass
class ConfusionMatrix:
    """counts[true, predicted]"""
    counts: np.ndarray
    class_names: Tuple[str, ...] = ()

    @classmethod
    def empty(cls, class_count: int, class_names: Sequence[str] = ()) -> 'ConfusionMatrix':
        return cls(np.zeros((class_count, class_count), dtype=np.int64), tuple(class_names))

    @classmethod
    def from_pairs(cls, true_labels, predicted, class_count: int, class_names: Sequence[str] = ()) -> 'ConfusionMatrix':
        matrix = cls.empty(class_count, class_names)
        np.add.at(matrix.counts, (np.asarray(true_labels, dtype=np.int64), np.asarray(predicted, dtype=np.int64)), 1)
        return matrix

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> Dict[str, Any]:
        return {"classes": list(self.class_names), "counts": self.counts.tolist()}


@dataclass
class MetricsReport:
    precision: List[float]
    recall: List[float]
    accuracy: float
    support: List[int]
    class_names: Tuple[str, ...] = ()
    undefined_precision: List[bool] = field(default_factory=list)
    undefined_recall: List[bool] = field(default_factory=list)

    def to_dict(self, decimals: int = 3) -> Dict[str, Any]:
        return {
            "classes": list(self.class_names),
            "precision": [round(v, decimals) for v in self.precision],
            "recall": [round(v, decimals) for v in self.recall],
            "accuracy": round(self.accuracy, decimals),
            "support": list(self.support),
            "undefined_precision": list(self.undefined_precision),
            "undefined_recall": list(self.undefined_recall),
        }


def metrics(confusion: ConfusionMatrix) -> MetricsReport:
    """Precision per predicted column, recall per true row; 0 and flagged when undefined"""
    counts = confusion.counts
    total = confusion.total
    if total <= 0:
        raise DataError("cannot compute metrics from an empty confusion matrix")
    diag = np.diag(counts).astype(np.float64)
    column = counts.sum(axis=0).astype(np.float64)
    row = counts.sum(axis=1).astype(np.float64)
    precision = np.divide(diag, column, out=np.zeros_like(diag), where=column > 0)
    recall = np.divide(diag, row, out=np.zeros_like(diag), where=row > 0)
    return MetricsReport(
        precision=[float(v) for v in precision],
        recall=[float(v) for v in recall],
        accuracy=float(diag.sum() / total),
        support=[int(v) for v in row],
        class_names=confusion.class_names,
        undefined_precision=[bool(v == 0) for v in column],
        undefined_recall=[bool(v == 0) for v in row],
    )


def mean_report(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Element-wise mean over runs; supports are summed"""
    if not reports:
        raise DataError("no reports to average")
    return MetricsReport(
        precision=[float(v) for v in np.mean([r.precision for r in reports], axis=0)],
        recall=[float(v) for v in np.mean([r.recall for r in reports], axis=0)],
        accuracy=float(np.mean([r.accuracy for r in reports])),
        support=[int(v) for v in np.sum([r.support for r in reports], axis=0)],
        class_names=reports[0].class_names,
        undefined_precision=[any(flags) for flags in zip(*[r.undefined_precision for r in reports])],
        undefined_recall=[any(flags) for flags in zip(*[r.undefined_recall for r in reports])],
    )


def as_classifier(model):
    """Checkpoints get wrapped; anything with taxonomy/input_size/predict_proba passes through"""
    return PatchClassifier(model) if isinstance(model, Checkpoint) else model


def predict_dataset(model, dataset: PatchDataset, batch_size: int = 64, threads: int = 1) -> np.ndarray:
    """Predicted class per patch, no augmentation"""
    classifier = as_classifier(model)
    taxonomy: Taxonomy = classifier.taxonomy
    if taxonomy != dataset.taxonomy:
        raise TaxonomyMismatchError(
            f"model uses the {taxonomy.mode.value}-class taxonomy but patches use {dataset.taxonomy.mode.value}-class"
        )
    if len(dataset) == 0:
        return np.zeros(0, dtype=np.int64)

    def job(chunk):
        def run():
            return argmax_lowest(classifier.predict_proba(dataset.batch(chunk, classifier.input_size)))
        return run

    parts = run_ordered([job(chunk) for chunk in chunked(range(len(dataset)), batch_size)], max_workers=threads)
    return np.concatenate(parts).astype(np.int64)


def evaluate(model, dataset: PatchDataset, batch_size: int = 64, threads: int = 1) -> ConfusionMatrix:
    predicted = predict_dataset(model, dataset, batch_size, threads)
    return ConfusionMatrix.from_pairs(dataset.labels, predicted, dataset.taxonomy.size, dataset.taxonomy.names)


def density_breakdown(dataset: PatchDataset, predicted: np.ndarray) -> Dict[str, Dict[str, float]]:
    """Accuracy per recorded density tier for seagrass patches"""
    tiers: Dict[str, List[bool]] = {}
    for patch, guess in zip(dataset.patches, predicted):
        if patch.density in (Density.NOT_APPLICABLE, Density.UNRATED):
            continue
        tiers.setdefault(patch.density.value, []).append(bool(guess == patch.label))
    return {tier: {"patches": len(hits), "accuracy": round(sum(hits) / len(hits), 3)}
            for tier, hits in sorted(tiers.items())}
