#!/usr/bin/env python3
"""
Cross Validation
k-fold driver averaging per-fold metrics
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

from ..core.models import Manifest, Split
from ..ingest.splits import FoldAssignment, kfold_split
from ..tiler.patch_dataset import PatchDataset, build_patch_dataset
from ..utils.errors import DataError
from ..utils.helpers import run_ordered
from .evaluation import MetricsReport, evaluate, mean_report, metrics
from .train_config import TrainConfig
from .trainer import fit

logger = logging.getLogger(__name__)


@dataclass
class CrossValidationResult:
    folds: FoldAssignment
    fold_reports: List[MetricsReport]
    mean: MetricsReport

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.folds.fold_count,
            "fold_sizes": self.folds.fold_sizes(),
            "folds": [report.to_dict() for report in self.fold_reports],
            "mean": self.mean.to_dict(),
        }


def cross_validate(manifest: Manifest, config: TrainConfig, root: Union[str, Path], k: int = 5,
                   dataset: Optional[PatchDataset] = None, fit_fn: Callable = fit,
                   threads: int = 1) -> CrossValidationResult:
    """Train on k-1 folds and evaluate the held-out fold, for every fold.

    Uses the Train records when splits are assigned, otherwise every record.
    Folds are independent runs, so they may run on separate workers.
    """
    records = manifest.records_in(Split.TRAIN) or list(manifest.records)
    if not records:
        raise DataError("cross validation needs at least one record")
    folds = kfold_split(records, k, config.seed)
    if dataset is None:
        splits = [Split.TRAIN] if manifest.records_in(Split.TRAIN) else None
        dataset = build_patch_dataset(manifest, config.grid, root, splits=splits, threads=config.threads)

    def job(fold: int):
        def run():
            val_paths = [records[i].image_path for i in folds.validation_indices(fold)]
            train_paths = [records[i].image_path for i in folds.training_indices(fold)]
            val_set = dataset.from_sources(val_paths)
            result = fit_fn(dataset.from_sources(train_paths), val_set, config, manifest.taxonomy)
            report = metrics(evaluate(result.classifier, val_set))
            logger.info(f"📊 Fold {fold + 1}/{k}: accuracy {report.accuracy:.3f} on {len(val_set)} patches")
            return report
        return run

    reports = run_ordered([job(fold) for fold in range(k)], max_workers=threads)
    result = CrossValidationResult(folds, reports, mean_report(reports))
    logger.info(f"✅ {k}-fold mean accuracy {result.mean.accuracy:.3f}")
    return result
