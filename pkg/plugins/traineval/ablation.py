#!/usr/bin/env python3
"""
Ablation Harness
Re-runs training across augmentation policies, heads, backbones or grid sizes and tabulates validation/test rows
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..augment.policies import AugmentPolicy, PolicyKind
from ..core.models import Manifest, Split
from ..nn.spec import BACKBONE_VARIANTS, HEAD_VARIANTS
from ..tiler.grid import GridSpec
from ..tiler.patch_dataset import PatchDataset, build_patch_dataset
from ..utils.errors import DataError, UsageError
from .evaluation import MetricsReport, evaluate, mean_report, metrics
from .reports import format_metrics_table
from .train_config import TrainConfig
from .trainer import holdout_sources, train

logger = logging.getLogger(__name__)

DIMENSIONS = {
    "augment": tuple(kind.value for kind in PolicyKind),
    "head": HEAD_VARIANTS,
    "backbone": BACKBONE_VARIANTS,
    "grid": ("5x8", "10x16"),
}


@dataclass
class AblationRow:
    variant: str
    validation: MetricsReport
    test: Optional[MetricsReport]
    test_accuracy_by_seed: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "variant": self.variant,
            "validation": self.validation.to_dict(),
            "test": self.test.to_dict() if self.test else None,
            "test_accuracy_by_seed": [round(v, 3) for v in self.test_accuracy_by_seed],
        }


def variant_config(base: TrainConfig, dimension: str, variant: str) -> TrainConfig:
    if dimension == "augment":
        return base.with_changes(augment=AugmentPolicy.from_name(variant, base.augment.params))
    if dimension == "head":
        return base.with_changes(head=variant)
    if dimension == "backbone":
        return base.with_changes(backbone=variant)
    if dimension == "grid":
        return base.with_changes(grid=GridSpec.parse(variant, base.grid.discard_top))
    raise UsageError(f"unknown ablation dimension {dimension!r} (choose from {', '.join(DIMENSIONS)})")


def run_ablation(manifest: Manifest, root: Union[str, Path], base: TrainConfig, dimension: str,
                 seeds: Sequence[int] = (0,), variants: Optional[Sequence[str]] = None) -> List[AblationRow]:
    variants = list(variants or DIMENSIONS.get(dimension, ()))
    if not variants:
        raise UsageError(f"unknown ablation dimension {dimension!r}")
    if not seeds:
        raise UsageError("ablation needs at least one seed")
    datasets: Dict[str, PatchDataset] = {}
    rows = []
    for variant in variants:
        config = variant_config(base, dimension, variant)
        key = f"{config.grid.label()}:{config.grid.discard_top}"
        if key not in datasets:
            datasets[key] = build_patch_dataset(manifest, config.grid, root, splits=[Split.TRAIN, Split.TEST],
                                                threads=config.threads)
        dataset = datasets[key]
        train_set = dataset.in_split(Split.TRAIN)
        test_set = dataset.in_split(Split.TEST)

        val_reports, test_reports = [], []
        for seed in seeds:
            seeded = config.with_changes(seed=int(seed))
            checkpoint, _ = train(manifest, seeded, root, dataset=train_set)
            _, val_paths = holdout_sources(manifest, seeded)
            val_set = train_set.from_sources(val_paths)
            if len(val_set) == 0:
                raise DataError("ablation needs a validation fold; add more Train images")
            val_reports.append(metrics(evaluate(checkpoint, val_set)))
            if len(test_set):
                test_reports.append(metrics(evaluate(checkpoint, test_set)))
        row = AblationRow(
            variant, mean_report(val_reports), mean_report(test_reports) if test_reports else None,
            [report.accuracy for report in test_reports],
        )
        logger.info(f"📊 {dimension}={variant}: validation {row.validation.accuracy:.3f}"
                    + (f", test {row.test.accuracy:.3f}" if row.test else ""))
        rows.append(row)
    return rows


def format_ablation_table(rows: Sequence[AblationRow], class_names: Sequence[str]) -> str:
    """Validation and test rows paired per variant"""
    table_rows = []
    for row in rows:
        table_rows.append((f"{row.variant} (val)", row.validation))
        if row.test is not None:
            table_rows.append((f"{row.variant} (test)", row.test))
    return format_metrics_table(table_rows, class_names)
