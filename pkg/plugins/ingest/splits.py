#!/usr/bin/env python3
"""
Dataset Splits
Geographic holdout by sub-area and seeded k-fold assignment
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..augment.rng import Rng
from ..core.models import Manifest, Split
from ..utils.errors import ManifestError, UsageError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SplitPlan:
    """Disjoint train/test sub-area sets covering the manifest"""
    train_subareas: FrozenSet[str]
    test_subareas: FrozenSet[str]

    @classmethod
    def for_manifest(cls, manifest: Manifest, test_subareas: Iterable[str]) -> 'SplitPlan':
        present = set(manifest.sub_areas)
        test = frozenset(test_subareas)
        missing = sorted(test - present)
        if missing:
            raise ManifestError(f"test sub-areas not present in the manifest: {', '.join(missing)}")
        return cls(frozenset(present - test), test)


@dataclass(frozen=True)
class FoldAssignment:
    """Per-record fold index in [0, fold_count)"""
    fold_count: int
    assignments: Tuple[int, ...]

    def validation_indices(self, fold: int) -> List[int]:
        return [index for index, assigned in enumerate(self.assignments) if assigned == fold]

    def training_indices(self, fold: int) -> List[int]:
        return [index for index, assigned in enumerate(self.assignments) if assigned != fold]

    def fold_sizes(self) -> List[int]:
        return [self.assignments.count(fold) for fold in range(self.fold_count)]


def split_by_subarea(manifest: Manifest, test_subareas: Iterable[str]) -> Manifest:
    """Records in the named sub-areas go to Test, everything else to Train"""
    plan = SplitPlan.for_manifest(manifest, test_subareas)
    records = [
        record.with_split(Split.TEST if record.sub_area_id in plan.test_subareas else Split.TRAIN)
        for record in manifest.records
    ]
    result = manifest.with_records(records)
    logger.info(f"📊 Split: {len(plan.train_subareas)} train sub-areas, {len(plan.test_subareas)} test sub-areas")
    return result


def kfold_split(records: Sequence, k: int, seed: int) -> FoldAssignment:
    """Shuffle record indices with the seeded stream and deal them round-robin"""
    if k < 2:
        raise UsageError(f"k must be at least 2, got {k}")
    if not records:
        raise UsageError("k-fold split needs at least one record")
    if k > len(records):
        raise UsageError(f"k={k} exceeds the {len(records)} available records")
    order = Rng(seed).child("kfold").generator.permutation(len(records))
    assignments = np.empty(len(records), dtype=np.int64)
    assignments[order] = np.arange(len(records)) % k
    return FoldAssignment(k, tuple(int(fold) for fold in assignments))


def read_subarea_list(path: Union[str, Path]) -> List[str]:
    """One sub-area id per line; blank lines and # comments ignored"""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise ManifestError(f"cannot read sub-area list {path}: {e}")
    return [line.strip() for line in lines if line.strip() and not line.strip().startswith("#")]
