#!/usr/bin/env python3
"""
Training Configuration
Hyperparameters for one training run
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Tuple

from ..augment.policies import AugmentParams, AugmentPolicy, PolicyKind
from ..nn.spec import HEAD_VARIANTS
from ..tiler.grid import GridSpec
from ..utils.errors import UsageError
from ..utils.validators import Validators


@dataclass(frozen=True)
class TrainConfig:
    grid: GridSpec = field(default_factory=GridSpec)
    augment: AugmentPolicy = field(default_factory=AugmentPolicy)
    batch_size: int = 32
    initial_lr: float = 0.001
    max_epochs: int = 200
    seed: int = 0
    head: str = "two_layer_drop"
    backbone: str = "small"
    input_size: Tuple[int, int] = (224, 224)
    patience: int = 10
    max_halvings: int = 4
    improvement_threshold: float = 1e-4
    knn_k: int = 3
    val_folds: int = 5
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "input_size", (int(self.input_size[0]), int(self.input_size[1])))
        if not Validators.is_positive_int(self.batch_size):
            raise UsageError("batch_size must be at least 1")
        if not Validators.is_positive_int(self.max_epochs):
            raise UsageError("max_epochs must be at least 1")
        if not Validators.is_finite(self.initial_lr) or self.initial_lr < 0:
            raise UsageError("initial_lr must be a finite non-negative number")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise UsageError("seed must be a non-negative integer")
        if self.head not in HEAD_VARIANTS:
            raise UsageError(f"unknown head {self.head!r} (choose from {', '.join(HEAD_VARIANTS)})")
        if min(self.input_size) < 1:
            raise UsageError("input_size must be positive")
        if not Validators.is_positive_int(self.patience) or self.max_halvings < 0:
            raise UsageError("patience must be >= 1 and max_halvings >= 0")
        if not Validators.is_positive_int(self.knn_k):
            raise UsageError("knn_k must be at least 1")
        if self.val_folds < 2:
            raise UsageError("val_folds must be at least 2")
        if not Validators.is_positive_int(self.threads):
            raise UsageError("threads must be at least 1")

    @property
    def input_shape(self) -> Tuple[int, int, int]:
        return self.input_size[0], self.input_size[1], 3

    def with_changes(self, **changes) -> 'TrainConfig':
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grid": self.grid.label(),
            "discard_top": self.grid.discard_top,
            "augment": self.augment.kind.value,
            "augment_params": self.augment.params.to_dict(),
            "batch_size": self.batch_size,
            "initial_lr": self.initial_lr,
            "max_epochs": self.max_epochs,
            "seed": self.seed,
            "head": self.head,
            "backbone": self.backbone,
            "input_size": list(self.input_size),
            "patience": self.patience,
            "max_halvings": self.max_halvings,
            "improvement_threshold": self.improvement_threshold,
            "knn_k": self.knn_k,
            "val_folds": self.val_folds,
            "threads": self.threads,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainConfig':
        """Build from the flat key layout used by config files and to_dict"""
        params = AugmentParams.from_dict(data.get("augment_params") or {})
        grid = GridSpec.parse(str(data.get("grid", "5x8")), bool(data.get("discard_top", True)))
        try:
            return cls(
                grid=grid,
                augment=AugmentPolicy(PolicyKind(str(data.get("augment", "none")).lower()), params),
                batch_size=int(data.get("batch_size", 32)),
                initial_lr=float(data.get("initial_lr", 0.001)),
                max_epochs=int(data.get("max_epochs", 200)),
                seed=int(data.get("seed", 0)),
                head=str(data.get("head", "two_layer_drop")),
                backbone=str(data.get("backbone", "small")),
                input_size=tuple(data.get("input_size", (224, 224))),
                patience=int(data.get("patience", 10)),
                max_halvings=int(data.get("max_halvings", 4)),
                improvement_threshold=float(data.get("improvement_threshold", 1e-4)),
                knn_k=int(data.get("knn_k", 3)),
                val_folds=int(data.get("val_folds", 5)),
                threads=int(data.get("threads", 1)),
            )
        except ValueError as e:
            raise UsageError(f"invalid training configuration: {e}")
