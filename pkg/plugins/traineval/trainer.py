#!/usr/bin/env python3
"""
Trainer
Epoch loop with augmentation, Adam, plateau scheduling and best-validation selection
"""

import logging
import math
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..augment.rng import Rng
from ..augment.transforms import augment_batch
from ..core.models import Manifest, Split
from ..core.taxonomy import Taxonomy
from ..ingest.splits import kfold_split
from ..nn.checkpoint import Checkpoint
from ..nn.losses import cross_entropy, cross_entropy_grad
from ..nn.network import backward, batch_features, forward, init_parameters, predict_proba
from ..nn.optim import AdamState, adam_step
from ..nn.scheduler import Action, SchedulerState, scheduler_update
from ..nn.spec import build_model_spec
from ..tiler.patch_dataset import PatchDataset, build_patch_dataset
from ..utils.errors import DataError, NonFiniteLossError
from ..utils.helpers import format_duration
from ..utils.logger import format_epoch_line
from .classifier import PatchClassifier
from .train_config import TrainConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    train_loss: float
    val_loss: float
    val_accuracy: float
    lr: float
    action: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class FitResult:
    checkpoint: Checkpoint
    history: List[EpochRecord]

    @property
    def classifier(self) -> PatchClassifier:
        return PatchClassifier(self.checkpoint)

    @property
    def halvings(self) -> List[int]:
        return [record.epoch for record in self.history if record.action == Action.HALVE.value]


def _eval_loss(spec, params, dataset: PatchDataset, config: TrainConfig) -> Tuple[float, float]:
    """Mean cross entropy and accuracy, tiling one batch at a time"""
    labels = dataset.labels
    probs = np.concatenate([
        predict_proba(spec, params, batch, config.batch_size)
        for _, batch in dataset.batches(config.input_size, config.batch_size)
    ])
    loss = cross_entropy(probs, labels)
    accuracy = float((probs.argmax(axis=1) == labels).mean())
    return loss, accuracy


def fit(train_set: PatchDataset, val_set: PatchDataset, config: TrainConfig,
        taxonomy: Optional[Taxonomy] = None) -> FitResult:
    """Train from scratch; the scheduler watches validation loss (training loss when no validation set)"""
    taxonomy = taxonomy or train_set.taxonomy
    if len(train_set) == 0:
        raise DataError("training split has no patches")

    spec = build_model_spec(taxonomy.size, config.input_shape, config.backbone, config.head)
    rng = Rng(config.seed)
    params = init_parameters(spec, rng)
    adam = AdamState.for_parameters(params, config.initial_lr)

    y_train = train_set.labels
    watch_set = val_set if len(val_set) else train_set
    watch_split = "val" if len(val_set) else "train"

    baseline, _ = _eval_loss(spec, params, watch_set, config)
    scheduler = SchedulerState.start(
        config.initial_lr, baseline, patience=config.patience, max_halvings=config.max_halvings,
        improvement_threshold=config.improvement_threshold,
    )
    best = (baseline, params, adam, scheduler, 0)
    history: List[EpochRecord] = []
    augment_rng = rng.child("augment")
    started = time.monotonic()
    logger.info(f"🚀 Training {len(train_set)} patches, watching {len(watch_set)} {watch_split} patches "
                f"(baseline loss {baseline:.6f})")

    for epoch in range(1, config.max_epochs + 1):
        order = rng.child("shuffle", epoch).generator.permutation(len(train_set))
        epoch_lr = adam.lr
        loss_sum = 0.0
        for batch_index, start in enumerate(range(0, len(order), config.batch_size)):
            indices = order[start:start + config.batch_size]
            batch = augment_batch(train_set.batch(indices, config.input_size), config.augment, augment_rng,
                                  epoch, indices)
            probs, cache = forward(spec, params, batch, training=True, rng=rng.child("step", epoch, batch_index))
            loss = cross_entropy(probs, y_train[indices])
            if not math.isfinite(loss):
                raise NonFiniteLossError(
                    f"non-finite training loss at epoch {epoch} batch {batch_index} (lr={adam.lr})"
                )
            grads = backward(spec, params, cache, cross_entropy_grad(probs, y_train[indices]))
            params, adam = adam_step(params, grads, adam)
            loss_sum += loss * len(indices)

        train_loss = loss_sum / len(order)
        watch_loss, watch_accuracy = _eval_loss(spec, params, watch_set, config)
        if not math.isfinite(watch_loss):
            raise NonFiniteLossError(f"non-finite {watch_split} loss at epoch {epoch} (lr={adam.lr})")
        if watch_loss < best[0]:
            best = (watch_loss, params, adam, scheduler, epoch)

        scheduler, action = scheduler_update(scheduler, watch_loss)
        history.append(EpochRecord(epoch, train_loss, watch_loss, watch_accuracy, epoch_lr, action.value))
        logger.info(format_epoch_line(epoch, "train", train_loss, epoch_lr))
        logger.info(format_epoch_line(epoch, watch_split, watch_loss, epoch_lr, accuracy=f"{watch_accuracy:.4f}"))

        if action is Action.HALVE:
            adam = adam.with_lr(scheduler.current_lr)
            logger.info(f"📉 Learning rate halved to {scheduler.current_lr:g} after epoch {epoch}")
        elif action is Action.STOP:
            logger.info(f"🛑 Stopping after epoch {epoch}: {scheduler.halvings} halvings without improvement")
            break

    _, best_params, best_adam, best_scheduler, best_epoch = best
    knn_features = knn_labels = None
    if config.head == "knn":
        knn_features = np.concatenate([
            batch_features(spec, best_params, batch, config.batch_size)
            for _, batch in train_set.batches(config.input_size, config.batch_size)
        ])
        knn_labels = y_train.copy()

    checkpoint = Checkpoint(
        spec=spec,
        params=best_params,
        adam=best_adam,
        scheduler=best_scheduler,
        taxonomy_mode=taxonomy.mode.value,
        seed=config.seed,
        config=config.to_dict(),
        metadata={
            "selection": "best_validation" if watch_split == "val" else "best_training",
            "best_epoch": best_epoch,
            "epochs_run": len(history),
            "stopped_by_scheduler": bool(history) and history[-1].action == Action.STOP.value,
        },
        knn_features=knn_features,
        knn_labels=knn_labels,
    )
    logger.info(f"✅ Training finished in {format_duration(time.monotonic() - started)}; "
                f"best epoch {best_epoch} ({watch_split} loss {best[0]:.6f})")
    return FitResult(checkpoint, history)


def holdout_sources(manifest: Manifest, config: TrainConfig) -> Tuple[List[str], List[str]]:
    """Train/validation source paths: fold 0 of a k-fold over the Train records"""
    records = manifest.records_in(Split.TRAIN)
    if not records:
        raise DataError("manifest has no Train records; run prepare with a split first")
    if len(records) < 2:
        return [records[0].image_path], []
    folds = kfold_split(records, min(config.val_folds, len(records)), config.seed)
    val = {records[i].image_path for i in folds.validation_indices(0)}
    train = [r.image_path for r in records if r.image_path not in val]
    return train, sorted(val)


def train(manifest: Manifest, config: TrainConfig, root: Union[str, Path],
          dataset: Optional[PatchDataset] = None) -> Tuple[Checkpoint, List[EpochRecord]]:
    """Tile the Train split, hold out a validation fold, fit"""
    if dataset is None:
        dataset = build_patch_dataset(manifest, config.grid, root, splits=[Split.TRAIN], threads=config.threads)
    train_paths, val_paths = holdout_sources(manifest, config)
    result = fit(dataset.from_sources(train_paths), dataset.from_sources(val_paths), config, manifest.taxonomy)
    return result.checkpoint, result.history
