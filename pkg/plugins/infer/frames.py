#!/usr/bin/env python3
"""
Frame Inference
Tile a whole frame, classify each cell, write overlays and label sidecars
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..core.images import ImageBuffer, is_image_file, load_image, save_image
from ..core.taxonomy import Taxonomy
from ..core.tensors import images_to_batch
from ..nn.network import argmax_lowest
from ..tiler.grid import GridSpec, tile_image
from ..traineval.evaluation import as_classifier
from ..utils.errors import DataError, TaxonomyMismatchError
from ..utils.helpers import chunked, run_ordered
from .overlay import DEFAULT_ALPHA, Palette, render_overlay

logger = logging.getLogger(__name__)

SKIPPED = -1


@dataclass
class LabelGrid:
    """Per-cell predictions for one frame; skipped cells hold -1 and zero probabilities"""
    rows: int
    cols: int
    width: int
    height: int
    predictions: np.ndarray
    probabilities: np.ndarray

    @property
    def class_count(self) -> int:
        return int(self.probabilities.shape[-1])

    @property
    def skipped(self) -> np.ndarray:
        return self.predictions == SKIPPED

    def cell_box(self, row: int, col: int) -> Tuple[int, int, int, int]:
        return GridSpec(self.rows, self.cols, discard_top=False).cell_box(self.width, self.height, row, col)

    def prediction(self, row: int, col: int) -> Optional[int]:
        value = int(self.predictions[row, col])
        return None if value == SKIPPED else value

    def classified_cells(self) -> List[Tuple[int, int, int]]:
        return [(row, col, int(self.predictions[row, col]))
                for row in range(self.rows) for col in range(self.cols)
                if self.predictions[row, col] != SKIPPED]

    def to_dict(self, taxonomy: Taxonomy) -> Dict[str, Any]:
        cells = []
        for row in range(self.rows):
            for col in range(self.cols):
                label = self.prediction(row, col)
                cells.append({
                    "row": row,
                    "col": col,
                    "skipped": label is None,
                    "label": None if label is None else taxonomy.name_of(label),
                    "probabilities": None if label is None else [float(p) for p in self.probabilities[row, col]],
                })
        return {"rows": self.rows, "cols": self.cols, "width": self.width, "height": self.height,
                "classes": list(taxonomy.names), "cells": cells}


def classify_frame(model, image: ImageBuffer, grid: GridSpec, taxonomy: Optional[Taxonomy] = None,
                   batch_size: int = 64) -> LabelGrid:
    """Evaluation-mode argmax for every grid cell, through the same tile and resize path as training"""
    classifier = as_classifier(model)
    if taxonomy is not None and taxonomy != classifier.taxonomy:
        raise TaxonomyMismatchError(
            f"checkpoint uses the {classifier.taxonomy.mode.value}-class taxonomy, not {taxonomy.mode.value}-class"
        )
    cells = tile_image(image, grid)
    class_count = classifier.taxonomy.size

    predictions = np.full((grid.rows, grid.cols), SKIPPED, dtype=np.int64)
    probabilities = np.zeros((grid.rows, grid.cols, class_count), dtype=np.float64)
    for chunk in chunked(cells, batch_size):
        batch = images_to_batch([pixels for _, _, pixels in chunk], classifier.input_size)
        probs = classifier.predict_proba(batch)
        for (row, col, _), p, label in zip(chunk, probs, argmax_lowest(probs)):
            predictions[row, col] = int(label)
            probabilities[row, col] = p
    return LabelGrid(grid.rows, grid.cols, image.width, image.height, predictions, probabilities)


def collect_frames(source: Union[str, Path]) -> List[Path]:
    source = Path(source)
    if source.is_file():
        return [source]
    if not source.is_dir():
        raise DataError(f"input {source} does not exist")
    return sorted(path for path in source.iterdir() if path.is_file() and is_image_file(path))


def infer_frames(model, source: Union[str, Path], out_dir: Union[str, Path], grid: GridSpec,
                 alpha: float = DEFAULT_ALPHA, labels_json: bool = False,
                 threads: int = 1, extra: Optional[Dict[str, Any]] = None) -> List[Dict[str, Any]]:
    """Overlay (and optional JSON sidecar) per frame; frames fan out over the worker budget"""
    classifier = as_classifier(model)
    palette = Palette.for_taxonomy(classifier.taxonomy, alpha)
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise DataError(f"cannot create output directory {out_dir}: {e}")
    frames = collect_frames(source)
    if not frames:
        logger.warning(f"⚠️ No image frames found under {source}")

    def job(path: Path):
        def run():
            image = load_image(path)
            labels = classify_frame(classifier, image, grid)
            overlay_path = out_dir / f"{path.stem}_overlay.png"
            save_image(render_overlay(image, labels, palette), overlay_path)
            written = {"frame": str(path), "overlay": str(overlay_path)}
            if labels_json:
                sidecar = out_dir / f"{path.stem}_labels.json"
                document = labels.to_dict(classifier.taxonomy)
                document["frame"] = str(path)
                document.update(extra or {})
                sidecar.write_text(json.dumps(document, indent=2, sort_keys=True))
                written["labels"] = str(sidecar)
            return written
        return run

    results = run_ordered([job(path) for path in frames], max_workers=threads)
    logger.info(f"✅ Rendered {len(results)} overlays into {out_dir}")
    return results
