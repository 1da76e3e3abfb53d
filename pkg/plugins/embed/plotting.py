#!/usr/bin/env python3
"""
Embedding Output
JSON coordinates and a fixed-size scatter raster colored by class
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from ..core.taxonomy import Taxonomy  # noqa: E402
from ..infer.overlay import Palette  # noqa: E402
from .features import FeatureMatrix  # noqa: E402
from .tsne import TsneResult  # noqa: E402

logger = logging.getLogger(__name__)

CANVAS_PIXELS = 1024
DPI = 100


def embedding_points(matrix: FeatureMatrix, coords: np.ndarray, taxonomy: Taxonomy) -> List[Dict[str, Any]]:
    return [
        {"id": pid, "label": taxonomy.name_of(int(label)), "x": float(x), "y": float(y)}
        for pid, label, (x, y) in zip(matrix.ids, matrix.labels, coords)
    ]


def write_embedding(path: Union[str, Path], matrix: FeatureMatrix, result: TsneResult,
                    taxonomy: Taxonomy, sidecar: Optional[Dict[str, Any]] = None) -> Path:
    """The embedding file is a JSON array of {id, label, x, y}; run details go to <name>.meta.json"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(embedding_points(matrix, result.embedding, taxonomy), indent=2))

    meta = {
        "points": len(matrix),
        "perplexity": result.perplexity,
        "initial_kl": result.initial_kl,
        "final_kl": result.final_kl,
        "subsample": matrix.subsample,
    }
    meta.update(sidecar or {})
    meta_path = path.with_suffix(".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True))
    logger.info(f"💾 Embedding saved to {path}")
    return meta_path


def plot_embedding(path: Union[str, Path], matrix: FeatureMatrix, coords: np.ndarray, taxonomy: Taxonomy) -> Path:
    """1024x1024 PNG scatter, one palette color per class"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    palette = Palette.for_taxonomy(taxonomy)
    size = CANVAS_PIXELS / DPI
    fig, ax = plt.subplots(figsize=(size, size), dpi=DPI)
    try:
        for index, name in enumerate(taxonomy.names):
            mask = matrix.labels == index
            if mask.any():
                ax.scatter(coords[mask, 0], coords[mask, 1], s=8, c=palette.hex_of(index),
                           edgecolors="black", linewidths=0.2, label=name)
        ax.set_xticks([])
        ax.set_yticks([])
        if len(matrix):
            ax.legend(loc="best", markerscale=2)
        fig.savefig(path, dpi=DPI)
    finally:
        plt.close(fig)
    logger.info(f"💾 Scatter plot saved to {path}")
    return path
