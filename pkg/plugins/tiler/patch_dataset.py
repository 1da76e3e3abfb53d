#!/usr/bin/env python3
"""
Patch Dataset
Weakly-labelled patches built from single-class frames.
Patches normally hold only (source, row, col); pixels are cut from the frame when a batch is requested.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.images import ImageBuffer, image_size, load_image, save_image
from ..core.models import Density, Manifest, SampleRecord, Split
from ..core.taxonomy import Taxonomy
from ..core.tensors import image_to_tensor
from ..utils.errors import DataError
from ..utils.helpers import run_ordered
from .grid import GridSpec, check_fits, tile_cell, tile_image

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledPatch:
    """A grid cell carrying its source image's label; pixels is None until tiled"""
    pixels: Optional[ImageBuffer]
    label: int
    row: int
    col: int
    source_path: str
    split: Split = Split.UNASSIGNED
    sub_area_id: str = ""
    density: Density = Density.NOT_APPLICABLE

    @property
    def patch_id(self) -> str:
        return f"{self.source_path}#r{self.row}c{self.col}"

    def index_entry(self) -> Dict[str, object]:
        return {
            "source_path": self.source_path,
            "row": self.row,
            "col": self.col,
            "label": self.label,
            "split": self.split.value,
        }


@dataclass
class PatchDataset:
    """Ordered patches with their taxonomy, plus the grid and root needed to tile referenced cells"""
    taxonomy: Taxonomy
    patches: List[LabeledPatch] = field(default_factory=list)
    grid: Optional[GridSpec] = None
    root: Optional[Path] = None

    def __len__(self) -> int:
        return len(self.patches)

    @property
    def labels(self) -> np.ndarray:
        return np.array([patch.label for patch in self.patches], dtype=np.int64)

    def _with(self, patches: List[LabeledPatch]) -> 'PatchDataset':
        return PatchDataset(self.taxonomy, patches, self.grid, self.root)

    def subset(self, indices: Iterable[int]) -> 'PatchDataset':
        return self._with([self.patches[i] for i in indices])

    def in_split(self, split: Split) -> 'PatchDataset':
        return self._with([p for p in self.patches if p.split is split])

    def from_sources(self, source_paths: Iterable[str]) -> 'PatchDataset':
        wanted = set(source_paths)
        return self._with([p for p in self.patches if p.source_path in wanted])

    def excluding_labels(self, labels: Iterable[int]) -> 'PatchDataset':
        dropped = set(labels)
        return self._with([p for p in self.patches if p.label not in dropped])

    def _load_source(self, source_path: str) -> ImageBuffer:
        if self.root is None or self.grid is None:
            raise DataError(f"patches of {source_path} hold no pixels and the dataset has no root to tile from")
        try:
            return load_image(self.root / source_path)
        except DataError as e:
            raise DataError(f"cannot tile {source_path}: {e.message}")

    def pixels_of(self, patch: LabeledPatch) -> ImageBuffer:
        if patch.pixels is not None:
            return patch.pixels
        return tile_cell(self._load_source(patch.source_path), self.grid, patch.row, patch.col)

    def batch(self, indices: Sequence[int], input_size: Sequence[int], dtype=np.float32) -> np.ndarray:
        """(len(indices), H, W, 3) tensors for the chosen patches; each source frame is read once"""
        height, width = int(input_size[0]), int(input_size[1])
        out = np.empty((len(indices), height, width, 3), dtype=dtype)
        frames: Dict[str, ImageBuffer] = {}
        for slot, index in enumerate(indices):
            patch = self.patches[int(index)]
            if patch.pixels is not None:
                pixels = patch.pixels
            else:
                if patch.source_path not in frames:
                    frames[patch.source_path] = self._load_source(patch.source_path)
                pixels = tile_cell(frames[patch.source_path], self.grid, patch.row, patch.col)
            out[slot] = image_to_tensor(pixels, (height, width), dtype=dtype)
        return out

    def batches(self, input_size: Sequence[int], batch_size: int,
                dtype=np.float32) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """(indices, tensors) in dataset order, at most batch_size patches at a time"""
        for start in range(0, len(self.patches), batch_size):
            indices = np.arange(start, min(start + batch_size, len(self.patches)))
            yield indices, self.batch(indices, input_size, dtype)

    def to_batch(self, input_size: Sequence[int], dtype=np.float32) -> np.ndarray:
        """Every patch at once, resized to the network input and scaled to [0, 1]"""
        return self.batch(range(len(self.patches)), input_size, dtype)

    def counts(self) -> Dict[str, Dict[str, int]]:
        """Per-class patch counts for each split"""
        table = {name: {split.value: 0 for split in Split} for name in self.taxonomy.names}
        for patch in self.patches:
            table[self.taxonomy.name_of(patch.label)][patch.split.value] += 1
        return table


def patches_for_record(record: SampleRecord, image: ImageBuffer, grid: GridSpec) -> List[LabeledPatch]:
    return [
        LabeledPatch(pixels, record.class_label, row, col, record.image_path,
                     record.split, record.sub_area_id, record.density)
        for row, col, pixels in tile_image(image, grid)
    ]


def cell_references(record: SampleRecord, width: int, height: int, grid: GridSpec) -> List[LabeledPatch]:
    check_fits(width, height, grid)
    return [
        LabeledPatch(None, record.class_label, row, col, record.image_path,
                     record.split, record.sub_area_id, record.density)
        for row, col in grid.cells()
    ]


def build_patch_dataset(manifest: Manifest, grid: GridSpec, root: Union[str, Path],
                        splits: Optional[Iterable[Split]] = None, threads: int = 1,
                        in_memory: bool = False) -> PatchDataset:
    """Patches of every manifest image (optionally only some splits), keeping manifest order.

    By default only frame headers are read and cells are tiled per batch;
    in_memory tiles every frame up front.
    """
    root = Path(root)
    wanted = set(splits) if splits is not None else None
    records = [r for r in manifest.records if wanted is None or r.split in wanted]

    def job(record: SampleRecord):
        def run():
            path = root / record.image_path
            try:
                if in_memory:
                    return patches_for_record(record, load_image(path), grid)
                width, height = image_size(path)
            except DataError as e:
                raise DataError(f"cannot tile {record.image_path}: {e.message}")
            return cell_references(record, width, height, grid)
        return run

    per_image = run_ordered([job(record) for record in records], max_workers=threads)
    patches = [patch for group in per_image for patch in group]
    logger.info(f"✅ Tiled {len(records)} images into {len(patches)} patches ({grid.label()} grid)")
    return PatchDataset(manifest.taxonomy, patches, grid, root)


def format_counts_table(dataset: PatchDataset) -> str:
    """Plain-text per-class count table with Train/Test columns and a totals row"""
    counts = dataset.counts()
    header = f"{'Class':<12}{'Train':>10}{'Test':>10}{'Total':>10}"
    lines = [header, "-" * len(header)]
    totals = [0, 0]
    for name in dataset.taxonomy.names:
        train = counts[name][Split.TRAIN.value]
        test = counts[name][Split.TEST.value]
        totals[0] += train
        totals[1] += test
        lines.append(f"{name:<12}{train:>10}{test:>10}{train + test:>10}")
    lines.append("-" * len(header))
    lines.append(f"{'Total':<12}{totals[0]:>10}{totals[1]:>10}{sum(totals):>10}")
    return "\n".join(lines)


def write_patch_index(dataset: PatchDataset, path: Union[str, Path]) -> None:
    """JSON lines: source_path, row, col, label, split"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        for patch in dataset.patches:
            handle.write(json.dumps(patch.index_entry(), sort_keys=True) + "\n")


def materialize_patches(dataset: PatchDataset, out_dir: Union[str, Path]) -> List[Path]:
    """Write each patch to out_dir/<split>/<class>/<stem>_r<row>c<col>.png"""
    out_dir = Path(out_dir)
    written = []
    for patch in dataset.patches:
        stem = Path(patch.source_path).with_suffix("").as_posix().replace("/", "__")
        target = (out_dir / patch.split.value / dataset.taxonomy.name_of(patch.label)
                  / f"{stem}_r{patch.row}c{patch.col}.png")
        save_image(dataset.pixels_of(patch), target)
        written.append(target)
    logger.info(f"💾 Materialized {len(written)} patches under {out_dir}")
    return written

