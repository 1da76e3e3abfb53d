"""
Tiler Plugin Package
Grid tiling and weak label propagation
"""

from .grid import GridSpec, tile_cell, tile_image
from .patch_dataset import (
    LabeledPatch, PatchDataset, build_patch_dataset, cell_references, patches_for_record,
    format_counts_table, write_patch_index, materialize_patches
)

__all__ = [
    'GridSpec', 'tile_cell', 'tile_image',
    'LabeledPatch', 'PatchDataset', 'build_patch_dataset', 'cell_references', 'patches_for_record',
    'format_counts_table', 'write_patch_index', 'materialize_patches'
]
