"""
Ingest Plugin Package
Manifest construction, geographic holdout and k-fold splits
"""

from .manifest_builder import build_manifest, parse_stem
from .splits import SplitPlan, FoldAssignment, split_by_subarea, kfold_split, read_subarea_list

__all__ = [
    'build_manifest', 'parse_stem',
    'SplitPlan', 'FoldAssignment', 'split_by_subarea', 'kfold_split', 'read_subarea_list'
]
