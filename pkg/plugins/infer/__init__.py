"""
Inference Plugin
Whole-frame classification and color-coded overlays
"""

from .frames import LabelGrid, SKIPPED, classify_frame, collect_frames, infer_frames
from .overlay import CLASS_COLORS, DEFAULT_ALPHA, Palette, blend, render_overlay

__all__ = [
    'LabelGrid', 'SKIPPED', 'classify_frame', 'collect_frames', 'infer_frames',
    'CLASS_COLORS', 'DEFAULT_ALPHA', 'Palette', 'blend', 'render_overlay',
]
