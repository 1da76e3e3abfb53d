"""
Synthetic Data Plugin
Deterministic textured datasets for experiments and tests
"""

from .generator import (
    MANIFEST_NAME, TEST_LIST_NAME, TEXTURES, SynthSpec, Texture,
    area_offsets, choose_test_areas, render_frame, synth_dataset
)

__all__ = [
    'MANIFEST_NAME', 'TEST_LIST_NAME', 'TEXTURES', 'SynthSpec', 'Texture',
    'area_offsets', 'choose_test_areas', 'render_frame', 'synth_dataset',
]
