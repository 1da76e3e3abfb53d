"""
Augment Plugin Package
Seeded random streams and the training-time augmentation policies
"""

from .policies import AugmentParams, AugmentPolicy, PolicyKind
from .rng import Rng
from .transforms import (
    horizontal_flip, gaussian_blur, color_transform, geometric_transform,
    apply_color, apply_geometric, apply_policy, augment_batch
)

__all__ = [
    'AugmentParams', 'AugmentPolicy', 'PolicyKind', 'Rng',
    'horizontal_flip', 'gaussian_blur', 'color_transform', 'geometric_transform',
    'apply_color', 'apply_geometric', 'apply_policy', 'augment_batch'
]
