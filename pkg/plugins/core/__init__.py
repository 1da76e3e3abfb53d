"""
Core Plugin Package
Tensors, images, class taxonomy and the dataset manifest model
"""

from .images import ImageBuffer, load_image, save_image, image_size, is_image_file
from .models import Density, Split, SampleRecord, Manifest, save_manifest, load_manifest, SCHEMA_VERSION
from .taxonomy import Taxonomy, TaxonomyMode, FOUR_CLASS_NAMES, FIVE_CLASS_NAMES
from .tensors import Tensor, resize_bilinear, image_to_tensor, images_to_batch, tensor_to_image

__all__ = [
    'ImageBuffer', 'load_image', 'save_image', 'image_size', 'is_image_file',
    'Density', 'Split', 'SampleRecord', 'Manifest', 'save_manifest', 'load_manifest',
    'SCHEMA_VERSION',
    'Taxonomy', 'TaxonomyMode', 'FOUR_CLASS_NAMES', 'FIVE_CLASS_NAMES',
    'Tensor', 'resize_bilinear', 'image_to_tensor', 'images_to_batch', 'tensor_to_image'
]
