"""
Utils Plugin Package
Logging, errors, validation and small helpers
"""

from .errors import (
    SeagrassError, UsageError, DataError, NumericError, ManifestError, TilingError,
    ShapeError, TaxonomyMismatchError, CheckpointError, CorruptCheckpointError,
    CheckpointVersionError, NonFiniteLossError, EmbeddingError
)
from .helpers import parse_grid, format_duration, chunked, run_ordered
from .logger import setup_logger, format_epoch_line
from .run_config import RunConfig, load_config_file
from .validators import Validators

__all__ = [
    'SeagrassError', 'UsageError', 'DataError', 'NumericError', 'ManifestError',
    'TilingError', 'ShapeError', 'TaxonomyMismatchError', 'CheckpointError',
    'CorruptCheckpointError', 'CheckpointVersionError', 'NonFiniteLossError',
    'EmbeddingError',
    'parse_grid', 'format_duration', 'chunked', 'run_ordered',
    'setup_logger', 'format_epoch_line',
    'RunConfig', 'load_config_file',
    'Validators'
]
