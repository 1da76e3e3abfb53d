"""
Traineval Plugin Package
Training loop, cross validation, metrics and the ablation harness
"""

from .ablation import AblationRow, run_ablation, format_ablation_table, variant_config, DIMENSIONS
from .classifier import PatchClassifier
from .cross_validation import CrossValidationResult, cross_validate
from .evaluation import (
    ConfusionMatrix, MetricsReport, metrics, mean_report, evaluate, predict_dataset, density_breakdown
)
from .reports import build_report, metrics_row, write_json, format_metrics_table
from .train_config import TrainConfig
from .trainer import EpochRecord, FitResult, fit, train, holdout_sources

__all__ = [
    'AblationRow', 'run_ablation', 'format_ablation_table', 'variant_config', 'DIMENSIONS',
    'PatchClassifier',
    'CrossValidationResult', 'cross_validate',
    'ConfusionMatrix', 'MetricsReport', 'metrics', 'mean_report', 'evaluate', 'predict_dataset',
    'density_breakdown',
    'build_report', 'metrics_row', 'write_json', 'format_metrics_table',
    'TrainConfig',
    'EpochRecord', 'FitResult', 'fit', 'train', 'holdout_sources'
]
