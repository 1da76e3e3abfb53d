"""
Embedding Plugin
Penultimate-layer features and a from-scratch t-SNE
"""

from .features import FeatureMatrix, extract_features, subsample_features
from .plotting import embedding_points, plot_embedding, write_embedding
from .tsne import (
    TsneConfig, TsneResult, effective_perplexity, embedding_kl, joint_probabilities,
    kl_divergence, kl_gradient, low_dim_affinities, perplexity_calibrate, squared_distances, tsne
)

__all__ = [
    'FeatureMatrix', 'extract_features', 'subsample_features',
    'embedding_points', 'plot_embedding', 'write_embedding',
    'TsneConfig', 'TsneResult', 'effective_perplexity', 'embedding_kl', 'joint_probabilities',
    'kl_divergence', 'kl_gradient', 'low_dim_affinities', 'perplexity_calibrate', 'squared_distances', 'tsne',
]
