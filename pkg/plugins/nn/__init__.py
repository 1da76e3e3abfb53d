"""
NN Plugin Package
From-scratch network core: layers, losses, Adam, plateau schedule, KNN head, checkpoints
"""

from .checkpoint import Checkpoint, checkpoint_save, checkpoint_load, checkpoint_to_bytes, checkpoint_from_bytes
from .knn import knn_predict, knn_predict_batch, knn_vote_probabilities
from .losses import cross_entropy, cross_entropy_grad
from .network import (
    init_parameters, forward, backward, features, predict_proba, batch_features, argmax_lowest
)
from .optim import AdamState, adam_step
from .scheduler import Action, SchedulerState, scheduler_update
from .spec import (
    Conv, ReLU, MaxPool, Residual, Flatten, Dense, Dropout, Softmax, ModelSpec,
    build_model_spec, head_layers, backbone_layers, HEAD_VARIANTS, BACKBONE_VARIANTS
)

__all__ = [
    'Checkpoint', 'checkpoint_save', 'checkpoint_load', 'checkpoint_to_bytes', 'checkpoint_from_bytes',
    'knn_predict', 'knn_predict_batch', 'knn_vote_probabilities',
    'cross_entropy', 'cross_entropy_grad',
    'init_parameters', 'forward', 'backward', 'features', 'predict_proba', 'batch_features', 'argmax_lowest',
    'AdamState', 'adam_step',
    'Action', 'SchedulerState', 'scheduler_update',
    'Conv', 'ReLU', 'MaxPool', 'Residual', 'Flatten', 'Dense', 'Dropout', 'Softmax', 'ModelSpec',
    'build_model_spec', 'head_layers', 'backbone_layers', 'HEAD_VARIANTS', 'BACKBONE_VARIANTS'
]
