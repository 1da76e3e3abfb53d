#!/usr/bin/env python3
"""
Network Execution
Parameter initialisation, forward/backward over a ModelSpec, feature extraction
"""

import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..augment.rng import Rng
from ..utils.errors import ShapeError
from . import layers as L
from .spec import Conv, Dense, Dropout, Flatten, MaxPool, ModelSpec, ReLU, Residual, Softmax, infer_shape

Parameters = Dict[str, np.ndarray]


def _init_layers(layer_list: Sequence[Any], shape: Tuple[int, ...], prefix: str,
                 generator: np.random.Generator, dtype, params: Parameters) -> Tuple[int, ...]:
    for index, layer in enumerate(layer_list):
        name = f"{prefix}{index}"
        if isinstance(layer, Conv):
            fan_in = layer.kernel * layer.kernel * shape[2]
            bound = math.sqrt(6.0 / fan_in)
            params[f"{name}.W"] = generator.uniform(
                -bound, bound, (layer.kernel, layer.kernel, shape[2], layer.out_channels)).astype(dtype)
            params[f"{name}.b"] = np.zeros(layer.out_channels, dtype=dtype)
        elif isinstance(layer, Dense):
            bound = math.sqrt(6.0 / shape[0])
            params[f"{name}.W"] = generator.uniform(-bound, bound, (shape[0], layer.nodes)).astype(dtype)
            params[f"{name}.b"] = np.zeros(layer.nodes, dtype=dtype)
        elif isinstance(layer, Residual):
            _init_layers(layer.block, shape, f"{name}.", generator, dtype, params)
        shape = infer_shape([layer], shape, name)
    return shape


def init_parameters(spec: ModelSpec, rng: Rng, dtype=np.float32) -> Parameters:
    """Kaiming-uniform fan-in weights, zero biases"""
    params: Parameters = {}
    _init_layers(spec.layers, spec.input_size, "", rng.child("init").generator, dtype, params)
    return params


def _param(params: Parameters, key: str) -> np.ndarray:
    try:
        return params[key]
    except KeyError:
        raise ShapeError(f"parameters are missing {key}")


def _run(layer_list: Sequence[Any], prefix: str, params: Parameters, x: np.ndarray,
         training: bool, rng: Optional[Rng], caches: List[Any]) -> np.ndarray:
    for index, layer in enumerate(layer_list):
        name = f"{prefix}{index}"
        if isinstance(layer, Conv):
            x, cache = L.conv_forward(x, _param(params, f"{name}.W"), _param(params, f"{name}.b"),
                                      layer.stride, layer.padding)
        elif isinstance(layer, Dense):
            x, cache = L.dense_forward(x, _param(params, f"{name}.W"), _param(params, f"{name}.b"))
        elif isinstance(layer, ReLU):
            x, cache = L.relu_forward(x)
        elif isinstance(layer, MaxPool):
            x, cache = L.maxpool_forward(x, layer.kernel, layer.stride)
        elif isinstance(layer, Flatten):
            x, cache = L.flatten_forward(x)
        elif isinstance(layer, Dropout):
            generator = rng.child("dropout", name).generator if (training and rng is not None) else None
            if training and generator is None:
                raise ShapeError("training-mode forward needs an rng for dropout")
            x, cache = L.dropout_forward(x, layer.probability, training, generator)
        elif isinstance(layer, Residual):
            inner: List[Any] = []
            x = x + _run(layer.block, f"{name}.", params, x, training, rng, inner)
            cache = inner
        elif isinstance(layer, Softmax):
            x = L.softmax_forward(x)
            cache = x
        else:
            raise ShapeError(f"unsupported layer {layer!r}")
        caches.append(cache)
    return x


def _check_batch(spec: ModelSpec, batch: np.ndarray) -> None:
    if batch.ndim != 4 or tuple(batch.shape[1:]) != spec.input_size:
        raise ShapeError(f"batch shape {batch.shape} does not match input size {spec.input_size}")


def forward(spec: ModelSpec, params: Parameters, batch: np.ndarray, training: bool = False,
            rng: Optional[Rng] = None):
    """Probabilities (N, class_count) and the per-layer cache"""
    _check_batch(spec, batch)
    caches: List[Any] = []
    probs = _run(spec.layers, "", params, batch, training, rng, caches)
    return probs, caches


def _back(layer_list: Sequence[Any], prefix: str, params: Parameters, caches: List[Any],
          grad: np.ndarray, grads: Parameters) -> np.ndarray:
    if len(caches) != len(layer_list):
        raise ShapeError("cache does not match the model spec")
    for index in range(len(layer_list) - 1, -1, -1):
        layer, cache, name = layer_list[index], caches[index], f"{prefix}{index}"
        if isinstance(layer, Conv):
            grad, grads[f"{name}.W"], grads[f"{name}.b"] = L.conv_backward(
                grad, params[f"{name}.W"], layer.stride, layer.padding, cache)
        elif isinstance(layer, Dense):
            grad, grads[f"{name}.W"], grads[f"{name}.b"] = L.dense_backward(grad, params[f"{name}.W"], cache)
        elif isinstance(layer, ReLU):
            grad = L.relu_backward(grad, cache)
        elif isinstance(layer, MaxPool):
            grad = L.maxpool_backward(grad, layer.kernel, layer.stride, cache)
        elif isinstance(layer, Flatten):
            grad = grad.reshape(cache)
        elif isinstance(layer, Dropout):
            grad = L.dropout_backward(grad, cache)
        elif isinstance(layer, Residual):
            grad = grad + _back(layer.block, f"{name}.", params, cache, grad, grads)
        elif isinstance(layer, Softmax):
            grad = L.softmax_backward(grad, cache)
    return grad


def backward(spec: ModelSpec, params: Parameters, caches: List[Any], grad_probs: np.ndarray) -> Parameters:
    """Gradient of the loss with respect to every parameter"""
    grads: Parameters = {}
    _back(spec.layers, "", params, caches, grad_probs, grads)
    return {key: grads[key] for key in params}


def features(spec: ModelSpec, params: Parameters, batch: np.ndarray) -> np.ndarray:
    """Evaluation-mode activations feeding the final Dense layer"""
    _check_batch(spec, batch)
    return _run(spec.layers[:-2], "", params, batch, False, None, [])


def predict_proba(spec: ModelSpec, params: Parameters, batch: np.ndarray, batch_size: int = 64) -> np.ndarray:
    """Evaluation-mode probabilities, computed in chunks"""
    _check_batch(spec, batch)
    if len(batch) == 0:
        return np.zeros((0, spec.class_count))
    parts = [forward(spec, params, batch[start:start + batch_size])[0]
             for start in range(0, len(batch), batch_size)]
    return np.concatenate(parts, axis=0)


def batch_features(spec: ModelSpec, params: Parameters, batch: np.ndarray, batch_size: int = 64) -> np.ndarray:
    if len(batch) == 0:
        return np.zeros((0, spec.feature_width))
    parts = [features(spec, params, batch[start:start + batch_size]) for start in range(0, len(batch), batch_size)]
    return np.concatenate(parts, axis=0)


def argmax_lowest(probs: np.ndarray) -> np.ndarray:
    """Row-wise argmax; ties resolve to the lowest class index"""
    return np.asarray(probs).argmax(axis=1)
