#!/usr/bin/env python3
"""
Adam Optimiser
Pure state transition over parameter dictionaries
"""

from dataclasses import dataclass, field, replace
from typing import Dict

import numpy as np

from ..utils.errors import ShapeError

Parameters = Dict[str, np.ndarray]


@dataclass(frozen=True)
class AdamState:
    """Moments shaped like their parameters; t counts completed steps"""
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: Parameters = field(default_factory=dict)
    v: Parameters = field(default_factory=dict)

    @classmethod
    def for_parameters(cls, params: Parameters, lr: float = 0.001) -> 'AdamState':
        zeros = {key: np.zeros_like(value) for key, value in params.items()}
        return cls(lr=lr, m=zeros, v={key: np.zeros_like(value) for key, value in params.items()})

    def with_lr(self, lr: float) -> 'AdamState':
        return replace(self, lr=lr)


def adam_step(params: Parameters, grads: Parameters, state: AdamState):
    """Bias-corrected Adam update; returns new (params, state)"""
    t = state.t + 1
    new_params, new_m, new_v = {}, {}, {}
    correction1 = 1.0 - state.beta1 ** t
    correction2 = 1.0 - state.beta2 ** t
    for key, value in params.items():
        grad = grads.get(key)
        if grad is None or grad.shape != value.shape:
            raise ShapeError(f"gradient for {key} missing or misshaped")
        m_prev = state.m.get(key)
        v_prev = state.v.get(key)
        if m_prev is None or v_prev is None or m_prev.shape != value.shape or v_prev.shape != value.shape:
            raise ShapeError(f"optimiser moments for {key} missing or misshaped")
        m = state.beta1 * m_prev + (1.0 - state.beta1) * grad
        v = state.beta2 * v_prev + (1.0 - state.beta2) * grad * grad
        m_hat = m / correction1
        v_hat = v / correction2
        new_params[key] = (value - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)).astype(value.dtype, copy=False)
        new_m[key] = m.astype(value.dtype, copy=False)
        new_v[key] = v.astype(value.dtype, copy=False)
    return new_params, replace(state, t=t, m=new_m, v=new_v)
