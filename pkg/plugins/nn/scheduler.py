#!/usr/bin/env python3
"""
Plateau Scheduler
Halve the learning rate after a patience window without improvement; stop after max halvings
"""

import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, Tuple

from ..utils.errors import NonFiniteLossError


class Action(Enum):
    """Scheduler action enumeration"""
    CONTINUE = "continue"
    HALVE = "halve"
    STOP = "stop"


@dataclass(frozen=True)
class SchedulerState:
    initial_lr: float = 0.001
    current_lr: float = 0.001
    best_loss: float = math.inf
    epochs_since_improvement: int = 0
    halvings: int = 0
    patience: int = 10
    max_halvings: int = 4
    improvement_threshold: float = 1e-4

    @classmethod
    def start(cls, initial_lr: float, baseline_loss: float = math.inf, **overrides) -> 'SchedulerState':
        return cls(initial_lr=initial_lr, current_lr=initial_lr, best_loss=baseline_loss, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SchedulerState':
        return cls(**data)


def scheduler_update(state: SchedulerState, epoch_loss: float) -> Tuple[SchedulerState, Action]:
    if not math.isfinite(epoch_loss):
        raise NonFiniteLossError(f"scheduler received a non-finite loss {epoch_loss}")

    if epoch_loss < state.best_loss - state.improvement_threshold:
        return replace(state, best_loss=epoch_loss, epochs_since_improvement=0), Action.CONTINUE

    waited = state.epochs_since_improvement + 1
    if waited < state.patience:
        return replace(state, epochs_since_improvement=waited), Action.CONTINUE

    if state.halvings >= state.max_halvings:
        return replace(state, epochs_since_improvement=waited), Action.STOP

    halvings = state.halvings + 1
    return replace(
        state,
        halvings=halvings,
        current_lr=state.initial_lr / (2 ** halvings),
        epochs_since_improvement=0,
    ), Action.HALVE
