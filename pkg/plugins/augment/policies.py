#!/usr/bin/env python3
"""
Augmentation Policies
The five training-time policies and their parameter ranges
"""

from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any, Dict, Tuple

from ..utils.errors import UsageError
from ..utils.validators import Validators

Range = Tuple[float, float]


class PolicyKind(Enum):
    """Augmentation policy enumeration; values are the CLI spellings"""
    NONE = "none"
    FLIP_ONLY = "flip"
    GEOMETRIC = "geometric"
    COLOR = "color"
    GEOMETRIC_AND_COLOR = "both"


@dataclass(frozen=True)
class AugmentParams:
    """Sampling ranges, all drawn uniformly"""
    brightness: Range = (-0.1, 0.1)
    contrast: Range = (0.8, 1.2)
    blur_sigma: Range = (0.0, 1.5)
    red_gain: Range = (0.8, 1.2)
    crop_fraction: Range = (0.85, 1.0)
    zoom: Range = (0.9, 1.1)
    translate: Range = (-0.1, 0.1)
    flip_probability: float = 0.5

    def __post_init__(self):
        for name in ("brightness", "contrast", "blur_sigma", "red_gain", "crop_fraction", "zoom", "translate"):
            bounds = getattr(self, name)
            if not Validators.is_valid_range(bounds):
                raise UsageError(f"augment range {name} must be [low, high] with low <= high, got {bounds!r}")
            object.__setattr__(self, name, (float(bounds[0]), float(bounds[1])))
        if self.blur_sigma[0] < 0:
            raise UsageError("blur_sigma must be non-negative")
        if not 0.0 < self.crop_fraction[0] <= self.crop_fraction[1] <= 1.0:
            raise UsageError("crop_fraction must lie in (0, 1]")
        if self.zoom[0] <= 0:
            raise UsageError("zoom must be positive")
        if not 0.0 <= float(self.flip_probability) <= 1.0:
            raise UsageError("flip_probability must lie in [0, 1]")

    @classmethod
    def identity(cls) -> 'AugmentParams':
        """Every range collapsed onto the no-op value"""
        return cls(brightness=(0.0, 0.0), contrast=(1.0, 1.0), blur_sigma=(0.0, 0.0),
                   red_gain=(1.0, 1.0), crop_fraction=(1.0, 1.0), zoom=(1.0, 1.0),
                   translate=(0.0, 0.0), flip_probability=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {key: list(value) if isinstance(value, tuple) else value for key, value in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'AugmentParams':
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise UsageError(f"unknown augment parameters: {', '.join(sorted(unknown))}")
        values = {key: tuple(value) if isinstance(value, (list, tuple)) else value for key, value in data.items()}
        return cls(**values)


@dataclass(frozen=True)
class AugmentPolicy:
    """Policy kind plus the ranges its transforms sample from"""
    kind: PolicyKind = PolicyKind.NONE
    params: AugmentParams = field(default_factory=AugmentParams)

    @classmethod
    def from_name(cls, name: str, params: AugmentParams = None) -> 'AugmentPolicy':
        try:
            kind = PolicyKind(name.lower())
        except ValueError:
            choices = ", ".join(kind.value for kind in PolicyKind)
            raise UsageError(f"unknown augmentation policy {name!r} (choose from {choices})")
        return cls(kind, params or AugmentParams())

    def with_params(self, params: AugmentParams) -> 'AugmentPolicy':
        return replace(self, params=params)
