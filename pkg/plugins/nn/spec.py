#!/usr/bin/env python3
"""
Model Specifications
Declarative layer stacks: backbones, heads and shape inference
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple, Union

from ..utils.errors import ShapeError, UsageError
from ..utils.validators import Validators


@dataclass(frozen=True)
class Conv:
    out_channels: int
    kernel: int = 3
    stride: int = 1
    padding: int = 1
    type: str = field(default="conv", init=False)


@dataclass(frozen=True)
class ReLU:
    type: str = field(default="relu", init=False)


@dataclass(frozen=True)
class MaxPool:
    kernel: int = 2
    stride: int = 2
    type: str = field(default="maxpool", init=False)


@dataclass(frozen=True)
class Residual:
    """out = x + block(x); the block must preserve shape"""
    block: Tuple[Any, ...] = ()
    type: str = field(default="residual", init=False)

    def __post_init__(self):
        object.__setattr__(self, "block", tuple(self.block))


@dataclass(frozen=True)
class Flatten:
    type: str = field(default="flatten", init=False)


@dataclass(frozen=True)
class Dense:
    nodes: int
    type: str = field(default="dense", init=False)


@dataclass(frozen=True)
class Dropout:
    probability: float
    type: str = field(default="dropout", init=False)


@dataclass(frozen=True)
class Softmax:
    type: str = field(default="softmax", init=False)


LAYER_TYPES = {cls.__dataclass_fields__["type"].default: cls
               for cls in (Conv, ReLU, MaxPool, Residual, Flatten, Dense, Dropout, Softmax)}

HEAD_VARIANTS = ("two_layer_drop", "two_layer", "knn")
BACKBONE_VARIANTS = ("small", "vgg16", "resnet")


def layer_to_dict(layer) -> Dict[str, Any]:
    data = {"type": layer.type}
    if isinstance(layer, Conv):
        data.update(out_channels=layer.out_channels, kernel=layer.kernel, stride=layer.stride, padding=layer.padding)
    elif isinstance(layer, MaxPool):
        data.update(kernel=layer.kernel, stride=layer.stride)
    elif isinstance(layer, Residual):
        data["block"] = [layer_to_dict(inner) for inner in layer.block]
    elif isinstance(layer, Dense):
        data["nodes"] = layer.nodes
    elif isinstance(layer, Dropout):
        data["probability"] = layer.probability
    return data


def layer_from_dict(data: Dict[str, Any]):
    try:
        kind = data["type"]
        cls = LAYER_TYPES[kind]
        kwargs = {key: value for key, value in data.items() if key != "type"}
        if cls is Residual:
            kwargs["block"] = tuple(layer_from_dict(inner) for inner in kwargs.get("block", []))
        return cls(**kwargs)
    except (KeyError, TypeError) as e:
        raise UsageError(f"invalid layer descriptor {data!r}: {e}")


def infer_shape(layers: Sequence[Any], shape: Tuple[int, ...], where: str) -> Tuple[int, ...]:
    for index, layer in enumerate(layers):
        label = f"{where}{index} ({layer.type})"
        if isinstance(layer, Conv):
            if len(shape) != 3:
                raise ShapeError(f"layer {label} needs a (H, W, C) input, got {shape}")
            if not (Validators.is_positive_int(layer.out_channels) and Validators.is_positive_int(layer.kernel)
                    and Validators.is_positive_int(layer.stride) and layer.padding >= 0):
                raise ShapeError(f"layer {label} has invalid hyperparameters")
            height = (shape[0] + 2 * layer.padding - layer.kernel) // layer.stride + 1
            width = (shape[1] + 2 * layer.padding - layer.kernel) // layer.stride + 1
            if height < 1 or width < 1:
                raise ShapeError(f"layer {label} shrinks {shape} below 1x1")
            shape = (height, width, layer.out_channels)
        elif isinstance(layer, MaxPool):
            if len(shape) != 3:
                raise ShapeError(f"layer {label} needs a (H, W, C) input, got {shape}")
            height = (shape[0] - layer.kernel) // layer.stride + 1
            width = (shape[1] - layer.kernel) // layer.stride + 1
            if height < 1 or width < 1:
                raise ShapeError(f"layer {label} shrinks {shape} below 1x1")
            shape = (height, width, shape[2])
        elif isinstance(layer, Residual):
            out = infer_shape(layer.block, shape, f"{where}{index}.")
            if out != shape:
                raise ShapeError(f"residual block {label} maps {shape} to {out}")
        elif isinstance(layer, Flatten):
            total = 1
            for extent in shape:
                total *= extent
            shape = (total,)
        elif isinstance(layer, Dense):
            if len(shape) != 1:
                raise ShapeError(f"layer {label} needs a flat input, got {shape}; add a Flatten")
            if not Validators.is_positive_int(layer.nodes):
                raise ShapeError(f"layer {label} needs a positive node count")
            shape = (layer.nodes,)
        elif isinstance(layer, Dropout):
            if not Validators.is_probability(layer.probability):
                raise ShapeError(f"layer {label} dropout probability must lie in [0, 1)")
        elif isinstance(layer, Softmax):
            if len(shape) != 1:
                raise ShapeError(f"layer {label} needs a flat input, got {shape}")
    return shape


@dataclass(frozen=True)
class ModelSpec:
    """Input size (height, width, channels), layer stack and class count"""
    input_size: Tuple[int, int, int]
    layers: Tuple[Any, ...]
    class_count: int

    def __post_init__(self):
        object.__setattr__(self, "input_size", tuple(int(v) for v in self.input_size))
        object.__setattr__(self, "layers", tuple(self.layers))
        if len(self.layers) < 2 or not isinstance(self.layers[-1], Softmax) \
                or not isinstance(self.layers[-2], Dense) or self.layers[-2].nodes != self.class_count:
            raise ShapeError(f"model must end with Dense({self.class_count}) and Softmax")
        infer_shape(self.layers, self.input_size, "")

    def shapes(self) -> List[Tuple[int, ...]]:
        """Output shape after each top-level layer"""
        shapes, shape = [], self.input_size
        for index, layer in enumerate(self.layers):
            shape = infer_shape([layer], shape, f"{index}:")
            shapes.append(shape)
        return shapes

    @property
    def feature_width(self) -> int:
        """Width of the activation feeding the final Dense layer"""
        if len(self.layers) < 3:
            raise ShapeError("model has no penultimate layer")
        return self.shapes()[-3][0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "input_size": list(self.input_size),
            "layers": [layer_to_dict(layer) for layer in self.layers],
            "class_count": self.class_count,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelSpec':
        try:
            return cls(tuple(data["input_size"]), tuple(layer_from_dict(d) for d in data["layers"]),
                       int(data["class_count"]))
        except KeyError as e:
            raise UsageError(f"model spec is missing {e}")


def conv_block(channels: Sequence[int]) -> List[Any]:
    layers: List[Any] = []
    for width in channels:
        layers.extend([Conv(width, 3, 1, 1), ReLU()])
    layers.append(MaxPool(2, 2))
    return layers


def small_backbone() -> List[Any]:
    """Four 3x3 conv blocks of 16/32/64/128 channels, each pooled 2x2"""
    layers: List[Any] = []
    for width in (16, 32, 64, 128):
        layers.extend(conv_block([width]))
    return layers


def vgg16_backbone() -> List[Any]:
    layers: List[Any] = []
    for block in ([64, 64], [128, 128], [256, 256, 256], [512, 512, 512], [512, 512, 512]):
        layers.extend(conv_block(block))
    return layers


def resnet_backbone(widths: Sequence[int] = (32, 64, 128)) -> List[Any]:
    """Stem conv per stage followed by one identity residual block and a pool"""
    layers: List[Any] = []
    for width in widths:
        layers.extend([
            Conv(width, 3, 1, 1), ReLU(),
            Residual((Conv(width, 3, 1, 1), ReLU(), Conv(width, 3, 1, 1))), ReLU(),
            MaxPool(2, 2),
        ])
    return layers


def head_layers(variant: str, class_count: int) -> List[Any]:
    """Classification heads; the KNN variant trains with the dropout head"""
    if variant in ("two_layer_drop", "knn"):
        return [Dense(512), ReLU(), Dropout(0.05), Dense(512), ReLU(), Dropout(0.15),
                Dense(class_count), Softmax()]
    if variant == "two_layer":
        return [Dense(16), ReLU(), Dense(14), ReLU(), Dense(class_count), Softmax()]
    raise UsageError(f"unknown head variant {variant!r} (choose from {', '.join(HEAD_VARIANTS)})")


def load_backbone_file(path: Union[str, Path]) -> List[Any]:
    """JSON file with a "layers" list of descriptors (no head, no Flatten)"""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read backbone config {path}: {e}")
    return [layer_from_dict(d) for d in data.get("layers", [])]


def backbone_layers(variant: str) -> List[Any]:
    if variant == "small":
        return small_backbone()
    if variant == "vgg16":
        return vgg16_backbone()
    if variant == "resnet":
        return resnet_backbone()
    if variant.endswith(".json"):
        return load_backbone_file(variant)
    raise UsageError(f"unknown backbone {variant!r} (choose from {', '.join(BACKBONE_VARIANTS)} or a .json file)")


def build_model_spec(class_count: int, input_size: Sequence[int] = (224, 224, 3),
                     backbone: str = "small", head: str = "two_layer_drop") -> ModelSpec:
    layers = backbone_layers(backbone) + [Flatten()] + head_layers(head, class_count)
    return ModelSpec(tuple(input_size), tuple(layers), class_count)
