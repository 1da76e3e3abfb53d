#!/usr/bin/env python3
"""
Checkpoint Files
PGC1 magic, length-prefixed JSON header, little-endian tensor payload, CRC32 trailer
"""

import json
import logging
import struct
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..utils.errors import CheckpointError, CheckpointVersionError, CorruptCheckpointError
from .optim import AdamState
from .scheduler import SchedulerState
from .spec import ModelSpec

logger = logging.getLogger(__name__)

MAGIC = b"PGC1"
FORMAT_VERSION = 1
_LENGTH = struct.Struct("<I")
_SUPPORTED_DTYPES = ("<f4", "<f8")


@dataclass
class Checkpoint:
    """Model, optimiser and scheduler state plus run provenance"""
    spec: ModelSpec
    params: Dict[str, np.ndarray]
    adam: AdamState
    scheduler: SchedulerState
    taxonomy_mode: str
    seed: int
    config: Dict[str, Any] = field(default_factory=dict)
    metadata: Dict[str, Any] = field(default_factory=dict)
    knn_features: Optional[np.ndarray] = None
    knn_labels: Optional[np.ndarray] = None
    format_version: int = FORMAT_VERSION

    @property
    def head(self) -> str:
        return str(self.config.get("head", "two_layer_drop"))


def _dtype_code(array: np.ndarray) -> str:
    return "<f8" if array.dtype == np.float64 else "<f4"


def _tensor_entries(checkpoint: Checkpoint) -> List[Tuple[str, str, np.ndarray]]:
    entries = [("params", key, value) for key, value in checkpoint.params.items()]
    entries += [("adam_m", key, checkpoint.adam.m[key]) for key in checkpoint.params if key in checkpoint.adam.m]
    entries += [("adam_v", key, checkpoint.adam.v[key]) for key in checkpoint.params if key in checkpoint.adam.v]
    if checkpoint.knn_features is not None:
        entries.append(("knn_bank", "features", checkpoint.knn_features))
    return entries


def checkpoint_to_bytes(checkpoint: Checkpoint) -> bytes:
    entries = _tensor_entries(checkpoint)
    payload_parts = []
    tensors = []
    for group, name, array in entries:
        code = _dtype_code(array)
        tensors.append({"group": group, "name": name, "shape": list(array.shape), "dtype": code})
        payload_parts.append(np.ascontiguousarray(array, dtype=np.dtype(code)).tobytes())
    payload = b"".join(payload_parts)

    header = {
        "format_version": checkpoint.format_version,
        "model_spec": checkpoint.spec.to_dict(),
        "taxonomy": checkpoint.taxonomy_mode,
        "seed": checkpoint.seed,
        "adam": {"lr": checkpoint.adam.lr, "beta1": checkpoint.adam.beta1, "beta2": checkpoint.adam.beta2,
                 "eps": checkpoint.adam.eps, "t": checkpoint.adam.t},
        "scheduler": checkpoint.scheduler.to_dict(),
        "config": checkpoint.config,
        "metadata": checkpoint.metadata,
        "knn_labels": None if checkpoint.knn_labels is None else [int(v) for v in checkpoint.knn_labels],
        "tensors": tensors,
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    return b"".join([MAGIC, _LENGTH.pack(len(header_bytes)), header_bytes, payload,
                     _LENGTH.pack(zlib.crc32(payload) & 0xFFFFFFFF)])


def checkpoint_from_bytes(blob: bytes) -> Checkpoint:
    if len(blob) < len(MAGIC) + 2 * _LENGTH.size or blob[:4] != MAGIC:
        raise CorruptCheckpointError("not a checkpoint file (bad magic or too short)")
    (header_len,) = _LENGTH.unpack_from(blob, 4)
    header_end = 8 + header_len
    if header_end > len(blob):
        raise CorruptCheckpointError("checkpoint header is truncated")
    try:
        header = json.loads(blob[8:header_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CorruptCheckpointError(f"checkpoint header is unreadable: {e}")

    version = header.get("format_version")
    if version != FORMAT_VERSION:
        raise CheckpointVersionError(f"checkpoint format version {version!r} is not supported (expected {FORMAT_VERSION})")

    try:
        entries = header["tensors"]
        sizes = []
        for entry in entries:
            if entry["dtype"] not in _SUPPORTED_DTYPES:
                raise CorruptCheckpointError(f"unsupported tensor dtype {entry['dtype']}")
            count = int(np.prod(entry["shape"], dtype=np.int64))
            sizes.append(count * np.dtype(entry["dtype"]).itemsize)
    except (KeyError, TypeError, ValueError) as e:
        raise CorruptCheckpointError(f"checkpoint tensor table is malformed: {e}")

    payload_end = header_end + sum(sizes)
    if payload_end + _LENGTH.size != len(blob):
        raise CorruptCheckpointError(
            f"checkpoint length mismatch: expected {payload_end + _LENGTH.size} bytes, found {len(blob)}"
        )
    payload = blob[header_end:payload_end]
    (stored_crc,) = _LENGTH.unpack_from(blob, payload_end)
    if zlib.crc32(payload) & 0xFFFFFFFF != stored_crc:
        raise CorruptCheckpointError("checkpoint payload checksum mismatch")

    groups: Dict[str, Dict[str, np.ndarray]] = {"params": {}, "adam_m": {}, "adam_v": {}, "knn_bank": {}}
    offset = 0
    for entry, size in zip(entries, sizes):
        array = np.frombuffer(payload, dtype=np.dtype(entry["dtype"]), count=size // np.dtype(entry["dtype"]).itemsize,
                              offset=offset).reshape(entry["shape"]).copy()
        groups.setdefault(entry["group"], {})[entry["name"]] = array
        offset += size

    try:
        adam_header = header["adam"]
        adam = AdamState(lr=adam_header["lr"], beta1=adam_header["beta1"], beta2=adam_header["beta2"],
                         eps=adam_header["eps"], t=adam_header["t"], m=groups["adam_m"], v=groups["adam_v"])
        knn_labels = header.get("knn_labels")
        return Checkpoint(
            spec=ModelSpec.from_dict(header["model_spec"]),
            params=groups["params"],
            adam=adam,
            scheduler=SchedulerState.from_dict(header["scheduler"]),
            taxonomy_mode=header["taxonomy"],
            seed=header["seed"],
            config=header.get("config", {}),
            metadata=header.get("metadata", {}),
            knn_features=groups["knn_bank"].get("features"),
            knn_labels=None if knn_labels is None else np.asarray(knn_labels, dtype=np.int64),
            format_version=version,
        )
    except (KeyError, TypeError) as e:
        raise CorruptCheckpointError(f"checkpoint header is incomplete: {e}")


def checkpoint_save(checkpoint: Checkpoint, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(checkpoint_to_bytes(checkpoint))
    except OSError as e:
        raise CheckpointError(f"cannot write checkpoint {path}: {e}")
    logger.info(f"💾 Checkpoint saved to {path}")


def checkpoint_load(path: Union[str, Path]) -> Checkpoint:
    try:
        blob = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointError(f"cannot read checkpoint {path}: {e}")
    return checkpoint_from_bytes(blob)
