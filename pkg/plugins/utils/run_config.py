#!/usr/bin/env python3
"""
Run Configuration
Merges defaults, a JSON config file and command-line flags (flags win)
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from .errors import UsageError

logger = logging.getLogger(__name__)

DEFAULT = "default"
FILE = "file"
FLAG = "flag"


class RunConfig:
    """Resolved settings plus where each one came from"""

    def __init__(self, values: Dict[str, Any], sources: Dict[str, str]):
        self.values = values
        self.sources = sources

    @classmethod
    def resolve(cls, defaults: Mapping[str, Any], file_path: Optional[Union[str, Path]] = None,
                flags: Optional[Mapping[str, Any]] = None) -> 'RunConfig':
        values = json.loads(json.dumps(dict(defaults)))
        sources = {key: DEFAULT for key in values}

        if file_path is not None:
            for key, value in load_config_file(file_path).items():
                if key not in values:
                    raise UsageError(f"unknown setting {key!r} in config file {file_path}")
                if key == "augment_params" and isinstance(value, dict):
                    value = {**values[key], **value}
                values[key] = value
                sources[key] = FILE

        for key, value in (flags or {}).items():
            if value is None:
                continue
            if key not in values:
                raise UsageError(f"unknown setting {key!r}")
            values[key] = value
            sources[key] = FLAG

        return cls(values, sources)

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    @property
    def seed(self) -> int:
        return int(self.values["seed"])

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.values)

    def overridden(self) -> Dict[str, str]:
        return {key: source for key, source in sorted(self.sources.items()) if source != DEFAULT}


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError:
        raise UsageError(f"config file {path} not found")
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config file {path}: {e}")
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    logger.debug(f"Loaded {len(data)} settings from {path}")
    return data
