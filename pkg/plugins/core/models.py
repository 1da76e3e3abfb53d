#!/usr/bin/env python3
"""
Dataset Models
Sample records and the manifest document
"""

import json
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..utils.errors import ManifestError
from .taxonomy import Taxonomy

SCHEMA_VERSION = 1


class Density(Enum):
    """Density tier enumeration"""
    DENSE = "dense"
    MEDIUM = "medium"
    SPARSE = "sparse"
    UNRATED = "unrated"
    NOT_APPLICABLE = "not_applicable"


class Split(Enum):
    """Split assignment enumeration"""
    TRAIN = "train"
    TEST = "test"
    UNASSIGNED = "unassigned"


SEAGRASS_DENSITIES = frozenset({Density.DENSE, Density.MEDIUM, Density.SPARSE, Density.UNRATED})


@dataclass(frozen=True)
class SampleRecord:
    """One source image"""
    image_path: str
    sub_area_id: str
    class_label: int
    collection_date: Optional[date] = None
    density: Density = Density.NOT_APPLICABLE
    split: Split = Split.UNASSIGNED

    def check(self, taxonomy: Taxonomy) -> None:
        if not 0 <= self.class_label < taxonomy.size:
            raise ManifestError(f"{self.image_path}: label {self.class_label} outside taxonomy")
        seagrass = taxonomy.is_seagrass(self.class_label)
        if seagrass and self.density not in SEAGRASS_DENSITIES:
            raise ManifestError(f"{self.image_path}: seagrass class needs a density tier")
        if not seagrass and self.density is not Density.NOT_APPLICABLE:
            raise ManifestError(f"{self.image_path}: density {self.density.value} only valid for seagrass")

    def with_split(self, split: Split) -> 'SampleRecord':
        return replace(self, split=split)

    def to_dict(self, taxonomy: Taxonomy) -> Dict[str, Any]:
        """Convert to the manifest JSON record layout"""
        return {
            "path": self.image_path,
            "sub_area": self.sub_area_id,
            "date": self.collection_date.isoformat() if self.collection_date else None,
            "label": taxonomy.name_of(self.class_label),
            "density": self.density.value,
            "split": self.split.value,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], taxonomy: Taxonomy) -> 'SampleRecord':
        """Create from a manifest JSON record"""
        try:
            label = data["label"]
            class_label = label if isinstance(label, int) else taxonomy.index_of(str(label))
            raw_date = data.get("date")
            return cls(
                image_path=str(data["path"]),
                sub_area_id=str(data["sub_area"]),
                class_label=class_label,
                collection_date=date.fromisoformat(raw_date) if raw_date else None,
                density=Density(data.get("density", Density.NOT_APPLICABLE.value)),
                split=Split(data.get("split", Split.UNASSIGNED.value)),
            )
        except (KeyError, ValueError, TypeError) as e:
            raise ManifestError(f"malformed manifest record {data!r}: {e}")


@dataclass(frozen=True)
class Manifest:
    """Ordered records plus taxonomy"""
    taxonomy: Taxonomy
    records: Tuple[SampleRecord, ...] = field(default_factory=tuple)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        seen = set()
        for record in self.records:
            if record.image_path in seen:
                raise ManifestError(f"duplicate image path {record.image_path}")
            seen.add(record.image_path)
            record.check(self.taxonomy)
        self._check_split_consistency()

    def _check_split_consistency(self) -> None:
        splits_by_area: Dict[str, set] = {}
        for record in self.records:
            if record.split is not Split.UNASSIGNED:
                splits_by_area.setdefault(record.sub_area_id, set()).add(record.split)
        for area, splits in splits_by_area.items():
            if len(splits) > 1:
                raise ManifestError(f"sub-area {area} straddles train and test splits")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def sub_areas(self) -> List[str]:
        return sorted({record.sub_area_id for record in self.records})

    def records_in(self, split: Split) -> List[SampleRecord]:
        return [record for record in self.records if record.split is split]

    def with_records(self, records) -> 'Manifest':
        return Manifest(self.taxonomy, tuple(records), self.schema_version)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "taxonomy": self.taxonomy.mode.value,
            "records": [record.to_dict(self.taxonomy) for record in self.records],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Manifest':
        if not isinstance(data, dict):
            raise ManifestError("manifest must be a JSON object")
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ManifestError(f"unsupported manifest schema_version {version!r}")
        taxonomy = Taxonomy.from_mode(data.get("taxonomy", "four"))
        records = [SampleRecord.from_dict(item, taxonomy) for item in data.get("records", [])]
        return cls(taxonomy, tuple(records), version)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def save_manifest(manifest: Manifest, path: Union[str, Path]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.to_json(), encoding="utf-8")


def load_manifest(path: Union[str, Path]) -> Manifest:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ManifestError(f"cannot read manifest {path}: {e}")
    except json.JSONDecodeError as e:
        raise ManifestError(f"manifest {path} is not valid JSON: {e}")
    return Manifest.from_dict(data)
