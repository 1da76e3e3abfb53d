#!/usr/bin/env python3
"""
Manifest Builder
Scans root/<class>/<sub_area>/<image> trees into manifests
"""

import logging
import re
from datetime import date
from pathlib import Path
from typing import Optional, Tuple, Union

from PIL import Image, UnidentifiedImageError

from ..core.images import is_image_file
from ..core.models import Density, Manifest, SampleRecord
from ..core.taxonomy import Taxonomy
from ..utils.errors import DataError, ManifestError

logger = logging.getLogger(__name__)

_DATE_PATTERN = re.compile(r'^(\d{4})(\d{2})(\d{2})(?:_|$)')
_DENSITY_TOKENS = {"dense": Density.DENSE, "medium": Density.MEDIUM, "sparse": Density.SPARSE}


def parse_stem(stem: str) -> Tuple[Optional[date], Optional[Density]]:
    """Optional leading YYYYMMDD date and a dense|medium|sparse token"""
    collection_date = None
    match = _DATE_PATTERN.match(stem)
    if match:
        try:
            collection_date = date(int(match.group(1)), int(match.group(2)), int(match.group(3)))
        except ValueError:
            collection_date = None
    density = None
    for token in re.split(r'[_\-. ]+', stem.lower()):
        if token in _DENSITY_TOKENS:
            density = _DENSITY_TOKENS[token]
            break
    return collection_date, density


def _verify_image(path: Path) -> None:
    try:
        with Image.open(path) as img:
            img.verify()
    except (OSError, UnidentifiedImageError) as e:
        raise DataError(f"unreadable image {path}: {e}")


def build_manifest(root: Union[str, Path], taxonomy: Taxonomy, verify_images: bool = True) -> Manifest:
    """One record per image, ordered lexicographically by relative path"""
    root = Path(root)
    if not root.is_dir():
        raise ManifestError(f"dataset root {root} does not exist")

    records = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        try:
            label = taxonomy.index_of(class_dir.name)
        except ManifestError:
            raise ManifestError(
                f"unknown class directory {class_dir.name!r} for the {taxonomy.mode.value}-class taxonomy"
            )
        seagrass = taxonomy.is_seagrass(label)
        for area_dir in sorted(p for p in class_dir.iterdir() if p.is_dir()):
            for image_path in sorted(p for p in area_dir.iterdir() if p.is_file() and is_image_file(p)):
                if verify_images:
                    _verify_image(image_path)
                collection_date, density = parse_stem(image_path.stem)
                if seagrass:
                    density = density or Density.UNRATED
                else:
                    density = Density.NOT_APPLICABLE
                records.append(SampleRecord(
                    image_path=image_path.relative_to(root).as_posix(),
                    sub_area_id=area_dir.name,
                    class_label=label,
                    collection_date=collection_date,
                    density=density,
                ))

    records.sort(key=lambda record: record.image_path)
    manifest = Manifest(taxonomy, tuple(records))
    logger.info(f"✅ Manifest built: {len(manifest)} images across {len(manifest.sub_areas)} sub-areas")
    return manifest
