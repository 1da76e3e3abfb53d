#!/usr/bin/env python3
"""
Class Taxonomy
Four-class and five-class morphotype taxonomies
"""

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from ..utils.errors import ManifestError


class TaxonomyMode(Enum):
    """Taxonomy mode enumeration"""
    FOUR = "four"
    FIVE = "five"


FOUR_CLASS_NAMES = ("Strappy", "Ferny", "Rounded", "Background")
FIVE_CLASS_NAMES = ("Strappy", "Ferny", "Rounded", "Substrate", "Water")
SEAGRASS_NAMES = frozenset({"Strappy", "Ferny", "Rounded"})


@dataclass(frozen=True)
class Taxonomy:
    """Ordered class names for one taxonomy mode"""
    mode: TaxonomyMode

    @classmethod
    def four(cls) -> 'Taxonomy':
        return cls(TaxonomyMode.FOUR)

    @classmethod
    def five(cls) -> 'Taxonomy':
        return cls(TaxonomyMode.FIVE)

    @classmethod
    def from_mode(cls, mode) -> 'Taxonomy':
        """Accepts a TaxonomyMode or its string value"""
        if isinstance(mode, TaxonomyMode):
            return cls(mode)
        try:
            return cls(TaxonomyMode(str(mode).lower()))
        except ValueError:
            raise ManifestError(f"unknown taxonomy mode {mode!r} (expected 'four' or 'five')")

    @property
    def names(self) -> Tuple[str, ...]:
        return FOUR_CLASS_NAMES if self.mode is TaxonomyMode.FOUR else FIVE_CLASS_NAMES

    @property
    def size(self) -> int:
        return len(self.names)

    def __len__(self) -> int:
        return self.size

    def name_of(self, index: int) -> str:
        if not 0 <= index < self.size:
            raise ManifestError(f"class index {index} outside {self.mode.value}-class taxonomy")
        return self.names[index]

    def index_of(self, name: str) -> int:
        """Case-insensitive lookup"""
        lowered = name.lower()
        for index, candidate in enumerate(self.names):
            if candidate.lower() == lowered:
                return index
        raise ManifestError(f"class {name!r} is not part of the {self.mode.value}-class taxonomy")

    def is_seagrass(self, index: int) -> bool:
        return self.name_of(index) in SEAGRASS_NAMES
