#!/usr/bin/env python3
"""
Grid Tiling
Divides frames into row-major grids of equal patches
"""

from dataclasses import dataclass
from typing import List, Tuple

from ..core.images import ImageBuffer
from ..utils.errors import TilingError, UsageError
from ..utils.helpers import parse_grid


@dataclass(frozen=True)
class GridSpec:
    """rows x cols grid, optionally dropping the top row"""
    rows: int = 5
    cols: int = 8
    discard_top: bool = True

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise UsageError(f"grid needs at least one row and column, got {self.rows}x{self.cols}")
        if self.discard_top and self.rows < 2:
            raise UsageError("discarding the top row needs at least two rows")

    @classmethod
    def parse(cls, text: str, discard_top: bool = True) -> 'GridSpec':
        try:
            rows, cols = parse_grid(text)
        except ValueError as e:
            raise UsageError(str(e))
        return cls(rows, cols, discard_top)

    @property
    def first_row(self) -> int:
        return 1 if self.discard_top else 0

    @property
    def patches_per_image(self) -> int:
        return self.rows * self.cols - (self.cols if self.discard_top else 0)

    def patch_size(self, width: int, height: int) -> Tuple[int, int]:
        """(patch width, patch height) for a frame"""
        return width // self.cols, height // self.rows

    def cells(self) -> List[Tuple[int, int]]:
        return [(row, col) for row in range(self.first_row, self.rows) for col in range(self.cols)]

    def cell_box(self, width: int, height: int, row: int, col: int) -> Tuple[int, int, int, int]:
        """(left, top, right, bottom), right/bottom exclusive"""
        patch_w, patch_h = self.patch_size(width, height)
        return col * patch_w, row * patch_h, (col + 1) * patch_w, (row + 1) * patch_h

    def label(self) -> str:
        return f"{self.rows}x{self.cols}"


def check_fits(width: int, height: int, grid: GridSpec) -> None:
    if width < grid.cols or height < grid.rows:
        raise TilingError(f"{width}x{height} image is smaller than the {grid.rows}x{grid.cols} grid")


def tile_cell(image: ImageBuffer, grid: GridSpec, row: int, col: int) -> ImageBuffer:
    """One grid cell of a frame"""
    check_fits(image.width, image.height, grid)
    left, top, right, bottom = grid.cell_box(image.width, image.height, row, col)
    return image.crop(left, top, right - left, bottom - top)


def tile_image(image: ImageBuffer, grid: GridSpec) -> List[Tuple[int, int, ImageBuffer]]:
    """(row, col, patch) triples in row-major order; remainder pixels dropped"""
    check_fits(image.width, image.height, grid)
    return [(row, col, tile_cell(image, grid, row, col)) for row, col in grid.cells()]
