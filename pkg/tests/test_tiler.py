"""
Tests for grid tiling and the weakly labelled patch dataset
"""

import json

import numpy as np
import numpy.testing as npt
import pytest

from plugins.core import ImageBuffer, Manifest, Split, save_image
from plugins.ingest import build_manifest
from plugins.tiler import (
    GridSpec, build_patch_dataset, format_counts_table, materialize_patches, tile_cell, tile_image, write_patch_index
)
from plugins.utils import TilingError, UsageError


def test_survey_frame_geometry():
    image = ImageBuffer.filled(4624, 2600)
    full = tile_image(image, GridSpec(5, 8, discard_top=False))
    assert len(full) == 40
    assert all(p.width == 578 and p.height == 520 for _, _, p in full)
    kept = tile_image(image, GridSpec(5, 8, discard_top=True))
    assert len(kept) == 32
    assert kept[0][:2] == (1, 0)


def test_patch_offsets_are_exact(random_image):
    image = random_image(4624 // 8, 2600 // 5 * 2)
    grid = GridSpec(2, 1, discard_top=False)
    (_, _, top), (_, _, bottom) = tile_image(image, grid)
    assert bottom == image.crop(0, 520, 578, 520)
    assert top == image.crop(0, 0, 578, 520)


def test_single_cell_grid_is_identity(random_image):
    image = random_image(578, 520)
    [(row, col, patch)] = tile_image(image, GridSpec(1, 1, discard_top=False))
    assert (row, col) == (0, 0) and patch == image


def test_remainder_strip_is_dropped(random_image):
    image = random_image(100, 100)
    patches = tile_image(image, GridSpec(3, 3, discard_top=False))
    assert len(patches) == 9
    assert all((p.width, p.height) == (33, 33) for _, _, p in patches)
    assert patches[-1][2] == image.crop(66, 66, 33, 33)


def test_tiles_cover_the_crop_once_and_rebuild_it(random_image):
    image = random_image(83, 61)
    grid = GridSpec(5, 8, discard_top=False)
    patch_w, patch_h = grid.patch_size(image.width, image.height)
    coverage = np.zeros((image.height, image.width), dtype=np.int64)
    rebuilt = np.zeros((grid.rows * patch_h, grid.cols * patch_w, 3), dtype=np.uint8)
    for row, col, patch in tile_image(image, grid):
        left, top, right, bottom = grid.cell_box(image.width, image.height, row, col)
        coverage[top:bottom, left:right] += 1
        rebuilt[top:bottom, left:right] = patch.data
        assert patch == tile_cell(image, grid, row, col)
    npt.assert_array_equal(coverage[:grid.rows * patch_h, :grid.cols * patch_w], 1)
    assert coverage[grid.rows * patch_h:].sum() == 0 and coverage[:, grid.cols * patch_w:].sum() == 0
    assert ImageBuffer(rebuilt) == image.crop(0, 0, grid.cols * patch_w, grid.rows * patch_h)


def test_referenced_patches_tile_on_demand(small_synth):
    root, manifest = small_synth
    lazy = build_patch_dataset(manifest, GridSpec(), root)
    eager = build_patch_dataset(manifest, GridSpec(), root, in_memory=True)
    assert all(patch.pixels is None for patch in lazy.patches)
    assert [p.patch_id for p in lazy.patches] == [p.patch_id for p in eager.patches]
    for index in (0, 17, len(lazy) - 1):
        assert lazy.pixels_of(lazy.patches[index]) == eager.patches[index].pixels


def test_undersized_frame_is_rejected_from_its_header(tmp_path, four):
    save_image(ImageBuffer.filled(7, 10), tmp_path / "Ferny" / "a" / "tiny.png")
    with pytest.raises(TilingError):
        build_patch_dataset(build_manifest(tmp_path, four), GridSpec(5, 8), tmp_path)


def test_undersized_image_is_rejected():
    with pytest.raises(TilingError):
        tile_image(ImageBuffer.filled(7, 10), GridSpec(5, 8))


def test_grid_parsing():
    assert GridSpec.parse("10x16").patches_per_image == 144
    with pytest.raises(UsageError):
        GridSpec.parse("5by8")
    with pytest.raises(UsageError):
        GridSpec(1, 4, discard_top=True)


def test_weak_labels_and_counts(small_synth, four):
    root, manifest = small_synth
    dataset = build_patch_dataset(manifest, GridSpec(5, 8), root)
    assert len(dataset) == len(manifest) * 32
    for record in manifest.records:
        labels = {p.label for p in dataset.patches if p.source_path == record.image_path}
        assert labels == {record.class_label}

    counts = dataset.counts()
    for name in four.names:
        for split in (Split.TRAIN, Split.TEST):
            expected = sum(1 for p in dataset.patches
                           if four.name_of(p.label) == name and p.split is split)
            assert counts[name][split.value] == expected
    table = format_counts_table(dataset)
    assert table.splitlines()[-1].split()[-1] == str(len(dataset))


def test_ten_images_give_320_patches(tmp_path, four, random_image):
    for i in range(10):
        save_image(random_image(80, 50), tmp_path / "Ferny" / "a" / f"{i}.png")
    dataset = build_patch_dataset(build_manifest(tmp_path, four), GridSpec(5, 8), tmp_path)
    assert len(dataset) == 320
    assert set(dataset.labels.tolist()) == {1}


def test_empty_manifest_gives_empty_dataset(tmp_path, four):
    dataset = build_patch_dataset(Manifest(four, ()), GridSpec(), tmp_path)
    assert len(dataset) == 0
    assert all(v == 0 for row in dataset.counts().values() for v in row.values())


def test_threaded_tiling_keeps_order(small_synth):
    root, manifest = small_synth
    serial = build_patch_dataset(manifest, GridSpec(), root, threads=1)
    threaded = build_patch_dataset(manifest, GridSpec(), root, threads=4)
    assert [p.patch_id for p in serial.patches] == [p.patch_id for p in threaded.patches]


def test_patch_index_and_materialisation(tmp_path, small_synth):
    root, manifest = small_synth
    dataset = build_patch_dataset(manifest, GridSpec(), root)
    write_patch_index(dataset, tmp_path / "index.jsonl")
    lines = (tmp_path / "index.jsonl").read_text().splitlines()
    assert len(lines) == len(dataset)
    first = json.loads(lines[0])
    assert set(first) == {"source_path", "row", "col", "label", "split"}
    written = materialize_patches(dataset.subset(range(3)), tmp_path / "patches")
    assert len(written) == 3 and all(path.exists() for path in written)
