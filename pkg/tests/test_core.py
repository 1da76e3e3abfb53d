"""
Tests for images, tensors, taxonomy and the manifest model
"""

from datetime import date

import numpy as np
import numpy.testing as npt
import pytest

from plugins.core import (
    Density, ImageBuffer, Manifest, SampleRecord, Split, image_to_tensor, load_image,
    load_manifest, resize_bilinear, save_image, save_manifest, tensor_to_image
)
from plugins.utils import DataError, ManifestError


def test_taxonomy_orders(four, five):
    assert four.names == ("Strappy", "Ferny", "Rounded", "Background")
    assert five.names == ("Strappy", "Ferny", "Rounded", "Substrate", "Water")
    assert four.index_of("rounded") == 2
    assert five.is_seagrass(1) and not five.is_seagrass(4)
    with pytest.raises(ManifestError):
        four.index_of("Water")


def test_image_buffer_is_read_only(random_image):
    image = random_image(8, 6)
    assert (image.width, image.height, image.channels) == (8, 6, 3)
    with pytest.raises(ValueError):
        image.data[0, 0, 0] = 1


def test_resize_constant_image_stays_constant():
    image = ImageBuffer.filled(13, 7, (100, 100, 100))
    out = resize_bilinear(image, 5, 11)
    assert out.shape == (11, 5, 3)
    npt.assert_allclose(out, 100.0)


def test_resize_identity_is_exact(random_image):
    image = random_image(9, 4)
    out = resize_bilinear(image, 9, 4)
    npt.assert_array_equal(out, image.data.astype(np.float64))


def test_resize_checkerboard_to_single_pixel():
    data = np.zeros((2, 2, 3), dtype=np.uint8)
    data[0, 0] = data[1, 1] = 0
    data[0, 1] = data[1, 0] = 255
    out = resize_bilinear(ImageBuffer(data), 1, 1)
    npt.assert_allclose(out[0, 0], 127.5)


def test_image_to_tensor_scales_to_unit_range(random_image):
    image = random_image(10, 10)
    tensor = image_to_tensor(image, (10, 10))
    assert tensor.dtype == np.float32
    assert 0.0 <= tensor.min() and tensor.max() <= 1.0
    assert tensor_to_image(tensor) == image


def test_png_round_trip(tmp_path, random_image):
    image = random_image(12, 5)
    save_image(image, tmp_path / "a.png")
    assert load_image(tmp_path / "a.png") == image


def test_load_rejects_non_images(tmp_path):
    path = tmp_path / "junk.png"
    path.write_bytes(b"not a png")
    with pytest.raises(DataError):
        load_image(path)


def _record(path, area, label, split=Split.UNASSIGNED, density=Density.UNRATED):
    return SampleRecord(path, area, label, date(2019, 3, 1), density, split)


def test_manifest_rejects_straddling_sub_area(four):
    records = (
        _record("Strappy/a/1.png", "a", 0, Split.TRAIN),
        _record("Strappy/a/2.png", "a", 0, Split.TEST),
    )
    with pytest.raises(ManifestError):
        Manifest(four, records)


def test_manifest_rejects_density_on_non_seagrass(four):
    with pytest.raises(ManifestError):
        Manifest(four, (_record("Background/a/1.png", "a", 3, density=Density.DENSE),))


def test_manifest_json_round_trip(tmp_path, four):
    manifest = Manifest(four, (
        _record("Ferny/b/1.png", "b", 1, Split.TRAIN, Density.SPARSE),
        _record("Background/c/1.png", "c", 3, Split.TEST, Density.NOT_APPLICABLE),
    ))
    save_manifest(manifest, tmp_path / "m.json")
    loaded = load_manifest(tmp_path / "m.json")
    assert loaded == manifest
    document = manifest.to_dict()
    assert document["schema_version"] == 1
    assert document["taxonomy"] == "four"
    assert document["records"][0]["label"] == "Ferny"
    assert document["records"][0]["date"] == "2019-03-01"
