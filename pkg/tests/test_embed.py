"""
Tests for feature extraction, perplexity calibration and t-SNE
"""

import json

import numpy as np
import numpy.testing as npt
import pytest
from PIL import Image

from plugins.core import ImageBuffer, Split
from plugins.embed import (
    FeatureMatrix, TsneConfig, embedding_kl, extract_features, joint_probabilities, kl_divergence,
    kl_gradient, perplexity_calibrate, plot_embedding, squared_distances, subsample_features, tsne,
    write_embedding
)
from plugins.tiler import LabeledPatch, PatchDataset
from plugins.utils import TaxonomyMismatchError, UsageError


def _entropy_bits(row):
    row = row[row > 0]
    return float(-(row * np.log2(row)).sum())


# =============================================================================
# AFFINITIES
# =============================================================================

def test_calibrated_rows_hit_target_perplexity(rng):
    points = rng.normal(size=(20, 5))
    conditional = perplexity_calibrate(squared_distances(points), 5.0)
    for i, row in enumerate(conditional):
        assert row[i] == 0.0
        assert row.sum() == pytest.approx(1.0)
        assert abs(2.0 ** _entropy_bits(row) - 5.0) < 1e-4


def test_equidistant_neighbours_give_uniform_rows():
    triangle = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    conditional = perplexity_calibrate(squared_distances(triangle), 1.5)
    npt.assert_allclose(conditional, (1 - np.eye(3)) / 2, atol=1e-12)


def test_target_perplexity_out_of_range(rng):
    distances = squared_distances(rng.normal(size=(6, 2)))
    with pytest.raises(UsageError):
        perplexity_calibrate(distances, 5.0)
    with pytest.raises(UsageError):
        perplexity_calibrate(distances, 0.5)


def test_joint_probabilities_are_symmetric_and_normalised(rng):
    P = joint_probabilities(rng.normal(size=(25, 8)), 6.0)
    npt.assert_allclose(P, P.T)
    assert P.sum() == pytest.approx(1.0)
    npt.assert_array_equal(np.diag(P), 0.0)
    assert kl_divergence(P, P) == pytest.approx(0.0, abs=1e-12)


def test_kl_gradient_matches_finite_differences(rng):
    P = joint_probabilities(rng.normal(size=(10, 4)), 3.0)
    Y = rng.normal(size=(10, 2))
    analytic = kl_gradient(P, Y)
    numeric = np.zeros_like(Y)
    h = 1e-6
    for index in np.ndindex(*Y.shape):
        plus, minus = Y.copy(), Y.copy()
        plus[index] += h
        minus[index] -= h
        numeric[index] = (embedding_kl(P, plus) - embedding_kl(P, minus)) / (2 * h)
    relative = np.abs(analytic - numeric) / np.maximum(np.abs(analytic) + np.abs(numeric), 1e-8)
    assert relative.max() < 1e-3


# =============================================================================
# T-SNE
# =============================================================================

def test_two_points_land_apart_and_centred():
    result = tsne(np.array([[0.0, 0.0, 0.0], [1.0, 2.0, 3.0]]), TsneConfig(iterations=50))
    first, second = result.embedding
    assert not np.allclose(first, second)
    npt.assert_allclose(first, -second, atol=1e-12)
    assert result.perplexity == 1.0


def test_identical_rows_embed_at_origin():
    result = tsne(np.ones((5, 7)), TsneConfig(iterations=10))
    npt.assert_array_equal(result.embedding, np.zeros((5, 2)))


def test_fixed_seed_is_reproducible(rng):
    points = rng.normal(size=(15, 6))
    config = TsneConfig(perplexity=4.0, iterations=100, seed=9)
    assert tsne(points, config).embedding.tobytes() == tsne(points, config).embedding.tobytes()


def test_row_permutation_permutes_the_embedding(rng):
    points = rng.normal(size=(30, 6))
    order = rng.permutation(30)
    config = TsneConfig(perplexity=5.0, seed=4)
    base = tsne(points, config)
    shuffled = tsne(points[order], config)
    npt.assert_array_equal(shuffled.embedding, base.embedding[order])
    assert shuffled.final_kl == base.final_kl


def test_three_separated_clusters_stay_apart(rng):
    # centres 10 noise standard deviations apart
    centers = np.eye(3, 512) * (10.0 / np.sqrt(2.0))
    labels = np.repeat(np.arange(3), 50)
    points = centers[labels] + rng.normal(size=(150, 512))
    result = tsne(points, TsneConfig())
    coords = result.embedding
    centroids = np.stack([coords[labels == k].mean(axis=0) for k in range(3)])
    nearest = np.argmin(((coords[:, None, :] - centroids[None]) ** 2).sum(axis=2), axis=1)
    assert (nearest == labels).mean() >= 0.9
    assert result.final_kl < result.initial_kl


def test_large_perplexity_is_clamped(rng):
    result = tsne(rng.normal(size=(10, 3)), TsneConfig(perplexity=30.0, iterations=20))
    assert result.perplexity == 3.0


# =============================================================================
# FEATURES AND OUTPUT FILES
# =============================================================================

def _constant_dataset(taxonomy, colors):
    patches = [LabeledPatch(ImageBuffer.filled(16, 16, color), i % taxonomy.size, 0, i, f"img{i}.png", Split.TEST)
               for i, color in enumerate(colors)]
    return PatchDataset(taxonomy, patches)


def test_feature_rows_per_patch(four, make_checkpoint):
    dataset = _constant_dataset(four, [(10, 20, 30), (200, 100, 0), (10, 20, 30)])
    matrix = extract_features(make_checkpoint(four), dataset)
    assert matrix.rows.shape == (3, 14)
    npt.assert_array_equal(matrix.rows[0], matrix.rows[2])
    assert matrix.ids == [p.patch_id for p in dataset.patches]


def test_zero_model_gives_identical_features(four, make_checkpoint):
    dataset = _constant_dataset(four, [(0, 0, 0), (255, 255, 255), (40, 90, 200)])
    rows = extract_features(make_checkpoint(four, zero=True), dataset).rows
    npt.assert_array_equal(rows, np.zeros_like(rows))


def test_feature_taxonomy_mismatch(four, five, make_checkpoint):
    with pytest.raises(TaxonomyMismatchError):
        extract_features(make_checkpoint(five), _constant_dataset(four, [(1, 2, 3)]))


def test_subsample_keeps_order_and_records_indices(rng):
    matrix = FeatureMatrix(rng.normal(size=(50, 3)), np.arange(50) % 4, [f"p{i}" for i in range(50)])
    picked = subsample_features(matrix, 10, seed=1)
    assert len(picked) == 10
    assert picked.subsample == sorted(picked.subsample)
    assert picked.ids == [f"p{i}" for i in picked.subsample]
    assert subsample_features(matrix, 100, seed=1) is matrix


def test_embedding_files(tmp_path, four, rng):
    labels = np.arange(12) % 4
    matrix = FeatureMatrix(rng.normal(size=(12, 5)), labels, [f"p{i}" for i in range(12)])
    result = tsne(matrix.rows, TsneConfig(perplexity=3.0, iterations=50))
    meta_path = write_embedding(tmp_path / "embed.json", matrix, result, four, {"seed": 0})
    points = json.loads((tmp_path / "embed.json").read_text())
    assert len(points) == 12 and points[1]["label"] == "Ferny"
    assert set(points[0]) == {"id", "label", "x", "y"}
    meta = json.loads(meta_path.read_text())
    assert meta["points"] == 12 and meta["seed"] == 0

    plot = plot_embedding(tmp_path / "embed.png", matrix, result.embedding, four)
    with Image.open(plot) as image:
        assert image.size == (1024, 1024)
