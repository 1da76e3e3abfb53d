"""
Tests for evaluation, metrics, training, cross validation and ablations
"""

import numpy as np
import numpy.testing as npt
import pytest

from plugins.core import Density, ImageBuffer, Manifest, SampleRecord, Split
from plugins.nn import Action, checkpoint_save
from plugins.synth import SynthSpec, synth_dataset
from plugins.tiler import GridSpec, LabeledPatch, PatchDataset, build_patch_dataset
from plugins.traineval import (
    DIMENSIONS, ConfusionMatrix, TrainConfig, build_report, cross_validate, density_breakdown, evaluate,
    fit, format_metrics_table, mean_report, metrics, predict_dataset, run_ablation, train, variant_config
)
from plugins.utils import DataError, TaxonomyMismatchError

STEP = 40


class StubModel:
    """Reads the class straight out of the pixel value, optionally remapping it"""

    def __init__(self, taxonomy, mapping=None):
        self.taxonomy = taxonomy
        self.input_size = (4, 4)
        self.mapping = mapping or (lambda labels: labels)

    def predict_proba(self, batch):
        labels = np.rint(batch[:, 0, 0, 0] * 255.0 / STEP).astype(np.int64)
        return np.eye(self.taxonomy.size)[self.mapping(labels)]


class StubFit:
    def __init__(self, classifier):
        self.classifier = classifier


def coded_dataset(taxonomy, labels, sources=None, densities=None):
    patches = []
    for index, label in enumerate(labels):
        value = int(label) * STEP
        source = sources[index] if sources else f"img{index}.png"
        density = densities[index] if densities else Density.NOT_APPLICABLE
        patches.append(LabeledPatch(ImageBuffer.filled(4, 4, (value, value, value)), int(label), 0, 0,
                                    source, Split.TRAIN, "a", density))
    return PatchDataset(taxonomy, patches)


# =============================================================================
# METRICS
# =============================================================================

def test_hand_computed_two_class_metrics():
    report = metrics(ConfusionMatrix(np.array([[8, 2], [1, 9]])))
    npt.assert_allclose(report.precision, [8 / 9, 9 / 11])
    npt.assert_allclose(report.recall, [0.8, 0.9])
    assert report.accuracy == pytest.approx(0.85)


def test_diagonal_and_all_wrong_matrices():
    perfect = metrics(ConfusionMatrix(np.diag([3, 4, 5])))
    assert perfect.precision == [1.0] * 3 and perfect.recall == [1.0] * 3 and perfect.accuracy == 1.0
    wrong = metrics(ConfusionMatrix(np.array([[0, 7], [0, 0]])))
    assert wrong.accuracy == 0.0
    assert wrong.undefined_precision == [True, False]


def test_metrics_match_pair_counting_oracle(rng):
    for _ in range(100):
        classes = int(rng.integers(2, 6))
        n = int(rng.integers(1, 200))
        truth = rng.integers(0, classes, n)
        guess = rng.integers(0, classes, n)
        report = metrics(ConfusionMatrix.from_pairs(truth, guess, classes))
        pairs = list(zip(truth.tolist(), guess.tolist()))
        for k in range(classes):
            predicted_k = sum(1 for _, g in pairs if g == k)
            true_k = sum(1 for t, _ in pairs if t == k)
            hits = sum(1 for t, g in pairs if t == g == k)
            assert report.precision[k] == (hits / predicted_k if predicted_k else 0.0)
            assert report.recall[k] == (hits / true_k if true_k else 0.0)
        assert report.accuracy == sum(1 for t, g in pairs if t == g) / n


def test_empty_matrix_is_a_data_error():
    with pytest.raises(DataError):
        metrics(ConfusionMatrix.empty(4))


# =============================================================================
# EVALUATION
# =============================================================================

def test_oracle_stub_gives_diagonal(four):
    dataset = coded_dataset(four, [0, 1, 2, 3, 3, 2])
    counts = evaluate(StubModel(four), dataset).counts
    npt.assert_array_equal(counts, np.diag([1, 1, 2, 2]))


def test_constant_stub_fills_one_column(four):
    dataset = coded_dataset(four, [0, 1, 2, 3, 1])
    counts = evaluate(StubModel(four, lambda labels: np.full_like(labels, 2)), dataset).counts
    assert counts[:, 2].sum() == 5 and counts[:, [0, 1, 3]].sum() == 0


def test_random_stub_matches_brute_force_recount(five, rng):
    labels = rng.integers(0, 5, 1000)
    scramble = rng.permutation(5)
    dataset = coded_dataset(five, labels)
    counts = evaluate(StubModel(five, lambda ls: scramble[ls]), dataset, batch_size=37, threads=3).counts
    expected = np.zeros((5, 5), dtype=np.int64)
    for label in labels:
        expected[label, scramble[label]] += 1
    npt.assert_array_equal(counts, expected)


def test_evaluation_ignores_patch_order(four, make_checkpoint, rng):
    colours = rng.integers(0, 256, size=(200, 3))
    patches = [LabeledPatch(ImageBuffer.filled(4, 4, tuple(int(c) for c in colour)), i % 4, 0, 0, f"img{i}.png",
                            Split.TEST) for i, colour in enumerate(colours)]
    dataset = PatchDataset(four, patches)
    checkpoint = make_checkpoint(four)
    baseline = evaluate(checkpoint, dataset).counts
    for _ in range(3):
        shuffled = dataset.subset(rng.permutation(len(dataset)))
        npt.assert_array_equal(evaluate(checkpoint, shuffled, batch_size=23).counts, baseline)


def test_taxonomy_mismatch(four, five):
    with pytest.raises(TaxonomyMismatchError):
        predict_dataset(StubModel(five), coded_dataset(four, [0, 1]))


def test_density_breakdown(four):
    dataset = coded_dataset(four, [0, 0, 1, 3], densities=[
        Density.DENSE, Density.SPARSE, Density.DENSE, Density.NOT_APPLICABLE])
    predicted = np.array([0, 1, 1, 3])
    breakdown = density_breakdown(dataset, predicted)
    assert breakdown == {"dense": {"patches": 2, "accuracy": 1.0}, "sparse": {"patches": 1, "accuracy": 0.0}}


def test_report_echoes_config_and_table_layout(four):
    report = metrics(ConfusionMatrix(np.diag([1, 2, 3, 4]), four.names))
    document = build_report([], {"grid": "5x8"}, 7)
    assert document["config"] == {"grid": "5x8"} and document["seed"] == 7
    table = format_metrics_table([("test", report)], four.names)
    assert "Strappy" in table and table.splitlines()[-1].split()[-1] == "1.000"


# =============================================================================
# CROSS VALIDATION
# =============================================================================

def _coded_manifest(taxonomy, count):
    records = tuple(SampleRecord(f"img{i}.png", f"area{i}", 0, None, Density.UNRATED) for i in range(count))
    return Manifest(taxonomy, records)


def test_cross_validation_with_oracle(four, tmp_path):
    manifest = _coded_manifest(four, 4)
    dataset = coded_dataset(four, [0, 1, 2, 3], sources=[r.image_path for r in manifest.records])
    oracle = lambda *args: StubFit(StubModel(four))  # noqa: E731
    result = cross_validate(manifest, TrainConfig(), tmp_path, k=2, dataset=dataset, fit_fn=oracle)
    assert result.folds.fold_sizes() == [2, 2]
    assert len(result.fold_reports) == 2
    assert result.mean.accuracy == 1.0


def test_fold_mean_is_arithmetic_mean(four, tmp_path):
    manifest = _coded_manifest(four, 10)
    labels = [0, 1, 2, 3, 0, 1, 2, 3, 0, 1]
    dataset = coded_dataset(four, labels, sources=[r.image_path for r in manifest.records])
    shaky = lambda *args: StubFit(StubModel(four, lambda ls: np.where(ls == 1, 2, ls)))  # noqa: E731
    result = cross_validate(manifest, TrainConfig(), tmp_path, k=5, dataset=dataset, fit_fn=shaky)
    assert result.mean.accuracy == pytest.approx(np.mean([r.accuracy for r in result.fold_reports]))
    assert mean_report(result.fold_reports).accuracy == result.mean.accuracy


# =============================================================================
# TRAINING
# =============================================================================

def _tiny_config(**changes):
    config = TrainConfig(grid=GridSpec(2, 2, discard_top=False), input_size=(16, 16), batch_size=16,
                         head="two_layer", max_epochs=1, seed=0)
    return config.with_changes(**changes)


def test_single_epoch_history(small_synth):
    root, manifest = small_synth
    checkpoint, history = train(manifest, _tiny_config(), root)
    assert len(history) == 1 and history[0].epoch == 1
    assert checkpoint.metadata["epochs_run"] == 1
    assert checkpoint.taxonomy_mode == "four"


def test_flat_loss_stops_after_fourth_halving_window(small_synth):
    root, manifest = small_synth
    _, history = train(manifest, _tiny_config(initial_lr=0.0, max_epochs=200), root)
    assert len(history) == 50
    assert [r.epoch for r in history if r.action == Action.HALVE.value] == [10, 20, 30, 40]
    assert history[-1].action == Action.STOP.value


def test_training_is_reproducible(small_synth, tmp_path):
    root, manifest = small_synth
    first, _ = train(manifest, _tiny_config(max_epochs=2), root)
    second, _ = train(manifest, _tiny_config(max_epochs=2), root)
    checkpoint_save(first, tmp_path / "first.ckpt")
    checkpoint_save(second, tmp_path / "second.ckpt")
    assert (tmp_path / "first.ckpt").read_bytes() == (tmp_path / "second.ckpt").read_bytes()


def test_tiling_per_batch_matches_tiling_up_front(small_synth):
    root, manifest = small_synth
    grid = GridSpec(2, 2, discard_top=False)
    lazy = build_patch_dataset(manifest, grid, root, splits=[Split.TRAIN])
    eager = build_patch_dataset(manifest, grid, root, splits=[Split.TRAIN], in_memory=True)
    assert all(patch.pixels is None for patch in lazy.patches)
    npt.assert_array_equal(lazy.batch([5, 0, 3], (16, 16)), eager.batch([5, 0, 3], (16, 16)))
    empty = PatchDataset(manifest.taxonomy)
    from_refs = fit(lazy, empty, _tiny_config(max_epochs=2)).checkpoint
    from_pixels = fit(eager, empty, _tiny_config(max_epochs=2)).checkpoint
    for key, value in from_refs.params.items():
        assert value.tobytes() == from_pixels.params[key].tobytes()


def test_short_run_learns_colour_classes(small_synth, four):
    root, manifest = small_synth
    dataset = build_patch_dataset(manifest, GridSpec(2, 2, discard_top=False), root, splits=[Split.TRAIN])
    result = fit(dataset, PatchDataset(four), _tiny_config(head="two_layer_drop", max_epochs=25))
    assert metrics(evaluate(result.classifier, dataset)).accuracy >= 0.75


def test_knn_head_stores_feature_bank(small_synth):
    root, manifest = small_synth
    checkpoint, _ = train(manifest, _tiny_config(head="knn"), root)
    assert checkpoint.knn_features.shape[1] == 512
    assert len(checkpoint.knn_labels) == checkpoint.knn_features.shape[0]


def test_ablation_rows(small_synth):
    root, manifest = small_synth
    rows = run_ablation(manifest, root, _tiny_config(), "augment", seeds=(0, 1), variants=["none", "color"])
    assert [row.variant for row in rows] == ["none", "color"]
    assert all(row.test is not None and len(row.test_accuracy_by_seed) == 2 for row in rows)


def test_backbone_ablation(small_synth):
    root, manifest = small_synth
    assert DIMENSIONS["backbone"] == ("small", "vgg16", "resnet")
    assert variant_config(_tiny_config(), "backbone", "resnet").backbone == "resnet"
    rows = run_ablation(manifest, root, _tiny_config(), "backbone", seeds=(0,), variants=["small", "resnet"])
    assert [row.variant for row in rows] == ["small", "resnet"]
    assert all(sum(row.validation.support) > 0 for row in rows)


@pytest.mark.slow
def test_overfits_separable_synthetic_data(tmp_path, four):
    manifest = synth_dataset(tmp_path, SynthSpec(four, sub_areas=5, images_per_area=1, test_areas=0, seed=1))
    dataset = build_patch_dataset(manifest, GridSpec(5, 8), tmp_path)
    assert len(dataset) >= 640
    config = TrainConfig(input_size=(32, 32), batch_size=32, initial_lr=0.001, max_epochs=200)
    result = fit(dataset, PatchDataset(four), config)
    assert metrics(evaluate(result.classifier, dataset)).accuracy >= 0.99


@pytest.mark.slow
def test_colour_augmentation_generalises_across_sub_areas(tmp_path, four):
    manifest = synth_dataset(tmp_path, SynthSpec(four, sub_areas=16, images_per_area=2, brightness_shift=0.08,
                                                 test_areas=8, seed=5))
    base = TrainConfig(input_size=(32, 32), max_epochs=60)
    rows = run_ablation(manifest, tmp_path, base, "augment", seeds=(0, 1, 2), variants=["none", "color"])
    none, color = rows
    assert color.test.accuracy >= 0.9
    wins = sum(c >= n for c, n in zip(color.test_accuracy_by_seed, none.test_accuracy_by_seed))
    assert wins >= 2


def test_balanced_accuracy_lies_between_recalls(rng):
    for _ in range(20):
        truth = np.repeat(np.arange(4), 25)
        report = metrics(ConfusionMatrix.from_pairs(truth, rng.integers(0, 4, 100), 4))
        assert min(report.recall) <= report.accuracy <= max(report.recall)
        assert report.accuracy == pytest.approx(np.mean(report.recall))
