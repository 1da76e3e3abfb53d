"""
End-to-end tests for the seagrass command line
"""

import json
from pathlib import Path

import pytest
from PIL import Image

from config import DEFAULT_RUN_CONFIG
from plugins.core import load_manifest
from plugins.nn import checkpoint_load
from plugins.traineval import TrainConfig
from plugins.utils import RunConfig, UsageError
from seagrass import SeagrassCLI

TINY_TRAINING = ["--grid", "2x2", "--input-size", "16", "--head", "two_layer", "--max-epochs", "2",
                 "--batch-size", "8"]


def run(*argv):
    return SeagrassCLI().run([str(arg) for arg in argv])


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """synth -> prepare -> train, shared by the downstream command tests"""
    base = tmp_path_factory.mktemp("cli")
    data = base / "data"
    assert run("synth", "--out", data, "--sub-areas", 3, "--images-per-area", 1, "--width", 64,
               "--height", 40, "--test-areas", 1, "--seed", 4, "--quiet") == 0
    manifest = data / "manifest.json"
    assert run("prepare", "--root", data, "--test-subareas", data / "test_subareas.txt", "--out", manifest,
               "--grid", "2x2", "--quiet") == 0
    ckpt = base / "model.ckpt"
    assert run("train", "--manifest", manifest, "--root", data, "--out", ckpt, "--quiet", *TINY_TRAINING) == 0
    return {"base": base, "data": data, "manifest": manifest, "ckpt": ckpt}


def test_prepare_outputs(workspace):
    manifest = load_manifest(workspace["manifest"])
    assert len(manifest) == 12
    index = workspace["manifest"].with_suffix(".patches.jsonl").read_text().splitlines()
    assert len(index) == 12 * 2


def test_train_outputs(workspace):
    checkpoint = checkpoint_load(workspace["ckpt"])
    assert checkpoint.config["grid"] == "2x2" and checkpoint.config["input_size"] == [16, 16]
    history = json.loads(workspace["ckpt"].with_suffix(".history.json").read_text())
    assert len(history["history"]) == 2
    assert history["config"]["max_epochs"] == 2


def test_eval_report(workspace, capsys):
    report = workspace["base"] / "eval.json"
    code = run("eval", "--manifest", workspace["manifest"], "--root", workspace["data"], "--ckpt", workspace["ckpt"],
               "--split", "test", "--report", report, "--quiet")
    assert code == 0
    assert "Prec." in capsys.readouterr().out
    document = json.loads(report.read_text())
    row = document["rows"][0]
    assert row["name"] == "test" and sum(map(sum, row["confusion"])) == 4 * 2
    assert set(document["density"]) <= {"dense", "medium", "sparse"}
    assert document["checkpoint"] == str(workspace["ckpt"])


def test_eval_excluding_a_class(workspace):
    report = workspace["base"] / "eval_excl.json"
    assert run("eval", "--manifest", workspace["manifest"], "--ckpt", workspace["ckpt"], "--split", "all",
               "--exclude-class", "Background", "--report", report, "--quiet") == 0
    row = json.loads(report.read_text())["rows"][0]
    assert row["support"][3] == 0 and sum(row["support"]) == 9 * 2


def test_embed_outputs(workspace):
    out = workspace["base"] / "embed.json"
    plot = workspace["base"] / "embed.png"
    assert run("embed", "--manifest", workspace["manifest"], "--ckpt", workspace["ckpt"], "--split", "all",
               "--out", out, "--plot", plot, "--perplexity", 3, "--iterations", 50, "--quiet") == 0
    assert len(json.loads(out.read_text())) == 24
    meta = json.loads(out.with_suffix(".meta.json").read_text())
    assert meta["config"]["perplexity"] == 3.0
    with Image.open(plot) as image:
        assert image.size == (1024, 1024)


def test_infer_outputs(workspace):
    frames = workspace["data"] / "Ferny" / "area01"
    out = workspace["base"] / "overlays"
    assert run("infer", "--ckpt", workspace["ckpt"], "--input", frames, "--out", out, "--labels-json",
               "--quiet") == 0
    overlays = sorted(out.glob("*_overlay.png"))
    assert len(overlays) == 1
    labels = json.loads(next(out.glob("*_labels.json")).read_text())
    assert labels["rows"] == 2 and labels["cols"] == 2
    assert not any(cell["skipped"] for cell in labels["cells"])


def test_config_file_is_overridden_by_flags(workspace, tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"max_epochs": 1, "seed": 5}))
    ckpt = tmp_path / "model.ckpt"
    assert run("train", "--manifest", workspace["manifest"], "--out", ckpt, "--config", config,
               "--seed", 9, "--quiet", "--grid", "2x2", "--input-size", "16", "--head", "two_layer") == 0
    history = json.loads(ckpt.with_suffix(".history.json").read_text())
    assert len(history["history"]) == 1
    assert history["seed"] == 9


# =============================================================================
# ERRORS AND EXIT CODES
# =============================================================================

def test_missing_argument_is_a_usage_error(capsys):
    assert run("train", "--quiet") == 2
    assert capsys.readouterr().err.startswith("E_USAGE:")


def test_unknown_command_is_a_usage_error(capsys):
    assert run("paint") == 2
    assert capsys.readouterr().err.startswith("E_USAGE:")


def test_missing_manifest_is_a_data_error(tmp_path, capsys):
    code = run("eval", "--manifest", tmp_path / "none.json", "--ckpt", tmp_path / "none.ckpt", "--quiet")
    assert code == 3
    err = capsys.readouterr().err
    assert err.startswith("E_DATA:") and len(err.strip().splitlines()) == 1


def test_missing_dataset_root_is_a_data_error(tmp_path, capsys):
    assert run("prepare", "--root", tmp_path / "nowhere", "--out", tmp_path / "m.json", "--quiet") == 3
    assert capsys.readouterr().err.startswith("E_DATA:")


def test_unknown_config_key_is_a_usage_error(tmp_path, capsys):
    config = tmp_path / "bad.json"
    config.write_text(json.dumps({"learning_speed": 3}))
    assert run("synth", "--out", tmp_path / "s", "--config", config, "--quiet") == 2
    assert "learning_speed" in capsys.readouterr().err


# =============================================================================
# RUN CONFIG
# =============================================================================

def test_precedence_flag_over_file_over_default(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"batch_size": 4, "seed": 5, "augment_params": {"blur_sigma": [0.0, 0.5]}}))
    resolved = RunConfig.resolve(DEFAULT_RUN_CONFIG, path, {"seed": 9, "head": None})
    assert resolved["batch_size"] == 4 and resolved.seed == 9
    assert resolved["head"] == DEFAULT_RUN_CONFIG["head"]
    assert resolved.overridden() == {"augment_params": "file", "batch_size": "file", "seed": "flag"}
    assert resolved["augment_params"]["blur_sigma"] == [0.0, 0.5]


def test_config_file_must_be_an_object(tmp_path):
    path = tmp_path / "run.json"
    path.write_text("[1, 2]")
    with pytest.raises(UsageError):
        RunConfig.resolve(DEFAULT_RUN_CONFIG, path)


@pytest.mark.parametrize("name", ["desk_scale.json", "full_scale.json"])
def test_shipped_run_configs_resolve(name):
    path = Path(__file__).resolve().parent.parent / "configs" / name
    resolved = RunConfig.resolve(DEFAULT_RUN_CONFIG, path)
    config = TrainConfig.from_dict(resolved.to_dict())
    assert config.augment.kind.value == "color"
