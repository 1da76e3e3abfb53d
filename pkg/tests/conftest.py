"""
Shared fixtures and the --runslow switch
"""

from pathlib import Path

import numpy as np
import pytest

from plugins.augment import Rng
from plugins.core import ImageBuffer, Taxonomy
from plugins.nn import AdamState, Checkpoint, SchedulerState, build_model_spec, init_parameters
from plugins.synth import SynthSpec, synth_dataset


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the long acceptance experiments")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def four():
    return Taxonomy.four()


@pytest.fixture
def five():
    return Taxonomy.five()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_image(rng):
    def make(width: int, height: int) -> ImageBuffer:
        return ImageBuffer(rng.integers(0, 256, (height, width, 3), dtype=np.uint8))
    return make


@pytest.fixture
def small_synth(tmp_path: Path, four):
    """4 classes x 4 sub-areas x 2 images of 64x40, one test sub-area"""
    root = tmp_path / "synth"
    spec = SynthSpec(four, sub_areas=4, images_per_area=2, width=64, height=40, test_areas=1, seed=3)
    manifest = synth_dataset(root, spec)
    return root, manifest


@pytest.fixture
def make_checkpoint():
    """Untrained checkpoint factory; zero=True gives uniform outputs and all-zero features"""
    def make(taxonomy: Taxonomy, input_size: int = 16, zero: bool = False, seed: int = 2) -> Checkpoint:
        spec = build_model_spec(taxonomy.size, (input_size, input_size, 3), head="two_layer")
        params = init_parameters(spec, Rng(seed))
        if zero:
            params = {key: np.zeros_like(value) for key, value in params.items()}
        adam = AdamState.for_parameters(params, 0.001)
        config = {"grid": "5x8", "discard_top": True, "head": "two_layer", "input_size": [input_size, input_size]}
        return Checkpoint(spec, params, adam, SchedulerState.start(0.001), taxonomy.mode.value, seed, config)
    return make
