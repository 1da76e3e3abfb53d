"""
Tests for the shared helpers, validators, errors and logging setup
"""

import logging
import threading
import time

import pytest

from plugins.utils import (
    CorruptCheckpointError, DataError, EmbeddingError, NumericError, SeagrassError, TaxonomyMismatchError,
    UsageError, Validators, chunked, format_duration, format_epoch_line, parse_grid, run_ordered, setup_logger
)


def test_error_codes_and_one_line_messages():
    assert UsageError("x").one_line() == "E_USAGE: x"
    assert DataError("bad\n  path").one_line() == "E_DATA: bad path"
    assert (UsageError.exit_code, DataError.exit_code, NumericError.exit_code) == (2, 3, 4)
    assert issubclass(TaxonomyMismatchError, DataError) and issubclass(CorruptCheckpointError, DataError)
    assert EmbeddingError("e").one_line().startswith("E_NUMERIC:")
    assert SeagrassError.exit_code == 1


def test_parse_grid():
    assert parse_grid("5x8") == (5, 8)
    assert parse_grid(" 10 X 16 ") == (10, 16)
    for text in ("5", "x8", "5x", "five", ""):
        with pytest.raises(ValueError):
            parse_grid(text)


def test_format_duration():
    assert format_duration(42.4) == "42s"
    assert format_duration(120) == "2m"
    assert format_duration(3725) == "1h 2m"


def test_epoch_line_is_key_value():
    assert format_epoch_line(3, "val", 0.5, 0.001, accuracy="0.9000") == \
        "epoch=3 split=val loss=0.500000 lr=0.001000 accuracy=0.9000"


def test_chunked():
    assert [list(c) for c in chunked(list(range(7)), 3)] == [[0, 1, 2], [3, 4, 5], [6]]
    assert list(chunked([], 3)) == []


def test_run_ordered_keeps_submission_order():
    def task(index):
        def run():
            time.sleep(0.01 * (5 - index))
            return index, threading.get_ident()
        return run

    results = run_ordered([task(i) for i in range(5)], max_workers=4)
    assert [index for index, _ in results] == list(range(5))


def test_run_ordered_propagates_the_first_failure():
    def boom():
        raise DataError("first")

    def later():
        raise UsageError("second")

    with pytest.raises(DataError):
        run_ordered([lambda: 1, boom, later], max_workers=3)


def test_validators():
    assert Validators.is_positive_int(3) and not Validators.is_positive_int(True)
    assert not Validators.is_positive_int(0) and not Validators.is_positive_int(2.0)
    assert Validators.is_probability(0.0) and not Validators.is_probability(1.0)
    assert not Validators.is_finite(float("nan")) and not Validators.is_finite("abc")
    assert Validators.is_valid_range((0.1, 0.2)) and not Validators.is_valid_range((0.3, 0.2))
    assert not Validators.is_valid_range(5)
    assert Validators.is_unit_interval_array([0.0, 1.0]) and not Validators.is_unit_interval_array([1.01])
    assert Validators.is_unit_interval_array([])


def test_setup_logger_replaces_only_its_own_handlers(tmp_path):
    name = "seagrass-test"
    foreign = logging.NullHandler()
    logger = logging.getLogger(name)
    logger.addHandler(foreign)
    try:
        setup_logger(name, log_file=str(tmp_path / "logs" / "run.log"))
        setup_logger(name, log_file=str(tmp_path / "logs" / "run.log"), quiet=True)
        assert foreign in logger.handlers
        assert len(logger.handlers) == 3
        logger.info("hello")
        assert "hello" in (tmp_path / "logs" / "run.log").read_text()
    finally:
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
