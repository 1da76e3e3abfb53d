#!/usr/bin/env python3
"""
Pipeline Errors
Exception hierarchy mapped onto the command-line exit codes
"""


class SeagrassError(Exception):
    """Base error: carries a machine-parseable code and an exit code"""

    code = "E_GENERIC"
    exit_code = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def one_line(self) -> str:
        text = " ".join(str(self.message).split())
        return f"{self.code}: {text}"


class UsageError(SeagrassError):
    code = "E_USAGE"
    exit_code = 2


class DataError(SeagrassError):
    code = "E_DATA"
    exit_code = 3


class NumericError(SeagrassError):
    code = "E_NUMERIC"
    exit_code = 4


class ManifestError(DataError):
    pass


class TilingError(DataError):
    pass


class ShapeError(DataError):
    pass


class TaxonomyMismatchError(DataError):
    pass


class CheckpointError(DataError):
    pass


class CorruptCheckpointError(CheckpointError):
    pass


class CheckpointVersionError(CheckpointError):
    pass


class NonFiniteLossError(NumericError):
    pass


class EmbeddingError(NumericError):
    pass
