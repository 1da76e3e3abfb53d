#!/usr/bin/env python3
"""
Validators Utility
Range and format checks shared by configs, specs and the CLI
"""

import math
from typing import Any, Union

import numpy as np


class Validators:
    """Static predicates; callers decide which error to raise"""

    @staticmethod
    def is_positive_int(value: Any) -> bool:
        """True for ints (not bools) >= 1"""
        return isinstance(value, int) and not isinstance(value, bool) and value >= 1

    @staticmethod
    def is_probability(value: Union[int, float]) -> bool:
        """Dropout-style probability in [0, 1)"""
        try:
            return 0.0 <= float(value) < 1.0
        except (ValueError, TypeError):
            return False

    @staticmethod
    def is_finite(value: Union[int, float]) -> bool:
        try:
            return math.isfinite(float(value))
        except (ValueError, TypeError):
            return False

    @staticmethod
    def is_valid_range(bounds: Any) -> bool:
        """(low, high) pair of finite numbers with low <= high"""
        try:
            low, high = bounds
            return Validators.is_finite(low) and Validators.is_finite(high) and float(low) <= float(high)
        except (ValueError, TypeError):
            return False

    @staticmethod
    def is_unit_interval_array(values) -> bool:
        """Every element within [0, 1]; empty arrays pass"""
        arr = np.asarray(values)
        if arr.size == 0:
            return True
        return bool(np.all(np.isfinite(arr)) and arr.min() >= 0.0 and arr.max() <= 1.0)
