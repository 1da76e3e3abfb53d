#!/usr/bin/env python3
"""
Seagrass Patch Classifier Configuration
Environment-driven defaults for every command
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# =============================================================================
# LOGGING CONFIGURATION
# =============================================================================

LOG_LEVEL = os.getenv("SEAGRASS_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("SEAGRASS_LOG_FILE") or None

# =============================================================================
# RUNTIME CONFIGURATION
# =============================================================================

# Worker budget; 1 keeps every run bitwise reproducible
THREADS = int(os.getenv("SEAGRASS_THREADS", "1"))
SEED = int(os.getenv("SEAGRASS_SEED", "0"))

# =============================================================================
# TILING CONFIGURATION
# =============================================================================

GRID = "5x8"
DISCARD_TOP = True
INFER_SKIP_TOP = False

# =============================================================================
# TRAINING CONFIGURATION
# =============================================================================

INPUT_SIZE = int(os.getenv("SEAGRASS_INPUT_SIZE", "224"))
BATCH_SIZE = int(os.getenv("SEAGRASS_BATCH_SIZE", "32"))
INITIAL_LR = float(os.getenv("SEAGRASS_INITIAL_LR", "0.001"))
MAX_EPOCHS = int(os.getenv("SEAGRASS_MAX_EPOCHS", "200"))
PATIENCE = 10
MAX_HALVINGS = 4
IMPROVEMENT_THRESHOLD = 1e-4
BACKBONE = "small"
HEAD = "two_layer_drop"
AUGMENT = "none"
KNN_K = 3
VAL_FOLDS = 5
CV_FOLDS = 5

# =============================================================================
# EMBEDDING CONFIGURATION
# =============================================================================

TSNE_PERPLEXITY = 30.0
TSNE_ITERATIONS = 1000
TSNE_LEARNING_RATE = 200.0
TSNE_MAX_POINTS = 5000

# =============================================================================
# OVERLAY CONFIGURATION
# =============================================================================

OVERLAY_ALPHA = 0.35

# =============================================================================
# SYNTHETIC DATA CONFIGURATION
# =============================================================================

SYNTH_SUB_AREAS = 10
SYNTH_IMAGES_PER_AREA = 5
SYNTH_WIDTH = 320
SYNTH_HEIGHT = 200
SYNTH_TEST_AREAS = 2

# =============================================================================
# RUN CONFIG DEFAULTS
# =============================================================================

DEFAULT_RUN_CONFIG = {
    "taxonomy": "four",
    "grid": GRID,
    "discard_top": DISCARD_TOP,
    "augment": AUGMENT,
    "augment_params": {},
    "batch_size": BATCH_SIZE,
    "initial_lr": INITIAL_LR,
    "max_epochs": MAX_EPOCHS,
    "seed": SEED,
    "head": HEAD,
    "backbone": BACKBONE,
    "input_size": [INPUT_SIZE, INPUT_SIZE],
    "patience": PATIENCE,
    "max_halvings": MAX_HALVINGS,
    "improvement_threshold": IMPROVEMENT_THRESHOLD,
    "knn_k": KNN_K,
    "val_folds": VAL_FOLDS,
    "threads": THREADS,
    "perplexity": TSNE_PERPLEXITY,
    "iterations": TSNE_ITERATIONS,
    "tsne_learning_rate": TSNE_LEARNING_RATE,
    "max_points": TSNE_MAX_POINTS,
    "alpha": OVERLAY_ALPHA,
}

# =============================================================================
# VALIDATION FUNCTIONS
# =============================================================================

def validate_config():
    """Validate all configuration settings"""
    errors = []

    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        errors.append(f"SEAGRASS_LOG_LEVEL {LOG_LEVEL!r} is not a logging level")

    if THREADS < 1:
        errors.append("SEAGRASS_THREADS must be at least 1")

    if SEED < 0:
        errors.append("SEAGRASS_SEED must be non-negative")

    if INPUT_SIZE < 1:
        errors.append("SEAGRASS_INPUT_SIZE must be positive")

    if BATCH_SIZE < 1:
        errors.append("SEAGRASS_BATCH_SIZE must be at least 1")

    if INITIAL_LR < 0:
        errors.append("SEAGRASS_INITIAL_LR must be non-negative")

    if MAX_EPOCHS < 1:
        errors.append("SEAGRASS_MAX_EPOCHS must be at least 1")

    if errors:
        raise ValueError(f"Configuration errors: {', '.join(errors)}")

    return True
