#!/usr/bin/env python3
"""
t-SNE
Exact O(n^2) t-SNE: perplexity calibration, KL gradient descent with momentum and early exaggeration
"""

import logging
import math
import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform

from ..augment.rng import Rng
from ..utils.errors import EmbeddingError, UsageError

logger = logging.getLogger(__name__)

PERPLEXITY_TOLERANCE = 1e-4
MAX_BISECTION_STEPS = 200


@dataclass(frozen=True)
class TsneConfig:
    perplexity: float = 30.0
    iterations: int = 1000
    learning_rate: float = 200.0
    exaggeration: float = 12.0
    exaggeration_iterations: int = 250
    initial_momentum: float = 0.5
    final_momentum: float = 0.8
    momentum_switch: int = 250
    min_gain: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise UsageError("t-SNE needs at least one iteration")
        if not self.perplexity > 0:
            raise UsageError("perplexity must be positive")
        if not self.learning_rate > 0:
            raise UsageError("learning rate must be positive")


@dataclass
class TsneResult:
    embedding: np.ndarray
    initial_kl: float
    final_kl: float
    perplexity: float


def squared_distances(points: np.ndarray) -> np.ndarray:
    return squareform(pdist(np.asarray(points, dtype=np.float64), metric="sqeuclidean"))


def _row_distribution(distances: np.ndarray, beta: float):
    shifted = distances - distances.min()
    weights = np.exp(-shifted * beta)
    probs = weights / weights.sum()
    nonzero = probs[probs > 0]
    entropy = float(-(nonzero * np.log2(nonzero)).sum())
    return probs, entropy


def perplexity_calibrate(distances: np.ndarray, target_perplexity: float) -> np.ndarray:
    """Conditional p(j|i) per row with 2^H within tolerance of the target.

    distances holds squared distances (n, n). Rows whose neighbours are all
    equidistant are uniform whatever the bandwidth and skip the search.
    """
    distances = np.asarray(distances, dtype=np.float64)
    n = distances.shape[0]
    if distances.shape != (n, n) or n < 2:
        raise UsageError("perplexity calibration needs an (n, n) distance matrix with n >= 2")
    if not 1.0 <= target_perplexity or (n > 2 and not target_perplexity < n - 1):
        raise UsageError(f"target perplexity {target_perplexity} must lie in [1, {n - 1})")

    conditional = np.zeros((n, n))
    for i in range(n):
        others = np.concatenate([np.arange(i), np.arange(i + 1, n)])
        row = distances[i, others]
        spread = row.max() - row.min()
        if n == 2 or spread <= 1e-12 * max(1.0, abs(row.max())):
            conditional[i, others] = 1.0 / (n - 1)
            continue

        beta, low, high = 1.0, 0.0, math.inf
        for _ in range(MAX_BISECTION_STEPS):
            probs, entropy = _row_distribution(row, beta)
            gap = 2.0 ** entropy - target_perplexity
            if abs(gap) < PERPLEXITY_TOLERANCE:
                break
            if gap > 0:
                low = beta
                beta = beta * 2.0 if math.isinf(high) else (beta + high) / 2.0
            else:
                high = beta
                beta = (beta + low) / 2.0
        else:
            raise EmbeddingError(f"perplexity search did not converge for point {i}")
        conditional[i, others] = probs
    return conditional


def joint_probabilities(points: np.ndarray, perplexity: float) -> np.ndarray:
    conditional = perplexity_calibrate(squared_distances(points), perplexity)
    n = conditional.shape[0]
    return (conditional + conditional.T) / (2.0 * n)


def _student_kernel(embedding: np.ndarray) -> np.ndarray:
    kernel = 1.0 / (1.0 + squared_distances(embedding))
    np.fill_diagonal(kernel, 0.0)
    return kernel


def low_dim_affinities(embedding: np.ndarray) -> np.ndarray:
    kernel = _student_kernel(embedding)
    return kernel / kernel.sum()


def kl_divergence(P: np.ndarray, Q: np.ndarray) -> float:
    """KL(P || Q) over entries with P > 0"""
    mask = P > 0
    return float((P[mask] * np.log(P[mask] / np.maximum(Q[mask], 1e-300))).sum())


def embedding_kl(P: np.ndarray, embedding: np.ndarray) -> float:
    return kl_divergence(P, low_dim_affinities(embedding))


def kl_gradient(P: np.ndarray, embedding: np.ndarray) -> np.ndarray:
    """d KL(P || Q) / d y_i = 4 sum_j (p_ij - q_ij)(y_i - y_j)(1 + |y_i - y_j|^2)^-1"""
    kernel = _student_kernel(embedding)
    Q = kernel / kernel.sum()
    weights = (P - Q) * kernel
    return 4.0 * (weights.sum(axis=1)[:, None] * embedding - weights @ embedding)


def _initial_embedding(points: np.ndarray, seed: int) -> np.ndarray:
    """N(0, 1e-4^2) start, each row's draw keyed by the row's content"""
    base = Rng(seed).child("tsne-init")
    return np.stack([
        base.child(zlib.crc32(np.ascontiguousarray(row).tobytes())).generator.normal(0.0, 1e-4, 2)
        for row in points
    ])


def effective_perplexity(perplexity: float, n: int) -> float:
    return min(perplexity, max(1.0, (n - 1) / 3.0))


def tsne(points: np.ndarray, config: Optional[TsneConfig] = None) -> TsneResult:
    config = config or TsneConfig()
    points = np.asarray(points, dtype=np.float64)
    n = points.shape[0]
    if points.ndim != 2 or n < 2:
        raise UsageError("t-SNE needs a 2-D feature matrix with at least two rows")

    if np.all(points == points[0]):
        logger.warning("⚠️ All feature rows are identical; returning an all-zero embedding")
        return TsneResult(np.zeros((n, 2)), 0.0, 0.0, config.perplexity)

    perplexity = effective_perplexity(config.perplexity, n)
    if perplexity != config.perplexity:
        logger.warning(f"⚠️ Perplexity {config.perplexity} too large for {n} points; using {perplexity:g}")

    # Optimised in lexicographic row order, scattered back to input order at the end
    order = np.lexsort(points.T[::-1])
    points = points[order]

    P = np.maximum(joint_probabilities(points, perplexity), 0.0)
    Y = _initial_embedding(points, config.seed)
    Y -= Y.mean(axis=0)
    initial_kl = embedding_kl(P, Y)

    update = np.zeros_like(Y)
    gains = np.ones_like(Y)
    for iteration in range(config.iterations):
        exaggeration = config.exaggeration if iteration < config.exaggeration_iterations else 1.0
        momentum = config.initial_momentum if iteration < config.momentum_switch else config.final_momentum
        grad = kl_gradient(P * exaggeration, Y)
        same_sign = (grad > 0) == (update > 0)
        gains = np.where(same_sign, gains * 0.8, gains + 0.2)
        gains = np.maximum(gains, config.min_gain)
        update = momentum * update - config.learning_rate * gains * grad
        Y = Y + update
        Y -= Y.mean(axis=0)
        if (iteration + 1) % 100 == 0:
            logger.debug(f"t-SNE iteration {iteration + 1}: KL {embedding_kl(P, Y):.6f}")

    final_kl = embedding_kl(P, Y)
    logger.info(f"✅ t-SNE on {n} points: KL {initial_kl:.4f} -> {final_kl:.4f}")
    embedding = np.empty_like(Y)
    embedding[order] = Y
    return TsneResult(embedding, initial_kl, final_kl, perplexity)
