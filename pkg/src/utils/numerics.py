"""
Numeric helpers shared by the physics, synthesis and evaluation layers.
"""

from __future__ import annotations

import numpy as np
from scipy import linalg

from src.core.exceptions import DegenerateChannelError


def sigma_max(matrix: np.ndarray) -> float:
    """Largest singular value (spectral norm)."""
    matrix = np.atleast_2d(np.asarray(matrix))
    if matrix.size == 0:
        return 0.0
    return float(linalg.svdvals(matrix)[0])


def dominant_right_singular(matrix: np.ndarray) -> tuple[float, np.ndarray]:
    """
    Dominant singular value and right singular vector.

    Args:
        matrix: Complex matrix (rows x cols)

    Returns:
        (sigma_max, v) with ||v|| = 1 and ||matrix @ v|| = sigma_max

    Raises:
        DegenerateChannelError: If the matrix is all-zero or not finite
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if not np.all(np.isfinite(matrix)):
        raise DegenerateChannelError("non-finite matrix")
    if not np.any(matrix):
        raise DegenerateChannelError("matrix")
    _, s, vh = linalg.svd(matrix, full_matrices=False)
    return float(s[0]), vh[0].conj()


def unit(vector: np.ndarray) -> np.ndarray:
    """Scale a nonzero vector to unit Euclidean norm."""
    vector = np.asarray(vector, dtype=complex)
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        raise DegenerateChannelError("vector")
    return vector / norm


def trial_seed(seed: int, *keys: int) -> int:
    """
    Derive an independent 32-bit seed for one Monte Carlo draw.

    The mapping is deterministic in (seed, keys) and does not depend on
    execution order, so trials can run in any process.
    """
    return int(np.random.SeedSequence([int(seed), *map(int, keys)]).generate_state(1)[0])


def db_to_linear(value_db: float | np.ndarray) -> float | np.ndarray:
    """Power ratio from decibels."""
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)
