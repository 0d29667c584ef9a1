"""Random draws shared by the test modules."""

import numpy as np


def complex_normal(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Circular complex Gaussian samples with unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_unit(rng: np.random.Generator, size: int) -> np.ndarray:
    vector = complex_normal(rng, size)
    return vector / np.linalg.norm(vector)


def random_contraction(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Random matrix with sigma_max drawn uniformly in [0.05, 1)."""
    matrix = complex_normal(rng, rows, cols)
    return matrix / np.linalg.svd(matrix, compute_uv=False)[0] * rng.uniform(0.05, 1.0)
