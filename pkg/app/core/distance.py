"""
Distance and correlation primitives.
"""
import math
from typing import Sequence

import numpy as np


class ShapeMismatchError(ValueError):
    """Raised when two instances do not share T and V."""
    pass


class UndefinedCorrelationError(ValueError):
    """Raised when a correlation is requested for a zero-variance series."""
    pass


def _values(item) -> np.ndarray:
    return item.values if hasattr(item, "values") else np.asarray(item, dtype=float)


def euclidean_distance(a, b) -> float:
    """
    Euclidean distance over the full flattened T×V matrix.

    Args:
        a: TimeSeriesInstance (or array) of shape (T, V).
        b: TimeSeriesInstance (or array) of the same shape.

    Returns:
        sqrt of the sum of squared element-wise differences.

    Raises:
        ShapeMismatchError: If the shapes differ.
    """
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        raise ShapeMismatchError(f"shape mismatch: {va.shape} vs {vb.shape}")
    return float(np.sqrt(np.sum((va - vb) ** 2)))


def distances_to(x, stacked: np.ndarray) -> np.ndarray:
    """Distances from one (T, V) instance to each of N stacked instances (N, T, V)."""
    vx = _values(x)
    if stacked.ndim != 3 or stacked.shape[1:] != vx.shape:
        raise ShapeMismatchError(f"shape mismatch: {vx.shape} vs {stacked.shape[1:]}")
    return np.sqrt(np.sum((stacked - vx) ** 2, axis=(1, 2)))


def pearson_correlation(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Sample Pearson correlation coefficient.

    Raises:
        ValueError: On length mismatch or fewer than two points.
        UndefinedCorrelationError: If either series has zero variance.
    """
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("at least two points are required")
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("undefined correlation: zero variance")
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))
