"""
Occlusion Service - per-cell occlusion baseline explainer.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from app.data.models import ImportanceMatrix, LabeledExample, TimeSeriesInstance, stack_values
from app.schemas.config import OcclusionConfig, Replacement
from app.services.oracle_service import PredictionOracle, winner_scores
from app.services.sset_service import window_bounds


class OcclusionError(Exception):
    """Base exception for occlusion baseline errors."""
    pass


@dataclass(frozen=True)
class OcclusionResult:
    importance: ImportanceMatrix
    best_manipulated: Optional[TimeSeriesInstance]
    best_score: Optional[float]
    y_i_c: float


def replacement_values(x_i: TimeSeriesInstance, train: Sequence[LabeledExample], config: OcclusionConfig) -> np.ndarray:
    if config.replacement == Replacement.ZERO:
        return np.zeros_like(x_i.values)
    if not train:
        raise OcclusionError("TrainMean replacement needs training instances")
    return np.mean(stack_values(e.instance for e in train), axis=0)


def occlusion_explain(
    x_i: TimeSeriesInstance,
    oracle: PredictionOracle,
    c: int,
    train: Sequence[LabeledExample],
    config: OcclusionConfig,
) -> OcclusionResult:
    """
    Occlude the clipped window around every (t', s) and record the drop at class c.

    Returns:
        Importance max(0, y_i^c - score) clipped to [0, 1] per cell, plus the
        single occlusion with the largest drop (None when nothing dropped).
    """
    T, V = x_i.values.shape
    if config.window_size > T:
        raise OcclusionError(f"window_size {config.window_size} exceeds T={T}")
    fill = TimeSeriesInstance(f"{x_i.id}|fill", replacement_values(x_i, train, config))
    half = config.window_size // 2

    cells = [(t, s) for t in range(T) for s in range(V)]
    manipulated = []
    for t, s in cells:
        lo, hi = window_bounds(t, half, T)
        manipulated.append(x_i.with_cells(f"{x_i.id}|occlude[{t},{s}]", fill, (s,), lo, hi))

    y_i_c = float(winner_scores(oracle, [x_i], c)[0])
    scores = winner_scores(oracle, manipulated, c)
    drops = np.clip(y_i_c - scores, 0.0, 1.0)

    importance = np.zeros((T, V))
    for (t, s), drop in zip(cells, drops):
        importance[t, s] = drop

    best = int(np.argmax(drops))
    if drops[best] <= 0.0:
        return OcclusionResult(ImportanceMatrix(importance), None, None, y_i_c)
    return OcclusionResult(ImportanceMatrix(importance), manipulated[best], float(scores[best]), y_i_c)
