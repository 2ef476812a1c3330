"""Builders shared by the test modules."""
import sys
from pathlib import Path
from typing import List, Sequence

import numpy as np

from app.data.models import LabeledDataset, LabeledExample, TimeSeriesInstance
from app.schemas.dataset import DatasetMeta
from app.schemas.explanation import Explanation, ExplanationStatus, NeighborRef, SalientSubsequence
from app.services.oracle_service import FunctionOracle

ROOT = Path(__file__).resolve().parents[1]
SERVE_MODEL = ROOT / "scripts" / "serve_model.py"


def instance(instance_id: str, values) -> TimeSeriesInstance:
    return TimeSeriesInstance(instance_id, np.asarray(values, dtype=float))


def make_dataset(train: Sequence[tuple], test: Sequence[tuple] = (), C: int = 2, signal_groups=None) -> LabeledDataset:
    """train/test: sequences of (id, values, label)."""
    first = np.asarray((train or test)[0][1], dtype=float)
    T, V = first.shape
    meta = DatasetMeta(
        T=T, V=V, C=C,
        signal_names=[f"sig{s}" for s in range(V)],
        class_names=[f"cls{c}" for c in range(C)],
        signal_groups=signal_groups or [],
    )
    return LabeledDataset(
        meta=meta,
        train=[LabeledExample(instance(i, v), label) for i, v, label in train],
        test=[LabeledExample(instance(i, v), label) for i, v, label in test],
    )


def constant_oracle(probs: Sequence[float]) -> FunctionOracle:
    fixed = np.asarray(probs, dtype=float)
    return FunctionOracle(lambda values: fixed, len(fixed))


def and_oracle(columns=(0, 1), low: float = 0.9, dropped: float = 0.2) -> FunctionOracle:
    """Class 0 keeps probability `low` unless every listed column has mean > 0.5."""
    def fn(values: np.ndarray) -> List[float]:
        if all(values[:, c].mean() > 0.5 for c in columns):
            return [dropped, 1.0 - dropped]
        return [low, 1.0 - low]
    return FunctionOracle(fn, 2)


def make_subsequence(signals, t_prime, t_lo, t_hi, y_m_c=0.2, y_i_c=0.9, ctx=1, neighbor_id="n0"):
    return SalientSubsequence(
        signals=list(signals), t_prime=t_prime, t_lo=t_lo, t_hi=t_hi,
        window_size=t_hi - t_lo + 1, ctx=ctx, y_m_c=y_m_c, drop=y_i_c - y_m_c, neighbor_id=neighbor_id,
    )


def make_explanation(
    instance_id: str,
    T: int,
    V: int,
    subsequences=(),
    salient_signals=(),
    salient_pairs=(),
    distance: float = 1.0,
    y_i_c: float = 0.9,
    importance=None,
) -> Explanation:
    if importance is None:
        importance = np.zeros((T, V))
        for sub in subsequences:
            for s in sub.signals:
                importance[sub.t_lo:sub.t_hi + 1, s] = 0.5
    importance = np.asarray(importance, dtype=float)
    status = ExplanationStatus.EXPLAINED if importance.any() else ExplanationStatus.NO_SALIENT_SIGNAL
    return Explanation(
        instance_id=instance_id,
        winner_class=0,
        y_i_c=y_i_c,
        status=status,
        salient_signals=list(salient_signals),
        salient_pairs=list(salient_pairs),
        dual_signals=bool(salient_pairs),
        subsequences=list(subsequences),
        chosen_neighbor=NeighborRef(id="n0", distance=distance) if subsequences else None,
        importance=importance.tolist(),
    )


def python_command(*args: str) -> List[str]:
    return [sys.executable, *args]
