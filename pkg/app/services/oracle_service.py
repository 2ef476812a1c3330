"""
Oracle Service - the black-box classifier abstraction.
Every probability vector coming back from a model passes through
`check_probabilities` before the explainer sees it.
"""
from abc import ABC, abstractmethod
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from app.core.distance import distances_to
from app.data.models import LabeledExample, TimeSeriesInstance

SIMPLEX_TOLERANCE = 1e-6


class OracleError(Exception):
    """Base exception for oracle errors."""
    pass


class OracleResponseError(OracleError):
    """Raised when a model returns something other than a probability vector."""
    pass


class EmptyClassError(OracleError):
    """Raised when a class has no training instances."""
    pass


class PredictionOracle(ABC):
    """A black-box classifier queried only through class probabilities."""

    n_classes: int

    @abstractmethod
    def predict(self, instance: TimeSeriesInstance) -> np.ndarray:
        """Probability vector of length C for one instance."""

    def predict_batch(self, instances: Sequence[TimeSeriesInstance]) -> np.ndarray:
        """Probabilities for several instances, shape (N, C)."""
        if not instances:
            return np.zeros((0, self.n_classes))
        return np.stack([self.predict(instance) for instance in instances])

    def close(self) -> None:
        pass

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def check_probabilities(probs, n_classes: int, instance_id: str = "?") -> np.ndarray:
    """
    Validate a probability vector.

    Raises:
        OracleResponseError: On wrong length, entries outside [0, 1] or a sum away from 1.
    """
    vector = np.asarray(probs, dtype=np.float64)
    if vector.ndim != 1 or vector.shape[0] != n_classes:
        raise OracleResponseError(
            f"instance {instance_id}: expected {n_classes} probabilities, got shape {vector.shape}"
        )
    if not np.all(np.isfinite(vector)) or vector.min() < 0.0 or vector.max() > 1.0:
        raise OracleResponseError(f"instance {instance_id}: probabilities outside [0, 1]")
    if abs(float(vector.sum()) - 1.0) > SIMPLEX_TOLERANCE:
        raise OracleResponseError(f"instance {instance_id}: probabilities sum to {vector.sum()}, not 1")
    return vector


def winner_scores(oracle: PredictionOracle, instances: Sequence[TimeSeriesInstance], c: int) -> np.ndarray:
    """Winner-class score of each instance, every response checked."""
    batch = np.asarray(oracle.predict_batch(instances), dtype=np.float64)
    if batch.shape[0] != len(instances):
        raise OracleResponseError(f"batch of {len(instances)} answered with {batch.shape[0]} vectors")
    for instance, row in zip(instances, batch):
        check_probabilities(row, oracle.n_classes, instance.id)
    return batch[:, c] if len(instances) else np.zeros(0)


def predict_winner(oracle: PredictionOracle, x: TimeSeriesInstance) -> Tuple[int, float]:
    """
    Winner class and its probability; ties go to the lowest class index.
    """
    probs = check_probabilities(oracle.predict(x), oracle.n_classes, x.id)
    c = int(np.argmax(probs))
    return c, float(probs[c])


class CentroidClassifier(PredictionOracle):
    """Softmax over negative Euclidean distances to per-class mean instances."""

    def __init__(self, centroids: np.ndarray, temperature: float):
        if temperature <= 0:
            raise ValueError("temperature must be positive")
        self.centroids = np.array(centroids, dtype=np.float64)
        self.centroids.flags.writeable = False
        self.temperature = float(temperature)
        self.n_classes = self.centroids.shape[0]

    def predict(self, instance: TimeSeriesInstance) -> np.ndarray:
        logits = -self.temperature * distances_to(instance, self.centroids)
        logits -= logits.max()
        weights = np.exp(logits)
        return weights / weights.sum()

    def __repr__(self):
        return f"<CentroidClassifier(C={self.n_classes}, temperature={self.temperature})>"


def fit_centroid_classifier(
    train: Sequence[LabeledExample],
    temperature: float,
    n_classes: Optional[int] = None,
) -> CentroidClassifier:
    """
    Fit one centroid per class as the element-wise mean of its instances.

    Raises:
        EmptyClassError: If a class has no training instance.
    """
    if not train:
        raise EmptyClassError("no training instances")
    if n_classes is None:
        n_classes = max(example.label for example in train) + 1
    centroids = []
    for c in range(n_classes):
        members = [example.instance.values for example in train if example.label == c]
        if not members:
            raise EmptyClassError(f"class {c} has no training instances")
        centroids.append(np.mean(np.stack(members), axis=0))
    return CentroidClassifier(np.stack(centroids), temperature)


class FunctionOracle(PredictionOracle):
    """Wraps an in-process callable `fn(values[T, V]) -> probs[C]`."""

    def __init__(self, fn: Callable[[np.ndarray], Sequence[float]], n_classes: int):
        self.fn = fn
        self.n_classes = n_classes

    def predict(self, instance: TimeSeriesInstance) -> np.ndarray:
        return np.asarray(self.fn(instance.values), dtype=np.float64)


class EchoModel(PredictionOracle):
    """
    Reference model with one class per signal: probabilities are the
    per-signal means normalized to sum to one. For T = 1 it returns the
    row it was given (when that row already sums to one).
    """

    def __init__(self, V: int):
        self.n_classes = V

    def predict(self, instance: TimeSeriesInstance) -> np.ndarray:
        means = instance.values.mean(axis=0)
        total = means.sum()
        if total <= 0.0:
            return np.full(self.n_classes, 1.0 / self.n_classes)
        return means / total
