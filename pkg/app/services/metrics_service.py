"""
Metrics Service - explanation quality metrics and the distribution analyses.
All functions are pure; dataset-level values are arithmetic means over
explained instances.
"""
from collections import Counter
from typing import Dict, List, Optional, Sequence

from app.core.distance import euclidean_distance, pearson_correlation
from app.data.models import ImportanceMatrix, TimeSeriesInstance
from app.schemas.explanation import Explanation, ExplanationStatus
from app.schemas.report import ScatterPoint, WindowSizeDistribution

SMALL_WINDOW = 5


def precision_metric(y_i_c: float, manipulated_score: float) -> float:
    """Suppression of the winner-class score by the manipulated instance."""
    return max(0.0, y_i_c - manipulated_score)


def informativeness_metric(importance: ImportanceMatrix) -> int:
    """Number of time steps with any nonzero importance (smaller is better)."""
    return importance.nonzero_steps()


def similarity_metric(x_i: TimeSeriesInstance, manipulated: TimeSeriesInstance) -> float:
    """Euclidean distance between the manipulated instance and x_i (smaller is better)."""
    return euclidean_distance(x_i, manipulated)


def mean(values: Sequence[float]) -> float:
    return float(sum(values) / len(values)) if values else 0.0


def _members(explanation: Explanation) -> List[int]:
    members = set(explanation.salient_signals)
    for pair in explanation.salient_pairs:
        members.update(pair)
    return sorted(members)


def salient_signal_histogram(explanations: Sequence[Explanation], V: int) -> List[int]:
    """Per signal, the number of explanations naming it salient (alone or in a pair)."""
    counts = [0] * V
    for explanation in explanations:
        for s in _members(explanation):
            counts[s] += 1
    return counts


def group_histogram(explanations: Sequence[Explanation], signal_groups: Sequence[Sequence[int]]) -> Dict[str, int]:
    """How many explanations have a salient signal in each group or in the non-correlated rest."""
    lookup = {s: f"group{g}" for g, group in enumerate(signal_groups) for s in group}
    counts: Dict[str, int] = {f"group{g}": 0 for g in range(len(signal_groups))}
    counts["non_correlated"] = 0
    for explanation in explanations:
        for key in {lookup.get(s, "non_correlated") for s in _members(explanation)}:
            counts[key] += 1
    return counts


def window_size_distribution(explanations: Sequence[Explanation]) -> WindowSizeDistribution:
    """Histogram of each explained instance's smallest salient window."""
    sizes = [
        e.representative_window() for e in explanations
        if e.status == ExplanationStatus.EXPLAINED and e.subsequences
    ]
    if not sizes:
        return WindowSizeDistribution()
    histogram = dict(sorted(Counter(sizes).items()))
    return WindowSizeDistribution(
        histogram=histogram,
        mean=mean(sizes),
        n=len(sizes),
        small_window_share=sum(1 for s in sizes if s <= SMALL_WINDOW) / len(sizes),
    )


def distance_window_scatter(explanations: Sequence[Explanation]) -> List[ScatterPoint]:
    return [
        ScatterPoint(instance_id=e.instance_id, distance=e.chosen_neighbor.distance,
                     window_size=e.representative_window())
        for e in explanations
        if e.status == ExplanationStatus.EXPLAINED and e.chosen_neighbor is not None and e.subsequences
    ]


def distance_window_correlation(explanations: Sequence[Explanation]) -> float:
    """
    Pearson correlation of chosen-neighbor distance and representative window size.

    Raises:
        UndefinedCorrelationError: When either series has zero variance.
        ValueError: With fewer than two explained instances.
    """
    points = distance_window_scatter(explanations)
    return pearson_correlation([p.distance for p in points], [float(p.window_size) for p in points])


def mean_neighbor_distance(explanations: Sequence[Explanation]) -> Optional[float]:
    distances = [e.chosen_neighbor.distance for e in explanations if e.chosen_neighbor is not None]
    return mean(distances) if distances else None
