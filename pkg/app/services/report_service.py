"""
Report Service - quality tables, histograms and correlation for a run.
"""
import logging
from typing import List, Optional, Sequence

from app.core.distance import UndefinedCorrelationError
from app.data.models import ImportanceMatrix, LabeledDataset
from app.schemas.config import OcclusionConfig
from app.schemas.explanation import Explanation, ExplanationStatus
from app.schemas.report import InstanceQuality, QualityReport, ReportBundle
from app.services.metrics_service import (
    distance_window_correlation,
    distance_window_scatter,
    group_histogram,
    informativeness_metric,
    mean,
    mean_neighbor_distance,
    precision_metric,
    salient_signal_histogram,
    similarity_metric,
    window_size_distribution,
)
from app.services.occlusion_service import occlusion_explain
from app.services.oracle_service import PredictionOracle, predict_winner
from app.services.sset_service import reconstruct_manipulated

logger = logging.getLogger(__name__)

SSET_NAME = "SSET"
OCCLUSION_NAME = "Occlusion"


class ReportError(Exception):
    """Raised when explanations cannot be reported together."""
    pass


def _aggregate(explainer: str, rows: List[InstanceQuality]) -> QualityReport:
    explained = [r for r in rows if r.explained]
    return QualityReport(
        explainer=explainer,
        precision=mean([r.precision for r in explained]),
        precision_pessimistic=mean([r.precision for r in rows]),
        informativeness=mean([r.informativeness for r in explained]),
        similarity=mean([r.similarity for r in explained if r.similarity is not None]),
        n_explained=len(explained),
        n_failed=len(rows) - len(explained),
        rows=rows,
    )


def sset_quality(explanations: Sequence[Explanation], dataset: LabeledDataset) -> QualityReport:
    rows = []
    for explanation in explanations:
        best = explanation.best_subsequence()
        if explanation.status != ExplanationStatus.EXPLAINED or best is None:
            rows.append(InstanceQuality(instance_id=explanation.instance_id, explained=False,
                                        precision=0.0, informativeness=0))
            continue
        x_i = dataset.get(explanation.instance_id).instance
        manipulated = reconstruct_manipulated(explanation, dataset)
        rows.append(InstanceQuality(
            instance_id=explanation.instance_id,
            explained=True,
            precision=precision_metric(explanation.y_i_c, best.y_m_c),
            informativeness=informativeness_metric(ImportanceMatrix(explanation.importance)),
            similarity=similarity_metric(x_i, manipulated),
        ))
    return _aggregate(SSET_NAME, rows)


def occlusion_quality(
    instance_ids: Sequence[str],
    dataset: LabeledDataset,
    oracle: PredictionOracle,
    config: OcclusionConfig,
) -> QualityReport:
    rows = []
    for instance_id in instance_ids:
        x_i = dataset.get(instance_id).instance
        c, _ = predict_winner(oracle, x_i)
        result = occlusion_explain(x_i, oracle, c, dataset.train, config)
        if result.best_manipulated is None:
            rows.append(InstanceQuality(instance_id=instance_id, explained=False, precision=0.0, informativeness=0))
            continue
        rows.append(InstanceQuality(
            instance_id=instance_id,
            explained=True,
            precision=precision_metric(result.y_i_c, result.best_score),
            informativeness=informativeness_metric(result.importance),
            similarity=similarity_metric(x_i, result.best_manipulated),
        ))
    return _aggregate(OCCLUSION_NAME, rows)


def check_shapes(explanations: Sequence[Explanation], dataset: LabeledDataset) -> None:
    """
    Raises:
        ReportError: If there is nothing to report or shapes disagree with the dataset.
    """
    if not explanations:
        raise ReportError("no explanations to report")
    expected = (dataset.meta.T, dataset.meta.V)
    for explanation in explanations:
        if (explanation.T, explanation.V) != expected:
            raise ReportError(
                f"mixed dataset shapes: {explanation.instance_id} is {explanation.T}x{explanation.V}, "
                f"dataset is {expected[0]}x{expected[1]}"
            )


def build_report(
    explanations: Sequence[Explanation],
    dataset: LabeledDataset,
    dataset_label: str,
    baseline_oracle: Optional[PredictionOracle] = None,
    occlusion_config: Optional[OcclusionConfig] = None,
) -> ReportBundle:
    """
    Assemble quality rows, histograms and the distance/window correlation.
    The occlusion row is added when a baseline oracle is given.
    """
    check_shapes(explanations, dataset)
    meta = dataset.meta
    quality = [sset_quality(explanations, dataset)]
    if baseline_oracle is not None:
        ids = [e.instance_id for e in explanations]
        quality.append(occlusion_quality(ids, dataset, baseline_oracle, occlusion_config or OcclusionConfig()))

    correlation, note = None, None
    try:
        correlation = distance_window_correlation(explanations)
    except UndefinedCorrelationError as e:
        note = str(e)
    except ValueError as e:
        note = f"undefined correlation: {e}"

    counts = salient_signal_histogram(explanations, meta.V)
    bundle = ReportBundle(
        dataset=dataset_label,
        n_instances=len(explanations),
        quality=quality,
        signal_histogram={meta.signal_names[s]: counts[s] for s in range(meta.V)},
        group_histogram=group_histogram(explanations, meta.signal_groups),
        window_sizes=window_size_distribution(explanations),
        distance_window_correlation=correlation,
        correlation_note=note,
        mean_neighbor_distance=mean_neighbor_distance(explanations),
        scatter=distance_window_scatter(explanations),
    )
    logger.info("report built instances=%d explainers=%d", len(explanations), len(quality))
    return bundle


def render_markdown(bundle: ReportBundle) -> str:
    lines = [
        f"# Explanation quality: {bundle.dataset}",
        "",
        "| Explainer | Precision | Informativeness | Similarity |",
        "|---|---|---|---|",
    ]
    for q in bundle.quality:
        lines.append(f"| {q.explainer} | {q.precision:.3f} | {q.informativeness:.2f} | {q.similarity:.3f} |")
    lines += ["", "| Explainer | Explained | Failed | Precision (failures as 0) |", "|---|---|---|---|"]
    for q in bundle.quality:
        lines.append(f"| {q.explainer} | {q.n_explained} | {q.n_failed} | {q.precision_pessimistic:.3f} |")

    lines += ["", "## Salient signals", "", "| Signal | Count |", "|---|---|"]
    lines += [f"| {name} | {count} |" for name, count in bundle.signal_histogram.items()]
    lines += ["", "| Signal group | Count |", "|---|---|"]
    lines += [f"| {name} | {count} |" for name, count in bundle.group_histogram.items()]

    ws = bundle.window_sizes
    lines += ["", "## Window sizes", "", "| Window size | Count |", "|---|---|"]
    lines += [f"| {size} | {count} |" for size, count in ws.histogram.items()]
    if ws.mean is not None:
        lines += ["", f"Mean window size: {ws.mean:.2f}; share with window <= 5: {ws.small_window_share:.2f}"]

    lines += ["", "## Neighbor distance vs window size", ""]
    if bundle.distance_window_correlation is not None:
        lines.append(f"Pearson correlation: {bundle.distance_window_correlation:.3f}")
    else:
        lines.append(f"Pearson correlation: n/a ({bundle.correlation_note})")
    if bundle.mean_neighbor_distance is not None:
        lines.append(f"Mean chosen-neighbor distance: {bundle.mean_neighbor_distance:.3f}")
    return "\n".join(lines) + "\n"
