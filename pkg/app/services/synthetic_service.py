"""
Synthetic Service - benchmark datasets with planted ground-truth saliency.

Every instance is a smoothed-noise baseline; instances of class c carry
that class's planted bump on one signal over one interval.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from app.core.file_store import write_text_atomic
from app.core.random import RandomSource
from app.data.models import LabeledDataset, LabeledExample, TimeSeriesInstance
from app.data.store import save_dataset
from app.schemas.dataset import DatasetMeta
from app.schemas.synthetic import GroundTruth, GroundTruthEntry, SyntheticSpec

logger = logging.getLogger(__name__)

GROUND_TRUTH_FILE = "ground_truth.json"


class InvalidSpecError(Exception):
    """Raised when a synthetic spec cannot be used."""
    pass


@dataclass(frozen=True)
class SyntheticBenchmark:
    dataset: LabeledDataset
    ground_truth: GroundTruth


def _smooth(noise: np.ndarray, width: int) -> np.ndarray:
    """Moving average along time, per signal, same length as the input."""
    if width <= 1:
        return noise
    kernel = np.ones(width) / width
    return np.stack(
        [np.convolve(noise[:, s], kernel, mode="same") for s in range(noise.shape[1])],
        axis=1,
    )


def _instance(spec: SyntheticSpec, label: int, instance_id: str, rng: RandomSource) -> TimeSeriesInstance:
    values = np.full((spec.T, spec.V), spec.baseline_level)
    if spec.noise_sigma > 0.0:
        values = values + _smooth(rng.normal(spec.noise_sigma, (spec.T, spec.V)), spec.smoothing)
    planted = spec.planted[label]
    values[planted.start:planted.end + 1, planted.signal] += planted.amplitude
    return TimeSeriesInstance(instance_id, np.clip(values, 0.0, 1.0))


def _labels(n: int, C: int, rng: RandomSource) -> List[int]:
    balanced = [i % C for i in range(n)]
    return [balanced[i] for i in rng.permutation(n)]


def generate_synthetic(spec: SyntheticSpec) -> SyntheticBenchmark:
    """
    Generate a labeled dataset and its ground truth from a spec.

    Raises:
        InvalidSpecError: If the spec's T/V/C cannot describe a dataset.
    """
    if len(spec.planted) != spec.C:
        raise InvalidSpecError("one planted pattern per class is required")
    rng = RandomSource(spec.seed)
    meta = DatasetMeta(
        T=spec.T,
        V=spec.V,
        C=spec.C,
        signal_names=spec.signal_names or [f"signal{s}" for s in range(spec.V)],
        class_names=spec.class_names or [f"class{c}" for c in range(spec.C)],
        signal_groups=spec.signal_groups,
    )

    def split(prefix: str, n: int) -> Tuple[List[LabeledExample], dict]:
        split_rng = rng.child(prefix)
        examples, truth = [], {}
        for i, label in enumerate(_labels(n, spec.C, split_rng)):
            instance_id = f"{prefix}-{i:04d}"
            examples.append(LabeledExample(_instance(spec, label, instance_id, split_rng), label))
            p = spec.planted[label]
            truth[instance_id] = GroundTruthEntry(label=label, signal=p.signal, start=p.start, end=p.end)
        return examples, truth

    train, train_truth = split("train", spec.n_train)
    test, test_truth = split("test", spec.n_test)
    dataset = LabeledDataset(meta=meta, train=train, test=test)
    logger.info("synthetic dataset generated T=%d V=%d C=%d train=%d test=%d seed=%d",
                spec.T, spec.V, spec.C, spec.n_train, spec.n_test, spec.seed)
    return SyntheticBenchmark(dataset, GroundTruth(spec=spec, instances={**train_truth, **test_truth}))


def write_benchmark(benchmark: SyntheticBenchmark, path: Union[str, Path]) -> Path:
    """Dataset directory plus the ground-truth sidecar."""
    directory = save_dataset(benchmark.dataset, path)
    payload = json.dumps(benchmark.ground_truth.model_dump(), indent=2)
    write_text_atomic(directory / GROUND_TRUTH_FILE, payload + "\n")
    return directory


def load_ground_truth(path: Union[str, Path]) -> GroundTruth:
    return GroundTruth.model_validate_json((Path(path) / GROUND_TRUTH_FILE).read_text(encoding="utf-8"))
