"""
Run Service - explanation runs over many instances.

A run writes its manifest first, then one explanation (JSON + CSV) per
instance. Each instance gets a random source derived from the run seed and
its id, so output does not depend on the number of workers.
"""
import logging
import queue
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Sequence, Union

from app import __version__
from app.core.config import get_settings
from app.core.file_store import ensure_directory, write_text_atomic
from app.core.random import RandomSource
from app.data.models import LabeledDataset
from app.schemas.config import SsetConfig
from app.schemas.explanation import ExplanationErrorRecord, ExplanationStatus
from app.schemas.manifest import OracleSpec, RunManifest
from app.services.explanation_store import save_error, save_explanation
from app.services.oracle_service import OracleError, PredictionOracle, fit_centroid_classifier
from app.services.sset_service import SsetError, SsetExplainer
from app.services.subprocess_oracle import SubprocessOracle, parse_command

logger = logging.getLogger(__name__)

MANIFEST_FILE = "manifest.json"


class RunError(Exception):
    """Base exception for run errors."""
    pass


class SelectionError(RunError):
    """Raised when the instance selection cannot be satisfied."""
    pass


class RunAbortedError(RunError):
    """Raised when an oracle failure stops the run."""

    def __init__(self, instance_id: str, cause: Exception):
        self.instance_id = instance_id
        self.cause = cause
        super().__init__(f"run aborted at instance {instance_id}: {cause}")


@dataclass
class RunSummary:
    output_dir: Path
    statuses: Counter = field(default_factory=Counter)
    errors: List[ExplanationErrorRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def parse_oracle(value: str, temperature: Optional[float] = None) -> OracleSpec:
    """`builtin` or `cmd:"..."` -> OracleSpec."""
    if value == "builtin":
        return OracleSpec(kind="builtin", temperature=temperature or get_settings().CENTROID_TEMPERATURE)
    if value.startswith("cmd:"):
        return OracleSpec(kind="cmd", command=parse_command(value))
    raise RunError(f"unknown oracle '{value}': expected builtin or cmd:\"...\"")


def oracle_factory(spec: OracleSpec, dataset: LabeledDataset) -> Callable[[], PredictionOracle]:
    meta = dataset.meta
    if spec.kind == "builtin":
        model = fit_centroid_classifier(dataset.train, spec.temperature, meta.C)
        return lambda: model
    return lambda: SubprocessOracle(spec.command, meta.T, meta.V)


class OraclePool:
    """
    Oracles leased to workers. A builtin oracle is immutable and shared;
    subprocess oracles are exclusive, one per worker.
    """

    def __init__(self, factory: Callable[[], PredictionOracle], size: int, shared: bool):
        self.shared = shared
        self._oracles: List[PredictionOracle] = []
        self._idle: "queue.Queue[PredictionOracle]" = queue.Queue()
        try:
            for _ in range(1 if shared else size):
                oracle = factory()
                self._oracles.append(oracle)
                self._idle.put(oracle)
        except Exception:
            self.close_quietly()
            raise

    @contextmanager
    def lease(self) -> Iterator[PredictionOracle]:
        if self.shared:
            yield self._oracles[0]
            return
        oracle = self._idle.get()
        try:
            yield oracle
        finally:
            self._idle.put(oracle)

    def close(self) -> None:
        errors = []
        for oracle in self._oracles:
            try:
                oracle.close()
            except OracleError as e:
                errors.append(e)
        self._oracles = []
        if errors:
            raise errors[0]

    def close_quietly(self) -> None:
        """Close while another error is propagating; close failures are only logged."""
        try:
            self.close()
        except OracleError as e:
            logger.warning("oracle close failed during abort: %s", e)


@contextmanager
def open_oracle(spec: OracleSpec, dataset: LabeledDataset) -> Iterator[PredictionOracle]:
    pool = OraclePool(oracle_factory(spec, dataset), 1, spec.kind == "builtin")
    try:
        with pool.lease() as oracle:
            yield oracle
    except BaseException:
        pool.close_quietly()
        raise
    pool.close()


def select_instances(
    dataset: LabeledDataset,
    ids: Optional[Sequence[str]],
    sample: Optional[int],
    rng: RandomSource,
) -> List[str]:
    """
    Explicit ids (validated against the dataset), or a uniform sample of the
    test split without replacement.

    Raises:
        SelectionError: On unknown ids, both or neither selector, or a negative sample.
    """
    if (ids is None) == (sample is None):
        raise SelectionError("select instances with exactly one of --ids or --sample")
    if ids is not None:
        for instance_id in ids:
            try:
                dataset.get(instance_id)
            except KeyError:
                raise SelectionError(f"unknown instance id {instance_id}") from None
        return list(ids)
    if sample < 0:
        raise SelectionError("--sample must be >= 0")
    test_ids = dataset.test_ids()
    if sample > len(test_ids):
        logger.warning("sample of %d exceeds the test split, using all %d instances", sample, len(test_ids))
    return [test_ids[i] for i in rng.sample_indices(len(test_ids), sample)]


def write_manifest(manifest: RunManifest, directory: Union[str, Path]) -> Path:
    return write_text_atomic(Path(directory) / MANIFEST_FILE, manifest.model_dump_json(indent=2, by_alias=True) + "\n")


def load_manifest(directory: Union[str, Path]) -> RunManifest:
    return RunManifest.model_validate_json((Path(directory) / MANIFEST_FILE).read_text(encoding="utf-8"))


def run_explain(
    dataset: LabeledDataset,
    dataset_path: str,
    oracle_spec: OracleSpec,
    config: SsetConfig,
    instance_ids: Sequence[str],
    selection: str,
    seed: int,
    out_dir: Union[str, Path],
    jobs: int = 1,
) -> RunSummary:
    """
    Explain the selected instances and write one file pair per instance.

    Raises:
        RunAbortedError: When the oracle fails; names the failing instance.
    """
    if jobs < 1:
        raise RunError("--jobs must be >= 1")
    directory = ensure_directory(out_dir)
    manifest = RunManifest(
        tool_version=__version__,
        dataset=dataset_path,
        oracle=oracle_spec,
        config=config,
        seed=seed,
        instance_ids=list(instance_ids),
        selection=selection,
        output_dir=str(out_dir),
        jobs=jobs,
    )
    write_manifest(manifest, directory)
    summary = RunSummary(output_dir=directory)
    if not instance_ids:
        logger.info("no instances selected, nothing to explain")
        return summary

    rng = RandomSource(seed)
    pool = OraclePool(oracle_factory(oracle_spec, dataset), jobs, oracle_spec.kind == "builtin")
    logger.info("run started instances=%d jobs=%d oracle=%s", len(instance_ids), jobs, oracle_spec.describe())

    def work(instance_id: str) -> ExplanationStatus:
        x_i = dataset.get(instance_id).instance
        with pool.lease() as oracle:
            explanation = SsetExplainer(dataset, oracle, config).explain(x_i, rng.child(instance_id))
        save_explanation(explanation, directory)
        logger.info("instance explained id=%s status=%s", instance_id, explanation.status.value)
        return explanation.status

    executor = ThreadPoolExecutor(max_workers=jobs)
    try:
        futures = [(instance_id, executor.submit(work, instance_id)) for instance_id in instance_ids]
        for instance_id, future in futures:
            try:
                summary.statuses[future.result().value] += 1
            except OracleError as e:
                record = ExplanationErrorRecord(instance_id=instance_id, error=type(e).__name__, message=str(e))
                save_error(record, directory)
                summary.errors.append(record)
                logger.error("run aborted id=%s error=%s", instance_id, e)
                raise RunAbortedError(instance_id, e) from e
            except (SsetError, ValueError, KeyError) as e:
                record = ExplanationErrorRecord(instance_id=instance_id, error=type(e).__name__, message=str(e))
                save_error(record, directory)
                summary.errors.append(record)
                logger.warning("instance failed id=%s error=%s", instance_id, e)
    except BaseException:
        executor.shutdown(wait=True, cancel_futures=True)
        pool.close_quietly()
        raise
    executor.shutdown(wait=True)
    pool.close()
    logger.info("run finished statuses=%s errors=%d", dict(summary.statuses), len(summary.errors))
    return summary
