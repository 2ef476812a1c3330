"""
Dataset store - reads and writes the dataset directory format.

    meta.json   DatasetMeta
    train.csv   instance_id,label,t,s0,...,s{V-1}   (T rows per instance)
    test.csv    same layout
"""
import json
import logging
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from app.core.file_store import ensure_directory, write_text_atomic
from app.data.models import LabeledDataset, LabeledExample, TimeSeriesInstance
from app.schemas.dataset import DatasetMeta

logger = logging.getLogger(__name__)

META_FILE = "meta.json"
SPLIT_FILES = ("train.csv", "test.csv")


class DatasetError(Exception):
    """Base exception for dataset loading errors; carries file, line and field."""

    def __init__(self, message: str, file: Optional[str] = None, line: Optional[int] = None, field: Optional[str] = None):
        self.message = message
        self.file = file
        self.line = line
        self.field = field
        location = ", ".join(
            part for part in (
                f"file {file}" if file else None,
                f"line {line}" if line is not None else None,
                f"field {field}" if field else None,
            ) if part
        )
        super().__init__(f"{message} ({location})" if location else message)


class MissingFileError(DatasetError):
    """Raised when a dataset file is absent."""
    pass


class MalformedRowError(DatasetError):
    """Raised when a row cannot be parsed."""
    pass


class ValueOutOfRangeError(DatasetError):
    """Raised when a signal value lies outside [0, 1]."""
    pass


class InconsistentShapeError(DatasetError):
    """Raised when an instance does not have exactly T ordered rows of V values."""
    pass


class LabelOutOfRangeError(DatasetError):
    """Raised when a label is not a valid class index."""
    pass


class DuplicateInstanceError(DatasetError):
    """Raised when an instance id occurs in more than one place."""
    pass


def _header(V: int) -> List[str]:
    return ["instance_id", "label", "t"] + [f"s{s}" for s in range(V)]


def _load_meta(directory: Path) -> DatasetMeta:
    path = directory / META_FILE
    if not path.is_file():
        raise MissingFileError("missing file", file=META_FILE)
    try:
        return DatasetMeta.model_validate_json(path.read_text(encoding="utf-8"))
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or None
        raise MalformedRowError(f"invalid metadata: {first['msg']}", file=META_FILE, field=field) from e


def _parse_int(raw: str, file: str, line: int, field: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise MalformedRowError(f"malformed row: '{raw}' is not an integer", file=file, line=line, field=field) from None


def _load_split(directory: Path, filename: str, meta: DatasetMeta) -> List[LabeledExample]:
    path = directory / filename
    if not path.is_file():
        raise MissingFileError("missing file", file=filename)

    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as e:
        raise MalformedRowError(f"malformed row: {e}", file=filename) from e
    except pd.errors.EmptyDataError:
        raise MalformedRowError("malformed row: file is empty", file=filename) from None

    expected = _header(meta.V)
    if list(frame.columns) != expected:
        raise MalformedRowError(
            f"malformed header: expected {','.join(expected)}", file=filename, line=1, field="header"
        )

    value_columns = expected[3:]
    examples: List[LabeledExample] = []
    rows: List[List[float]] = []
    current_id: Optional[str] = None
    current_label: Optional[int] = None
    seen = set()

    def flush(line: int) -> None:
        if current_id is None:
            return
        if len(rows) != meta.T:
            raise InconsistentShapeError(
                f"instance {current_id} has {len(rows)} rows, expected T={meta.T}",
                file=filename, line=line, field="t",
            )
        examples.append(LabeledExample(TimeSeriesInstance(current_id, np.array(rows)), current_label))

    # header is line 1, first data row is line 2
    for offset, record in enumerate(frame.itertuples(index=False, name=None)):
        line = offset + 2
        for name, raw in zip(expected, record):
            if not isinstance(raw, str):
                raise MalformedRowError("malformed row: missing field", file=filename, line=line, field=name)
        instance_id, raw_label, raw_t = record[0], record[1], record[2]
        if not instance_id:
            raise MalformedRowError("malformed row: empty instance_id", file=filename, line=line, field="instance_id")
        label = _parse_int(raw_label, filename, line, "label")
        t = _parse_int(raw_t, filename, line, "t")

        if instance_id != current_id:
            flush(line)
            if instance_id in seen:
                raise DuplicateInstanceError(
                    f"instance {instance_id} is not contiguous or repeated", file=filename, line=line, field="instance_id"
                )
            seen.add(instance_id)
            if not 0 <= label < meta.C:
                raise LabelOutOfRangeError(
                    f"label {label} out of range 0..{meta.C - 1}", file=filename, line=line, field="label"
                )
            current_id, current_label, rows = instance_id, label, []
        elif label != current_label:
            raise MalformedRowError(
                f"label changes within instance {instance_id}", file=filename, line=line, field="label"
            )

        if t != len(rows):
            raise InconsistentShapeError(
                f"expected t={len(rows)} for instance {instance_id}, got {t}", file=filename, line=line, field="t"
            )

        values = []
        for name, raw in zip(value_columns, record[3:]):
            try:
                value = float(raw)
            except ValueError:
                raise MalformedRowError(
                    f"malformed row: '{raw}' is not a number", file=filename, line=line, field=name
                ) from None
            if not 0.0 <= value <= 1.0:
                raise ValueOutOfRangeError(
                    f"value out of range: {raw} not in [0,1]", file=filename, line=line, field=name
                )
            values.append(value)
        rows.append(values)

    flush(len(frame) + 2)
    return examples


def load_dataset(path: Union[str, Path]) -> LabeledDataset:
    """
    Load and validate a dataset directory.

    Raises:
        DatasetError: Subclass naming the file, line and field of the first problem.
    """
    directory = Path(path)
    meta = _load_meta(directory)
    train = _load_split(directory, SPLIT_FILES[0], meta)
    test = _load_split(directory, SPLIT_FILES[1], meta)

    train_ids = {example.instance.id for example in train}
    for example in test:
        if example.instance.id in train_ids:
            raise DuplicateInstanceError(
                f"instance {example.instance.id} appears in both splits", file=SPLIT_FILES[1], field="instance_id"
            )

    dataset = LabeledDataset(meta=meta, train=train, test=test)
    logger.debug("dataset loaded path=%s T=%d V=%d C=%d train=%d test=%d",
                 directory, meta.T, meta.V, meta.C, len(train), len(test))
    return dataset


def _split_frame(examples, V: int) -> pd.DataFrame:
    records = []
    for example in examples:
        inst = example.instance
        for t in range(inst.T):
            records.append([inst.id, example.label, t] + [float(v) for v in inst.values[t]])
    return pd.DataFrame.from_records(records, columns=_header(V))


def save_dataset(dataset: LabeledDataset, path: Union[str, Path]) -> Path:
    """Write a dataset in the directory format; load_dataset reproduces identical values."""
    directory = ensure_directory(path)
    meta_json = json.dumps(dataset.meta.model_dump(), indent=2)
    write_text_atomic(directory / META_FILE, meta_json + "\n")
    for filename, examples in zip(SPLIT_FILES, (dataset.train, dataset.test)):
        frame = _split_frame(examples, dataset.meta.V)
        write_text_atomic(directory / filename, frame.to_csv(index=False, lineterminator="\n"))
    return directory
