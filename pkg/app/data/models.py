from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from app.schemas.dataset import DatasetMeta


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=np.float64)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class TimeSeriesInstance:
    """A T×V matrix, indexed [t][s]."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        array = _frozen_array(self.values)
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise ValueError(f"instance {self.id}: expected a non-empty T×V matrix, got shape {array.shape}")
        object.__setattr__(self, "values", array)

    @property
    def T(self) -> int:
        return self.values.shape[0]

    @property
    def V(self) -> int:
        return self.values.shape[1]

    def with_cells(
        self,
        new_id: str,
        source: "TimeSeriesInstance",
        signals: Sequence[int],
        t_lo: int = 0,
        t_hi: int = None,
    ) -> "TimeSeriesInstance":
        """Copy of this instance with cells [t_lo..t_hi] × signals taken from `source`."""
        if t_hi is None:
            t_hi = self.T - 1
        values = self.values.copy()
        columns = list(signals)
        values[t_lo:t_hi + 1, columns] = source.values[t_lo:t_hi + 1, columns]
        return TimeSeriesInstance(new_id, values)

    def __eq__(self, other):
        if not isinstance(other, TimeSeriesInstance):
            return NotImplemented
        return self.id == other.id and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return f"<TimeSeriesInstance(id={self.id}, T={self.T}, V={self.V})>"


@dataclass(frozen=True)
class LabeledExample:
    instance: TimeSeriesInstance
    label: int


@dataclass(frozen=True)
class LabeledDataset:
    meta: DatasetMeta
    train: Tuple[LabeledExample, ...]
    test: Tuple[LabeledExample, ...]
    _index: Dict[str, LabeledExample] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "train", tuple(self.train))
        object.__setattr__(self, "test", tuple(self.test))
        index: Dict[str, LabeledExample] = {}
        for example in self.train + self.test:
            inst = example.instance
            if inst.id in index:
                raise ValueError(f"duplicate instance id {inst.id}")
            if inst.values.shape != (self.meta.T, self.meta.V):
                raise ValueError(
                    f"instance {inst.id} has shape {inst.values.shape}, expected ({self.meta.T}, {self.meta.V})"
                )
            if not 0 <= example.label < self.meta.C:
                raise ValueError(f"instance {inst.id} label {example.label} out of range 0..{self.meta.C - 1}")
            index[inst.id] = example
        object.__setattr__(self, "_index", index)

    def get(self, instance_id: str) -> LabeledExample:
        """
        Look up an instance in either split.

        Raises:
            KeyError: If the id is unknown.
        """
        try:
            return self._index[instance_id]
        except KeyError:
            raise KeyError(f"instance {instance_id} not found in dataset") from None

    def test_ids(self) -> List[str]:
        return [example.instance.id for example in self.test]


@dataclass(frozen=True, eq=False)
class ImportanceMatrix:
    """Per-(time step, signal) scores in [0, 1]."""

    scores: np.ndarray

    def __post_init__(self):
        array = _frozen_array(self.scores)
        if array.ndim != 2:
            raise ValueError(f"importance must be a T×V matrix, got shape {array.shape}")
        if array.size and (array.min() < 0.0 or array.max() > 1.0):
            raise ValueError("importance scores must lie in [0, 1]")
        object.__setattr__(self, "scores", array)

    @classmethod
    def zeros(cls, T: int, V: int) -> "ImportanceMatrix":
        return cls(np.zeros((T, V)))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.scores.shape

    def nonzero_steps(self) -> int:
        """Number of time steps with at least one nonzero cell."""
        return int(np.count_nonzero(np.any(self.scores != 0.0, axis=1)))

    def is_zero(self) -> bool:
        return not np.any(self.scores)

    def to_rows(self) -> List[List[float]]:
        return [[float(v) for v in row] for row in self.scores]

    def __eq__(self, other):
        if not isinstance(other, ImportanceMatrix):
            return NotImplemented
        return np.array_equal(self.scores, other.scores)


def stack_values(instances: Iterable[TimeSeriesInstance]) -> np.ndarray:
    return np.stack([inst.values for inst in instances])
