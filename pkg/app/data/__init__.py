from app.data.models import TimeSeriesInstance, LabeledExample, LabeledDataset, ImportanceMatrix
from app.data.store import load_dataset, save_dataset, DatasetError

__all__ = [
    "TimeSeriesInstance",
    "LabeledExample",
    "LabeledDataset",
    "ImportanceMatrix",
    "load_dataset",
    "save_dataset",
    "DatasetError",
]
