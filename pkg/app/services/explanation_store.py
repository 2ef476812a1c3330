"""
Explanation Store - JSON and CSV files for explanations.
"""
from pathlib import Path
from typing import List, Union

import pandas as pd

from app.core.file_store import safe_filename, write_text_atomic
from app.schemas.explanation import Explanation, ExplanationErrorRecord

EXPLANATION_SUFFIX = ".explanation.json"
ERROR_SUFFIX = ".error.json"


def importance_frame(explanation: Explanation) -> pd.DataFrame:
    records = [
        (t, s, score)
        for t, row in enumerate(explanation.importance)
        for s, score in enumerate(row)
    ]
    return pd.DataFrame.from_records(records, columns=["t", "s", "score"])


def save_explanation(explanation: Explanation, directory: Union[str, Path]) -> Path:
    """Write `<id>.explanation.json` and `<id>.importance.csv`; returns the JSON path."""
    stem = safe_filename(explanation.instance_id)
    directory = Path(directory)
    json_path = write_text_atomic(directory / f"{stem}{EXPLANATION_SUFFIX}",
                                  explanation.model_dump_json(indent=2) + "\n")
    csv_text = importance_frame(explanation).to_csv(index=False, lineterminator="\n")
    write_text_atomic(directory / f"{stem}.importance.csv", csv_text)
    return json_path


def save_error(record: ExplanationErrorRecord, directory: Union[str, Path]) -> Path:
    stem = safe_filename(record.instance_id)
    return write_text_atomic(Path(directory) / f"{stem}{ERROR_SUFFIX}", record.model_dump_json(indent=2) + "\n")


def load_explanation(path: Union[str, Path]) -> Explanation:
    return Explanation.model_validate_json(Path(path).read_text(encoding="utf-8"))


def load_explanations(directory: Union[str, Path]) -> List[Explanation]:
    """All explanations of a run directory, ordered by file name."""
    return [load_explanation(p) for p in sorted(Path(directory).glob(f"*{EXPLANATION_SUFFIX}"))]
