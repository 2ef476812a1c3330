"""
File storage utilities for run outputs.
"""
import os
import tempfile
from pathlib import Path
from typing import Union


class FileStoreError(Exception):
    """Base exception for file storage errors."""
    pass


class OutputExistsError(FileStoreError):
    """Raised when an output path exists and is not a directory."""
    pass


def ensure_directory(path: Union[str, Path]) -> Path:
    """
    Create a directory (and parents) if it doesn't exist.

    Raises:
        OutputExistsError: If the path exists as a regular file.
    """
    directory = Path(path)
    if directory.exists() and not directory.is_dir():
        raise OutputExistsError(f"'{directory}' exists and is not a directory")
    directory.mkdir(parents=True, exist_ok=True)
    return directory


def write_text_atomic(path: Union[str, Path], content: str) -> Path:
    """
    Write text so readers never observe a partially written file.

    The content goes to a temporary file in the same directory which then
    replaces the target.
    """
    target = Path(path)
    ensure_directory(target.parent)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(content)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return target


def safe_filename(instance_id: str) -> str:
    """Instance ids become file stems; path separators are replaced."""
    cleaned = "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in instance_id)
    return cleaned or "_"
