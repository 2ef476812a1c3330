import sys
from pathlib import Path
from typing import Type, TypeVar

from pydantic import BaseModel, ValidationError

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

M = TypeVar("M", bound=BaseModel)


class CommandError(Exception):
    """Raised by handlers to stop with a message and an exit code."""

    def __init__(self, message: str, code: int = EXIT_USAGE):
        self.code = code
        super().__init__(message)


def fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def load_json_model(path: str, model: Type[M], what: str) -> M:
    """Read and validate a JSON file; unknown keys are rejected by the model."""
    file = Path(path)
    if not file.is_file():
        raise CommandError(f"{what} file not found: {path}")
    try:
        return model.model_validate_json(file.read_text(encoding="utf-8"))
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}" for err in e.errors()
        )
        raise CommandError(f"invalid {what} {path}: {problems}") from e
