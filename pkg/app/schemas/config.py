from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, model_validator


class SsetConfig(BaseModel):
    """Hyperparameters of the swapping-sliding explanation procedure."""

    thr_c: float = 0.5
    thr_n: float = 8.0
    thr_a: int = 10
    l: float = 1.0  # noqa: E741
    delta: float = 0.1
    # Accepted but unused: scopes are [k·delta, k·delta + l] for k >= 0
    start: float = -1.0
    n_neighbors: int = 10
    ctx0: int = 1
    lambda_: float = Field(0.1, alias="lambda")
    alpha: float = 0.9
    ctx_max: Optional[int] = None

    class Config:
        frozen = True
        extra = "forbid"
        populate_by_name = True

    @model_validator(mode="after")
    def check_ranges(self) -> "SsetConfig":
        if not 0.0 < self.thr_c < 1.0:
            raise ValueError("thr_c must lie in (0, 1)")
        if not 0.0 < self.delta <= self.l <= self.thr_n:
            raise ValueError("expected 0 < delta <= l <= thr_n")
        if self.thr_a < 1:
            raise ValueError("thr_a must be >= 1")
        if self.n_neighbors < 1:
            raise ValueError("n_neighbors must be >= 1")
        if self.lambda_ < 0.0:
            raise ValueError("lambda must be >= 0")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if self.ctx0 < 1:
            raise ValueError("ctx0 must be >= 1")
        if self.ctx_max is not None and self.ctx_max < self.ctx0:
            raise ValueError("ctx_max must be >= ctx0")
        return self

    def resolved_ctx_max(self, T: int) -> int:
        """Context growth cap; defaults to floor((T - 1) / 2)."""
        if self.ctx_max is not None:
            return self.ctx_max
        return max(self.ctx0, (T - 1) // 2)

    def scope_count(self) -> int:
        """Number of scopes [k·delta, k·delta + l] with k·delta + l <= thr_n."""
        return int((self.thr_n - self.l) / self.delta + 1e-9) + 1


class Replacement(str, Enum):
    TRAIN_MEAN = "TrainMean"
    ZERO = "Zero"


class OcclusionConfig(BaseModel):
    window_size: int = 3
    replacement: Replacement = Replacement.TRAIN_MEAN

    class Config:
        frozen = True
        extra = "forbid"

    @model_validator(mode="after")
    def check_window(self) -> "OcclusionConfig":
        if self.window_size < 1 or self.window_size % 2 == 0:
            raise ValueError("window_size must be an odd positive integer")
        return self
