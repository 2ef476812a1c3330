from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, model_validator


class ExplanationStatus(str, Enum):
    EXPLAINED = "Explained"
    NO_SALIENT_SIGNAL = "NoSalientSignal"
    NO_SALIENT_SUBSEQUENCE = "NoSalientSubsequence"


class SalientSubsequence(BaseModel):
    signals: List[int]
    t_prime: int
    t_lo: int
    t_hi: int
    window_size: int
    ctx: int
    y_m_c: float
    drop: float
    neighbor_id: str

    class Config:
        frozen = True


class NeighborRef(BaseModel):
    id: str
    distance: float

    class Config:
        frozen = True


class SwapSource(BaseModel):
    """The neighbor whose values replaced a salient signal (or pair) during swapping."""

    signals: List[int]
    neighbor: NeighborRef
    swap_score: float

    class Config:
        frozen = True


class Explanation(BaseModel):
    instance_id: str
    winner_class: int
    y_i_c: float
    status: ExplanationStatus
    salient_signals: List[int] = []
    salient_pairs: List[Tuple[int, int]] = []
    dual_signals: bool = False
    subsequences: List[SalientSubsequence] = []
    swap_sources: List[SwapSource] = []
    chosen_neighbor: Optional[NeighborRef] = None
    ctx_used: Optional[int] = None
    attempts_used: int = 0
    dual_attempts_used: int = 0
    scopes_visited: int = 0
    scope_used: Optional[Tuple[float, float]] = None
    signal_names: List[str] = []
    importance: List[List[float]]

    @model_validator(mode="after")
    def check_status(self) -> "Explanation":
        has_signal = any(any(v != 0.0 for v in row) for row in self.importance)
        if (self.status == ExplanationStatus.EXPLAINED) != has_signal:
            raise ValueError("status Explained requires, and is required by, a nonzero importance cell")
        return self

    @property
    def T(self) -> int:
        return len(self.importance)

    @property
    def V(self) -> int:
        return len(self.importance[0]) if self.importance else 0

    def best_subsequence(self) -> Optional[SalientSubsequence]:
        """Sub-sequence with the lowest winner-class score; the first one on ties."""
        best = None
        for sub in self.subsequences:
            if best is None or sub.y_m_c < best.y_m_c:
                best = sub
        return best

    def representative_window(self) -> Optional[int]:
        """Smallest salient window size of this explanation."""
        if not self.subsequences:
            return None
        return min(sub.window_size for sub in self.subsequences)


class ExplanationErrorRecord(BaseModel):
    instance_id: str
    error: str
    message: str
