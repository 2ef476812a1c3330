from typing import Dict, List, Optional

from pydantic import BaseModel


class InstanceQuality(BaseModel):
    instance_id: str
    explained: bool
    precision: float
    informativeness: int
    similarity: Optional[float] = None


class QualityReport(BaseModel):
    explainer: str
    precision: float
    precision_pessimistic: float
    informativeness: float
    similarity: float
    n_explained: int
    n_failed: int
    rows: List[InstanceQuality] = []


class WindowSizeDistribution(BaseModel):
    histogram: Dict[int, int] = {}
    mean: Optional[float] = None
    n: int = 0
    small_window_share: Optional[float] = None


class ScatterPoint(BaseModel):
    instance_id: str
    distance: float
    window_size: int


class ReportBundle(BaseModel):
    dataset: str
    n_instances: int
    quality: List[QualityReport]
    signal_histogram: Dict[str, int]
    group_histogram: Dict[str, int]
    window_sizes: WindowSizeDistribution
    distance_window_correlation: Optional[float] = None
    correlation_note: Optional[str] = None
    mean_neighbor_distance: Optional[float] = None
    scatter: List[ScatterPoint] = []
