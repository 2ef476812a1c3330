from app.schemas.dataset import DatasetMeta
from app.schemas.config import SsetConfig, OcclusionConfig, Replacement
from app.schemas.explanation import Explanation, ExplanationStatus, SalientSubsequence, NeighborRef, SwapSource
from app.schemas.synthetic import SyntheticSpec, PlantedPattern, GroundTruth
from app.schemas.report import QualityReport, ReportBundle, WindowSizeDistribution
from app.schemas.manifest import RunManifest, OracleSpec

__all__ = ["DatasetMeta", "SsetConfig", "OcclusionConfig", "Replacement", "Explanation", "ExplanationStatus", "SalientSubsequence", "NeighborRef", "SwapSource", "SyntheticSpec", "PlantedPattern", "GroundTruth", "QualityReport", "ReportBundle", "WindowSizeDistribution", "RunManifest", "OracleSpec"]
