"""
Services package - explanation, evaluation and run logic.
"""
from app.services.oracle_service import (
    PredictionOracle,
    CentroidClassifier,
    FunctionOracle,
    EchoModel,
    OracleError,
    OracleResponseError,
    EmptyClassError,
    fit_centroid_classifier,
    predict_winner,
)
from app.services.subprocess_oracle import SubprocessOracle, OracleProtocolError
from app.services.sset_service import (
    SsetExplainer,
    SsetError,
    DualSwapImpossibleError,
    explain,
)
from app.services.occlusion_service import occlusion_explain, OcclusionError
from app.services.synthetic_service import generate_synthetic, InvalidSpecError
from app.services.report_service import build_report, ReportError
from app.services.render_service import render_heatmap, RenderError
from app.services.run_service import run_explain, RunError, RunAbortedError

__all__ = [
    # Oracles
    "PredictionOracle",
    "CentroidClassifier",
    "FunctionOracle",
    "EchoModel",
    "OracleError",
    "OracleResponseError",
    "EmptyClassError",
    "fit_centroid_classifier",
    "predict_winner",
    "SubprocessOracle",
    "OracleProtocolError",
    # Explainers
    "SsetExplainer",
    "SsetError",
    "DualSwapImpossibleError",
    "explain",
    "occlusion_explain",
    "OcclusionError",
    # Evaluation and runs
    "generate_synthetic",
    "InvalidSpecError",
    "build_report",
    "ReportError",
    "render_heatmap",
    "RenderError",
    "run_explain",
    "RunError",
    "RunAbortedError",
]
