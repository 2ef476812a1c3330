from app.core.config import Settings, get_settings
from app.core.distance import euclidean_distance, pearson_correlation
from app.core.random import RandomSource

__all__ = ["Settings", "get_settings", "euclidean_distance", "pearson_correlation", "RandomSource"]
