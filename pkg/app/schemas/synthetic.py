from typing import Dict, List, Optional

from pydantic import BaseModel, model_validator


class PlantedPattern(BaseModel):
    signal: int
    start: int
    end: int
    amplitude: float

    class Config:
        frozen = True


class SyntheticSpec(BaseModel):
    T: int = 30
    V: int = 8
    C: int = 3
    planted: List[PlantedPattern] = [
        PlantedPattern(signal=2, start=3, end=10, amplitude=0.4),
        PlantedPattern(signal=2, start=12, end=19, amplitude=0.4),
        PlantedPattern(signal=2, start=21, end=28, amplitude=0.4),
    ]
    noise_sigma: float = 0.05
    smoothing: int = 3
    baseline_level: float = 0.3
    n_train: int = 300
    n_test: int = 100
    seed: int = 0
    signal_names: Optional[List[str]] = None
    class_names: Optional[List[str]] = None
    signal_groups: List[List[int]] = []

    class Config:
        frozen = True
        extra = "forbid"

    @model_validator(mode="after")
    def check_spec(self) -> "SyntheticSpec":
        if self.T < 1 or self.V < 1 or self.C < 1:
            raise ValueError("T, V and C must be positive")
        if len(self.planted) != self.C:
            raise ValueError(f"expected one planted pattern per class ({self.C}), got {len(self.planted)}")
        keys = set()
        for c, p in enumerate(self.planted):
            if not 0 <= p.signal < self.V:
                raise ValueError(f"class {c}: planted signal {p.signal} out of range 0..{self.V - 1}")
            if not 0 <= p.start <= p.end <= self.T - 1:
                raise ValueError(f"class {c}: planted interval [{p.start}, {p.end}] must satisfy 0 <= a <= b <= T-1")
            if not 0.0 <= self.baseline_level + p.amplitude <= 1.0:
                raise ValueError(f"class {c}: baseline_level + amplitude must stay within [0, 1]")
            key = (p.signal, p.start, p.end)
            if key in keys:
                raise ValueError(f"class {c}: planted (signal, interval) repeats another class")
            keys.add(key)
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be >= 0")
        if self.smoothing < 1:
            raise ValueError("smoothing must be >= 1")
        if not 0.0 <= self.baseline_level <= 1.0:
            raise ValueError("baseline_level must lie in [0, 1]")
        if self.n_train < self.C:
            raise ValueError("n_train must provide at least one instance per class")
        if self.n_test < 0:
            raise ValueError("n_test must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.signal_names is not None and len(self.signal_names) != self.V:
            raise ValueError("signal_names must have V entries")
        if self.class_names is not None and len(self.class_names) != self.C:
            raise ValueError("class_names must have C entries")
        return self


class GroundTruthEntry(BaseModel):
    label: int
    signal: int
    start: int
    end: int


class GroundTruth(BaseModel):
    spec: SyntheticSpec
    instances: Dict[str, GroundTruthEntry]
