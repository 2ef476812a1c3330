from pydantic import BaseModel, model_validator
from typing import List


class DatasetMeta(BaseModel):
    T: int
    V: int
    C: int
    signal_names: List[str]
    class_names: List[str]
    signal_groups: List[List[int]] = []

    class Config:
        frozen = True
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "T": 4,
                "V": 2,
                "C": 2,
                "signal_names": ["EDA", "TEMP"],
                "class_names": ["baseline", "stress"],
                "signal_groups": [[0, 1]],
            }
        }

    @model_validator(mode="after")
    def check_consistency(self) -> "DatasetMeta":
        if self.T < 1 or self.V < 1 or self.C < 1:
            raise ValueError("T, V and C must be positive")
        if len(self.signal_names) != self.V:
            raise ValueError(f"signal_names has {len(self.signal_names)} entries, expected V={self.V}")
        if len(self.class_names) != self.C:
            raise ValueError(f"class_names has {len(self.class_names)} entries, expected C={self.C}")
        seen = set()
        for group in self.signal_groups:
            for index in group:
                if index < 0 or index >= self.V:
                    raise ValueError(f"signal group index {index} out of range 0..{self.V - 1}")
                if index in seen:
                    raise ValueError(f"signal {index} appears in more than one group")
                seen.add(index)
        return self

    @property
    def non_correlated(self) -> List[int]:
        """Signals outside every declared group."""
        grouped = {i for group in self.signal_groups for i in group}
        return [s for s in range(self.V) if s not in grouped]
