from typing import List, Optional

from pydantic import BaseModel

from app.schemas.config import SsetConfig


class OracleSpec(BaseModel):
    """`builtin` (centroid classifier fitted on the train split) or an external command."""

    kind: str
    command: Optional[List[str]] = None
    temperature: Optional[float] = None

    def describe(self) -> str:
        if self.kind == "builtin":
            return f"builtin(temperature={self.temperature})"
        return "cmd:" + " ".join(self.command or [])


class RunManifest(BaseModel):
    tool_version: str
    dataset: str
    oracle: OracleSpec
    config: SsetConfig
    seed: int
    instance_ids: List[str]
    selection: str
    output_dir: str
    jobs: int = 1
