from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config import settings
from app.schemas.enums import Method, RateMode, Solver
from app.schemas.sap import SapConfig


class RunManifest(BaseModel):
    name: str = "run"
    patterns: List[str] = []
    scenario_path: Optional[str] = None
    methods: List[Method] = [Method.PROPOSED, Method.NO_MOVE]
    d_a_values: List[float] = Field(default_factory=lambda: [float(d) for d in range(1, 31)])
    psi_a_deg: float = 90.0
    grid: str = "default"
    sap: SapConfig = Field(default_factory=SapConfig)
    solver: Solver = Solver.SAP
    mode: RateMode = RateMode.EXACT
    master_seed: int = Field(default_factory=lambda: settings.DEFAULT_MASTER_SEED, ge=0)
    output_dir: str = Field(default_factory=lambda: settings.OUTPUT_DIR)
    workers: int = Field(default_factory=lambda: settings.MAX_WORKERS, ge=1)
    record: bool = False
    export_traces: bool = False

    @field_validator("methods")
    @classmethod
    def check_methods(cls, methods: List[Method]) -> List[Method]:
        if not methods:
            raise ValueError("at least one method is required")
        # Keep first occurrence order, drop duplicates
        return list(dict.fromkeys(methods))

    @field_validator("d_a_values")
    @classmethod
    def check_d_a_values(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("d_a_values must not be empty")
        if any(v < 0 for v in values):
            raise ValueError("d_a_values must be non-negative")
        return values

    @model_validator(mode="after")
    def check_source(self):
        if bool(self.patterns) == bool(self.scenario_path):
            raise ValueError("exactly one scenario source is required: patterns or scenario_path")
        return self
