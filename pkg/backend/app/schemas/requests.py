from typing import Optional

from pydantic import BaseModel, Field

from app.schemas.enums import Method, RateMode, Solver
from app.schemas.result import OracleReport
from app.schemas.sap import SapConfig
from app.schemas.scenario import MovingPair, PositionProfile, Scenario


class OptimizeRequest(BaseModel):
    scenario: Scenario
    method: Method = Method.PROPOSED
    grid: str = "default"
    sap: SapConfig = Field(default_factory=SapConfig)
    solver: Solver = Solver.SAP
    mode: RateMode = RateMode.EXACT
    include_trace: bool = False


class OracleRequest(BaseModel):
    scenario: Scenario
    pair: MovingPair
    grid: str = "oracle"
    mode: RateMode = RateMode.EXACT
    profile: Optional[PositionProfile] = None  # checked for Nash when given


class OracleResponse(BaseModel):
    report: OracleReport
    profile_is_nash: Optional[bool] = None
