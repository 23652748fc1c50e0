import math
from typing import List, Optional

from pydantic import BaseModel, Field

from app.config import settings
from app.schemas.enums import BetaSchedule, UtilityScale
from app.schemas.scenario import PositionProfile


class SapConfig(BaseModel):
    max_steps: int = Field(default_factory=lambda: settings.DEFAULT_SAP_STEPS, ge=1)
    beta_schedule: BetaSchedule = BetaSchedule.LINEAR
    beta_scale: float = Field(1.0, gt=0)
    temperature_floor: float = Field(1e-3, gt=0)  # minimum beta, also used at k=0
    rng_seed: int = Field(0, ge=0, lt=2**64)
    utility_scale: UtilityScale = UtilityScale.RELATIVE
    record_trace: bool = True

    class Config:
        frozen = True

    def beta(self, step: int) -> float:
        if self.beta_schedule == BetaSchedule.LINEAR:
            value = self.beta_scale * step
        elif self.beta_schedule == BetaSchedule.LOG:
            value = self.beta_scale * math.log1p(step)
        else:
            value = self.beta_scale
        return max(self.temperature_floor, value)


class SapStep(BaseModel):
    step: int
    player: str
    distance_m: float
    angle_deg: float
    hat_utility: float
    theta: float
    best_theta: float


class SapTrace(BaseModel):
    steps: List[SapStep] = []
    best_theta: Optional[float] = None
    best_step: Optional[int] = None  # 0 when the starting profile was never beaten
    best_profile: Optional[PositionProfile] = None
    utility_scale: float = 1.0
