from datetime import datetime
from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class SweepRecordResponse(BaseModel):
    id: int
    pattern: str
    method: str
    d_a_m: float
    psi_a_deg: float
    theta_bps: Optional[float] = None
    delta_theta: Optional[float] = None
    user_positions: Dict[str, Any] = {}
    seed: int

    class Config:
        from_attributes = True


class SweepRunResponse(BaseModel):
    id: int
    name: str
    master_seed: int
    mode: str
    grid: str
    row_count: int
    created_at: datetime
    manifest: Dict[str, Any] = {}

    class Config:
        from_attributes = True


class SweepRunDetailResponse(SweepRunResponse):
    records: List[SweepRecordResponse] = []
