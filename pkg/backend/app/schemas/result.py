import json
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from app.schemas.enums import Method
from app.schemas.grid import StrategyGrid
from app.schemas.sap import SapTrace
from app.schemas.scenario import MovingPair, Position, PositionProfile


class OptimizationResult(BaseModel):
    method: Method
    pair: Optional[MovingPair] = None
    profile: PositionProfile
    rates: Dict[str, float] = {}
    theta: Optional[float] = None  # None when the profile is not capture-feasible
    theta_no_move: Optional[float] = None
    delta_theta: Optional[float] = None
    seeds: List[int] = []
    wall_time_s: float = 0.0
    pair_thetas: Dict[str, float] = {}  # "X-Y" -> theta of that mover pair
    moved_users: List[str] = []
    trace: Optional[SapTrace] = None


class OracleReport(BaseModel):
    grid: StrategyGrid
    pair: MovingPair
    best_theta: float
    best_profile: PositionProfile
    feasible_profiles: int
    total_profiles: int
    nash_certificate: bool


# Column order of every sweep CSV
SWEEP_COLUMNS = [
    "pattern",
    "method",
    "d_A_m",
    "psi_A_deg",
    "theta_bps",
    "delta_theta",
    "user_positions_json",
    "seed",
]


class SweepRow(BaseModel):
    pattern: str
    method: Method
    d_a_m: float
    psi_a_deg: float
    theta_bps: Optional[float] = None
    delta_theta: Optional[float] = None
    user_positions: Dict[str, Position] = Field(default_factory=dict)
    seed: int = 0

    def to_record(self) -> dict:
        positions = {
            user_id: [position.distance_m, position.angle_deg]
            for user_id, position in sorted(self.user_positions.items())
        }
        return {
            "pattern": self.pattern,
            "method": self.method.value,
            "d_A_m": self.d_a_m,
            "psi_A_deg": self.psi_a_deg,
            "theta_bps": self.theta_bps,
            "delta_theta": self.delta_theta,
            "user_positions_json": json.dumps(positions, separators=(",", ":")),
            "seed": self.seed,
        }

    @classmethod
    def from_record(cls, record: dict) -> "SweepRow":
        positions = json.loads(record["user_positions_json"]) if record.get("user_positions_json") else {}
        return cls(
            pattern=str(record["pattern"]),
            method=Method(record["method"]),
            d_a_m=float(record["d_A_m"]),
            psi_a_deg=float(record["psi_A_deg"]),
            theta_bps=_optional_float(record.get("theta_bps")),
            delta_theta=_optional_float(record.get("delta_theta")),
            user_positions={
                user_id: Position(distance_m=d, angle_deg=psi) for user_id, (d, psi) in positions.items()
            },
            seed=int(record["seed"]),
        )


def _optional_float(value) -> Optional[float]:
    if value is None or value == "":
        return None
    number = float(value)
    return None if number != number else number  # NaN from empty CSV cells
