from app.schemas.enums import BetaSchedule, Method, RateMode, Solver, UserLabel, UtilityScale
from app.schemas.radio import RadioParams
from app.schemas.scenario import Arena, MovingPair, PatternSpec, Position, PositionProfile, Scenario, UserSpec
from app.schemas.grid import StrategyGrid
from app.schemas.sap import SapConfig, SapStep, SapTrace
from app.schemas.result import OptimizationResult, OracleReport, SweepRow, SWEEP_COLUMNS
from app.schemas.manifest import RunManifest

__all__ = [
    "BetaSchedule",
    "Method",
    "RateMode",
    "Solver",
    "UserLabel",
    "UtilityScale",
    "RadioParams",
    "Arena",
    "MovingPair",
    "PatternSpec",
    "Position",
    "PositionProfile",
    "Scenario",
    "UserSpec",
    "StrategyGrid",
    "SapConfig",
    "SapStep",
    "SapTrace",
    "OptimizationResult",
    "OracleReport",
    "SweepRow",
    "SWEEP_COLUMNS",
    "RunManifest",
]
