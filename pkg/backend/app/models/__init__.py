from app.models.sweep_run import SweepRun, SweepRecord

__all__ = [
    "SweepRun",
    "SweepRecord",
]
