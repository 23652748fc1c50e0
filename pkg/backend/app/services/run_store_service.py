"""
Run Store Service - records sweep runs in the database.
"""

import logging
from typing import Iterable, List, Optional

from sqlalchemy.orm import Session

from app.models.sweep_run import SweepRecord, SweepRun
from app.schemas.manifest import RunManifest
from app.schemas.result import SweepRow

logger = logging.getLogger(__name__)


def record_run(db: Session, manifest: RunManifest, rows: Iterable[SweepRow]) -> SweepRun:
    rows = list(rows)
    run = SweepRun(
        name=manifest.name,
        master_seed=manifest.master_seed,
        mode=manifest.mode.value,
        grid=manifest.grid,
        manifest=manifest.model_dump(mode="json"),
        row_count=len(rows),
    )
    for row in rows:
        run.records.append(
            SweepRecord(
                pattern=row.pattern,
                method=row.method.value,
                d_a_m=row.d_a_m,
                psi_a_deg=row.psi_a_deg,
                theta_bps=row.theta_bps,
                delta_theta=row.delta_theta,
                user_positions={
                    user_id: [position.distance_m, position.angle_deg]
                    for user_id, position in sorted(row.user_positions.items())
                },
                seed=row.seed,
            )
        )

    db.add(run)
    db.commit()
    db.refresh(run)
    logger.info(f"🗄️ Recorded run {run.id} ('{run.name}') with {run.row_count} rows")
    return run


def list_runs(db: Session, skip: int = 0, limit: int = 100) -> List[SweepRun]:
    return db.query(SweepRun).order_by(SweepRun.created_at.desc(), SweepRun.id.desc()).offset(skip).limit(limit).all()


def get_run(db: Session, run_id: int) -> Optional[SweepRun]:
    return db.query(SweepRun).filter(SweepRun.id == run_id).first()
