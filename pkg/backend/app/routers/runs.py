from fastapi import APIRouter, Depends, HTTPException, Query
from sqlalchemy.orm import Session
from typing import List

from app.database import get_db
from app.schemas.run import SweepRunDetailResponse, SweepRunResponse
from app.services import run_store_service

router = APIRouter(prefix="/runs", tags=["Runs"])


@router.get("", response_model=List[SweepRunResponse])
async def list_runs(
    skip: int = Query(0, ge=0),
    limit: int = Query(100, ge=1, le=1000),
    db: Session = Depends(get_db),
):
    """List recorded sweep runs, newest first"""
    return run_store_service.list_runs(db, skip, limit)


@router.get("/{run_id}", response_model=SweepRunDetailResponse)
async def get_run(run_id: int, db: Session = Depends(get_db)):
    """Get a recorded run with all of its rows"""
    run = run_store_service.get_run(db, run_id)
    if not run:
        raise HTTPException(status_code=404, detail="Run not found")
    return run
