from fastapi import APIRouter, HTTPException
import logging

from app.exceptions import PositioningError
from app.routers.errors import http_error
from app.schemas.grid import StrategyGrid
from app.schemas.requests import OracleRequest, OracleResponse
from app.services.oracle_service import OracleService

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/oracle", tags=["Oracle"])


@router.post("", response_model=OracleResponse)
def run_oracle(request: OracleRequest):
    """Exhaustive best profile of one mover pair, plus an optional Nash check of a given profile"""
    try:
        grid = StrategyGrid.from_spec(request.grid)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))

    try:
        oracle = OracleService(request.scenario, grid, request.pair, request.mode)
        report = oracle.brute_force_best()
        is_nash = oracle.verify_nash(request.profile) if request.profile is not None else None
    except PositioningError as e:
        raise http_error(e)

    return OracleResponse(report=report, profile_is_nash=is_nash)
