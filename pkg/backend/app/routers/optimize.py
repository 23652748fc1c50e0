from fastapi import APIRouter, HTTPException
import logging

from app.exceptions import PositioningError
from app.routers.errors import http_error
from app.schemas.grid import StrategyGrid
from app.schemas.requests import OptimizeRequest
from app.schemas.result import OptimizationResult
from app.services.optimizer_service import OptimizerService

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/optimize", tags=["Optimize"])


@router.post("", response_model=OptimizationResult)
def optimize(request: OptimizeRequest):
    """
    Run one positioning method on a scenario.

    Methods: proposed (all mover pairs), no-move, greedy, new-users-game.
    The SAP trace is returned only when include_trace is set.
    """
    try:
        grid = StrategyGrid.from_spec(request.grid)
    except ValueError as e:
        raise HTTPException(status_code=400, detail=str(e))

    try:
        optimizer = OptimizerService(request.scenario, grid, request.mode)
        result = optimizer.run_method(request.method, request.sap, request.solver)
    except PositioningError as e:
        logger.warning(f"⚠️ Optimize request failed: {e}")
        raise http_error(e)

    if not request.include_trace:
        result = result.model_copy(update={"trace": None})
    return result
