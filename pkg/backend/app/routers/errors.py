from fastapi import HTTPException

from app.exceptions import (
    InfeasibleProfileError,
    NoFeasibleStrategyError,
    OracleBudgetExceededError,
    PositioningError,
)


def http_error(error: PositioningError) -> HTTPException:
    """Map a domain error onto the HTTP status the API reports for it"""
    if isinstance(error, OracleBudgetExceededError):
        return HTTPException(status_code=413, detail=str(error))
    if isinstance(error, (InfeasibleProfileError, NoFeasibleStrategyError)):
        return HTTPException(status_code=422, detail=str(error))
    return HTTPException(status_code=400, detail=str(error))
