from fastapi import APIRouter, File, HTTPException, Query, UploadFile
from typing import Optional
import logging

from app.exceptions import PositioningError
from app.routers.errors import http_error
from app.schemas.scenario import Scenario
from app.services import scenario_service

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/scenarios", tags=["Scenarios"])

# Scenario files are small JSON documents
MAX_SCENARIO_BYTES = 1 * 1024 * 1024  # 1MB


@router.get("/patterns/{pattern_id}", response_model=Scenario)
async def get_pattern(
    pattern_id: str,
    d_a: float = Query(..., ge=0, description="Initial distance of user A in meters"),
    psi_a: Optional[float] = Query(None, description="Initial angle of user A in degrees"),
):
    """Build one of the experimental patterns I-VI with user A at (d_a, psi_a)"""
    try:
        return scenario_service.make_pattern(pattern_id, d_a, psi_a)
    except PositioningError as e:
        raise http_error(e)


@router.post("/validate", response_model=Scenario)
async def validate_scenario(scenario: Scenario):
    """Echo a scenario back in normalized form (angles in [0, 360), defaults filled)"""
    return scenario


@router.post("/upload", response_model=Scenario)
async def upload_scenario(file: UploadFile = File(...)):
    """Parse and validate an uploaded scenario file"""
    content = await file.read()
    if len(content) > MAX_SCENARIO_BYTES:
        raise HTTPException(status_code=413, detail=f"Scenario file exceeds {MAX_SCENARIO_BYTES} bytes")

    try:
        text = content.decode("utf-8")
    except UnicodeDecodeError:
        raise HTTPException(status_code=400, detail="Scenario file must be UTF-8 text")

    try:
        scenario = scenario_service.parse_scenario(text, file.filename or "<upload>")
    except PositioningError as e:
        raise http_error(e)

    logger.info(f"📄 Uploaded scenario {file.filename} with {len(scenario.users)} users")
    return scenario
