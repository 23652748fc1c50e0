import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app import __version__
from app.config import settings
from app.database import init_db
from app.routers import scenarios, optimize, oracle, runs

logging.basicConfig(
    level=settings.LOG_LEVEL,
    format="%(asctime)s %(levelname)s %(name)s: %(message)s",
)

# Initialize FastAPI app
app = FastAPI(
    title="WLAN User Positioning API",
    description="Potential-game positioning of Wi-Fi users around a single access point",
    version=__version__,
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include routers
app.include_router(scenarios.router, prefix=f"{settings.API_V1_STR}")
app.include_router(optimize.router, prefix=f"{settings.API_V1_STR}")
app.include_router(oracle.router, prefix=f"{settings.API_V1_STR}")
app.include_router(runs.router, prefix=f"{settings.API_V1_STR}")


@app.on_event("startup")
async def startup_event():
    """Initialize database on startup"""
    init_db()


@app.get("/")
async def root():
    """Root endpoint"""
    return {
        "message": "WLAN User Positioning API",
        "version": __version__,
        "docs": "/docs",
    }


@app.get("/health")
async def health_check():
    """Health check endpoint"""
    return {"status": "healthy"}


if __name__ == "__main__":
    import uvicorn

    uvicorn.run("app.main:app", host="0.0.0.0", port=8000, reload=True)
