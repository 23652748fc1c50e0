from app.routers import scenarios, optimize, oracle, runs

__all__ = ["scenarios", "optimize", "oracle", "runs"]
