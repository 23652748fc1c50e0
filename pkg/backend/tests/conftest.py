import os

# In-memory database for everything the app opens during tests
os.environ.setdefault("DATABASE_URL", "sqlite://")

import numpy as np
import pytest
from fastapi.testclient import TestClient
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

import app.models  # noqa: F401
from app.database import Base, get_db
from app.main import app
from app.schemas.enums import UserLabel
from app.schemas.grid import StrategyGrid
from app.schemas.radio import RadioParams
from app.schemas.scenario import Scenario, UserSpec
from app.services.scenario_service import make_pattern


@pytest.fixture
def radio():
    return RadioParams()


@pytest.fixture
def oracle_grid():
    return StrategyGrid.oracle()


@pytest.fixture
def pattern_one():
    return make_pattern("I", 15, 90)


@pytest.fixture
def pattern_two_far():
    return make_pattern("II", 30, 90)


@pytest.fixture
def pattern_three_far():
    return make_pattern("III", 30, 90)


@pytest.fixture
def equal_distance_scenario():
    return make_pattern("I", 5, 90)


def random_scenario(rng: np.random.Generator, n_users: int = 4) -> Scenario:
    """Uniform placement between 5 and 25 m; any such profile of up to 4 users passes capture."""
    labels = [UserLabel.EXISTING, UserLabel.EXISTING, UserLabel.NEW, UserLabel.NEW]
    users = [
        UserSpec(
            id=chr(ord("A") + i),
            distance_m=float(rng.uniform(5.0, 25.0)),
            angle_deg=float(rng.uniform(0.0, 360.0)),
            label=labels[i % len(labels)],
        )
        for i in range(n_users)
    ]
    return Scenario(name="random", users=users)


@pytest.fixture
def scenario_factory():
    return random_scenario


@pytest.fixture
def db_engine():
    engine = create_engine(
        "sqlite://",
        connect_args={"check_same_thread": False},
        poolclass=StaticPool,
    )
    Base.metadata.create_all(bind=engine)
    yield engine
    Base.metadata.drop_all(bind=engine)


@pytest.fixture
def db_session(db_engine):
    session = sessionmaker(autocommit=False, autoflush=False, bind=db_engine)()
    try:
        yield session
    finally:
        session.close()


@pytest.fixture
def client(db_engine):
    TestingSession = sessionmaker(autocommit=False, autoflush=False, bind=db_engine)

    def override_get_db():
        db = TestingSession()
        try:
            yield db
        finally:
            db.close()

    app.dependency_overrides[get_db] = override_get_db
    with TestClient(app) as test_client:
        yield test_client
    app.dependency_overrides.clear()
