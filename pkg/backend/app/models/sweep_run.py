from sqlalchemy import BigInteger, Column, DateTime, Float, ForeignKey, Integer, JSON, String
from sqlalchemy.orm import relationship
from datetime import datetime
from app.database import Base


class SweepRun(Base):
    __tablename__ = "sweep_runs"

    id = Column(Integer, primary_key=True, index=True)
    name = Column(String(255), nullable=False)
    master_seed = Column(BigInteger, nullable=False)
    mode = Column(String(20), nullable=False)  # exact, approx
    grid = Column(String(100), nullable=False)  # preset name or D0:D1:DSTEP/ASTEP
    manifest = Column(JSON, default={})
    row_count = Column(Integer, default=0)
    created_at = Column(DateTime, default=datetime.utcnow)

    # Relationships
    records = relationship("SweepRecord", back_populates="run", cascade="all, delete-orphan", order_by="SweepRecord.id")


class SweepRecord(Base):
    __tablename__ = "sweep_records"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("sweep_runs.id", ondelete="CASCADE"), nullable=False, index=True)
    pattern = Column(String(50), nullable=False)
    method = Column(String(50), nullable=False)  # proposed, no-move, greedy, new-users-game
    d_a_m = Column(Float, nullable=False)
    psi_a_deg = Column(Float, nullable=False)
    theta_bps = Column(Float, nullable=True)  # null when the profile breaks capture
    delta_theta = Column(Float, nullable=True)
    user_positions = Column(JSON, default={})  # user id -> [d, psi]
    seed = Column(BigInteger, nullable=False)

    # Relationships
    run = relationship("SweepRun", back_populates="records")
