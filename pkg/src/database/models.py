from datetime import datetime

from sqlalchemy import Column, DateTime, Float, ForeignKey, Integer, String, Text
from sqlalchemy.orm import declarative_base, relationship

Base = declarative_base()


class SweepRun(Base):
    """Model for storing one SNR sweep invocation"""
    __tablename__ = 'sweep_runs'

    id = Column(Integer, primary_key=True, autoincrement=True)
    label = Column(String(255))
    transmit_antennas = Column(Integer, nullable=False)
    receive_antennas = Column(Integer, nullable=False)
    constellation_order = Column(Integer, nullable=False)
    signals_total = Column(Integer, nullable=False)
    fading_block = Column(Integer, nullable=False)
    seed = Column(Integer, nullable=False)
    config_json = Column(Text, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow)

    # Relationship
    points = relationship("SweepPointRecord", back_populates="run", cascade="all, delete-orphan")


class SweepPointRecord(Base):
    """Model for storing one (detector, SNR) result of a sweep"""
    __tablename__ = 'sweep_points'

    id = Column(Integer, primary_key=True, autoincrement=True)
    run_id = Column(Integer, ForeignKey('sweep_runs.id'), nullable=False)
    detector = Column(String(100), nullable=False)
    snr_db = Column(Float, nullable=False)
    ser = Column(Float, nullable=False)
    ser_stderr = Column(Float, nullable=False)
    avg_muldiv = Column(Float, nullable=False)
    max_muldiv = Column(Integer, nullable=False)
    avg_nodes = Column(Float, nullable=False)
    max_nodes = Column(Integer, nullable=False)
    avg_cmps = Column(Float, nullable=False)
    max_cmps = Column(Integer, nullable=False)
    trials = Column(Integer, nullable=False)
    symbol_errors = Column(Integer)

    # Relationship
    run = relationship("SweepRun", back_populates="points")
