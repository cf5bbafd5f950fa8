#!/usr/bin/env python3
"""
Create and read operations for stored sweeps.
"""

import json
from typing import List, Optional

from loguru import logger
from sqlalchemy.orm import Session

from ..simulation.schemas import ExperimentConfig, SweepPoint, SweepResult
from .models import SweepPointRecord, SweepRun

# ============================================================================
# SWEEP RUNS
# ============================================================================


def save_sweep(db: Session, result: SweepResult, label: Optional[str] = None) -> SweepRun:
    """Persist a sweep and all of its points in one transaction"""
    if result.config is None:
        raise ValueError("Only sweeps that carry their configuration can be stored")
    cfg = result.config
    run = SweepRun(
        label=label,
        transmit_antennas=cfg.t,
        receive_antennas=cfg.r,
        constellation_order=cfg.order,
        signals_total=cfg.signals_total,
        fading_block=cfg.fading_block,
        seed=cfg.seed,
        config_json=cfg.json(),
    )
    for point in result.points:
        run.points.append(SweepPointRecord(**point.dict()))

    try:
        db.add(run)
        db.commit()
        db.refresh(run)
    except Exception as e:
        db.rollback()
        logger.error(f"Failed to save sweep: {e}")
        raise
    logger.info(f"Saved sweep run {run.id} with {len(result.points)} points")
    return run


def get_run(db: Session, run_id: int) -> Optional[SweepRun]:
    """Get a sweep run by ID"""
    return db.query(SweepRun).filter(SweepRun.id == run_id).first()


def get_runs(db: Session, skip: int = 0, limit: int = 100) -> List[SweepRun]:
    """Get sweep runs, newest first"""
    return db.query(SweepRun).order_by(SweepRun.id.desc()).offset(skip).limit(limit).all()


# ============================================================================
# SWEEP POINTS
# ============================================================================


def get_points(db: Session, run_id: int, detector: Optional[str] = None) -> List[SweepPointRecord]:
    """Get the points of a run, optionally for one detector"""
    query = db.query(SweepPointRecord).filter(SweepPointRecord.run_id == run_id)
    if detector:
        query = query.filter(SweepPointRecord.detector == detector)
    return query.order_by(SweepPointRecord.id).all()


def to_sweep_result(run: SweepRun) -> SweepResult:
    """Rebuild the SweepResult of a stored run"""
    points = [
        SweepPoint(**{name: getattr(record, name) for name in SweepPoint.__fields__})
        for record in sorted(run.points, key=lambda record: record.id)
    ]
    return SweepResult(points=points, config=ExperimentConfig(**json.loads(run.config_json)))
